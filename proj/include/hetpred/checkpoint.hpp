// Copyright 2026 The hetpred Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HETPRED_CHECKPOINT_HPP_
#define HETPRED_CHECKPOINT_HPP_

#include "hetpred/params.hpp"
#include "hetpred/tensor.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace hetpred::nn
{

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Binary container of string metadata plus (name, shape, values) triples.
///
/// Layout (little-endian):
///   "HPCKPT\0\0" | u32 version | u32 n_meta | n_meta x (str key, str value)
///   | u32 n_tensors | n_tensors x (str name, u32 rank, rank x u64 dim, f64 values)
/// where str is u32 length followed by raw bytes. Values are stored as raw
/// IEEE-754 bits, so save/load round-trips exactly.
struct Checkpoint
{
  std::map<std::string, std::string> metadata;
  std::vector<std::pair<std::string, ad::Tensor>> tensors;

  const ad::Tensor * find(const std::string & name) const;
};

void save_checkpoint(const std::filesystem::path & path, const Checkpoint & ckpt);
Checkpoint load_checkpoint(const std::filesystem::path & path);

void append_parameters(Checkpoint & ckpt, const ParameterStore & store, const std::string & prefix = "");
/// Fills every parameter of `store` from `prefix + name`; ConfigError when a
/// tensor is missing or has a different shape.
void restore_parameters(const Checkpoint & ckpt, ParameterStore & store, const std::string & prefix = "");

}  // namespace hetpred::nn

#endif  // HETPRED_CHECKPOINT_HPP_
