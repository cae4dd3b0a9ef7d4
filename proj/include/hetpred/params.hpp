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

#ifndef HETPRED_PARAMS_HPP_
#define HETPRED_PARAMS_HPP_

#include "hetpred/tape.hpp"
#include "hetpred/tensor.hpp"

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hetpred::nn
{

struct ParamId
{
  std::size_t index = 0;
  bool operator==(const ParamId &) const = default;
};

enum class ParamInit {
  // U(-1/sqrt(fan_in), +1/sqrt(fan_in))
  uniform,
  // LSTM gate bias: uniform, except the forget block which starts at 1.0.
  lstm_bias,
};

/// Named learnable tensors in registration order. Registration order is the
/// enumeration order used by the optimizer, checkpoints and gradient checks.
class ParameterStore
{
public:
  ParameterStore() = default;
  // Tapes alias parameter storage, so a store is never copied implicitly.
  ParameterStore(const ParameterStore &) = delete;
  ParameterStore & operator=(const ParameterStore &) = delete;
  ParameterStore(ParameterStore &&) = default;
  ParameterStore & operator=(ParameterStore &&) = default;

  /// Throws ConfigError on a duplicate name.
  ParamId add(std::string name, ad::Shape shape, std::size_t fan_in, ParamInit init = ParamInit::uniform);

  std::size_t size() const { return values_.size(); }
  std::size_t scalar_count() const;
  const std::string & name(std::size_t i) const { return meta_[i].name; }
  const ad::Tensor & value(std::size_t i) const { return values_[i]; }
  ad::Tensor & value(std::size_t i) { return values_[i]; }
  const ad::Tensor & value(ParamId id) const { return values_[id.index]; }
  ad::Tensor & value(ParamId id) { return values_[id.index]; }
  std::size_t fan_in(std::size_t i) const { return meta_[i].fan_in; }
  std::optional<ParamId> find(const std::string & name) const;

  /// Deterministic re-initialization of every parameter from one seed.
  void init(std::uint64_t seed);

  /// Element-by-element copy of values from a store with identical layout.
  void copy_values_from(const ParameterStore & other);
  bool same_layout(const ParameterStore & other) const;

private:
  struct Meta
  {
    std::string name;
    std::size_t fan_in;
    ParamInit init;
  };
  std::deque<ad::Tensor> values_;
  std::vector<Meta> meta_;
  std::map<std::string, std::size_t> index_;
};

/// Lazily binds parameters of a store onto one tape, one leaf per parameter.
class ParamBinding
{
public:
  ParamBinding(ad::Tape & tape, const ParameterStore & store);

  ad::Var operator()(ParamId id);
  ad::Tape & tape() { return tape_; }
  const ParameterStore & store() const { return store_; }

  /// Gradients after tape.backward(), aligned with the store; zeros for
  /// parameters that were never bound.
  std::vector<ad::Tensor> gradients() const;
  /// Adds this tape's gradients into `sums` (same alignment).
  void accumulate_gradients(std::vector<ad::Tensor> & sums) const;

private:
  ad::Tape & tape_;
  const ParameterStore & store_;
  std::vector<std::optional<ad::Var>> bound_;
};

std::vector<ad::Tensor> zero_gradients(const ParameterStore & store);

}  // namespace hetpred::nn

#endif  // HETPRED_PARAMS_HPP_
