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

#ifndef HETPRED_MODEL_FACTORY_HPP_
#define HETPRED_MODEL_FACTORY_HPP_

#include "hetpred/checkpoint.hpp"
#include "hetpred/model.hpp"

#include <map>
#include <memory>
#include <string>

namespace hetpred::model
{

/// Builds an uninitialized model from "model.kind" and its config keys.
std::unique_ptr<SequenceModel> make_model(const std::map<std::string, std::string> & metadata);

/// make_model plus parameter values from the checkpoint.
std::unique_ptr<SequenceModel> load_model(const nn::Checkpoint & ckpt);

}  // namespace hetpred::model

#endif  // HETPRED_MODEL_FACTORY_HPP_
