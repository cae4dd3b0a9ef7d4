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

#include "hetpred/model_factory.hpp"

#include "hetpred/ed_baseline.hpp"
#include "hetpred/errors.hpp"

namespace hetpred::model
{

std::unique_ptr<SequenceModel> make_model(const std::map<std::string, std::string> & metadata)
{
  const auto it = metadata.find("model.kind");
  if (it == metadata.end()) {
    throw ConfigError("checkpoint has no model.kind");
  }
  if (it->second == "traffic") {
    return std::make_unique<TrafficModel>(ModelConfig::from_metadata(metadata));
  }
  if (it->second == "ed") {
    return std::make_unique<EdBaseline>(EdConfig::from_metadata(metadata));
  }
  throw ConfigError("unknown model kind '" + it->second + "'");
}

std::unique_ptr<SequenceModel> load_model(const nn::Checkpoint & ckpt)
{
  auto m = make_model(ckpt.metadata);
  nn::restore_parameters(ckpt, m->params());
  return m;
}

}  // namespace hetpred::model
