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

#ifndef HETPRED_ED_BASELINE_HPP_
#define HETPRED_ED_BASELINE_HPP_

#include "hetpred/model.hpp"

namespace hetpred::model
{

struct EdConfig
{
  std::size_t hidden = 64;
  std::size_t embed_dim = 64;
  MeanAnchor anchor = MeanAnchor::absolute;

  std::map<std::string, std::string> to_metadata() const;
  static EdConfig from_metadata(const std::map<std::string, std::string> & meta);
};

/// Per-agent LSTM encoder-decoder with the same Gaussian head and loss as
/// the graph model but no interaction terms. The encoder reads the observed
/// node features; its final state seeds a decoder that consumes the previous
/// position at every predicted step.
class EdBaseline : public SequenceModel
{
public:
  explicit EdBaseline(EdConfig config = {});

  const EdConfig & config() const { return config_; }
  nn::ParameterStore & params() override { return store_; }
  const nn::ParameterStore & params() const override { return store_; }
  std::string kind() const override { return "ed"; }
  std::map<std::string, std::string> metadata() const override;
  void init(std::uint64_t seed) { store_.init(seed); }

  RolloutResult rollout(
    nn::ParamBinding & params, std::span<const graph::FrameObservation> window,
    const RolloutOptions & options) const override;

private:
  EdConfig config_;
  nn::ParameterStore store_;
  nn::EmbeddingParams encoder_embed_;
  nn::LstmCellParams encoder_;
  nn::EmbeddingParams decoder_embed_;
  nn::LstmCellParams decoder_;
  nn::LinearParams head_;
};

}  // namespace hetpred::model

#endif  // HETPRED_ED_BASELINE_HPP_
