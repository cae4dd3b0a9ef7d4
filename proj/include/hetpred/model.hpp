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

#ifndef HETPRED_MODEL_HPP_
#define HETPRED_MODEL_HPP_

#include "hetpred/gaussian.hpp"
#include "hetpred/graph4d.hpp"
#include "hetpred/nn.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hetpred::model
{

enum class Mode {
  full,
  no_category_layer,  // h2 = h1
  no_self_attention,  // d = h1 instead of h1 * softmax(c)
};

enum class Phase {
  train,    // ground truth feeds every frame; loss on the prediction window
  predict,  // closed loop beyond the observed frames
};

enum class Feedback { mean, sample };

/// Where the predicted mean is measured from.
enum class MeanAnchor {
  absolute,       // mu is the raw head output
  last_position,  // mu is the agent's current position plus the raw output
};

std::string to_string(Mode m);
/// Throws ConfigError on an unknown name.
Mode mode_from_string(const std::string & name);
std::string to_string(MeanAnchor a);
MeanAnchor anchor_from_string(const std::string & name);

struct ModelConfig
{
  std::size_t edge_hidden = 128;   // spatial/temporal edge cells, super-node temporal edges
  std::size_t node_hidden = 64;    // instance cells, super-node cells
  std::size_t embed_dim = 64;      // every embedding output
  std::size_t attention_dim = 64;  // query/key projection width
  double attention_m = 1.0;        // score scale is attention_m / sqrt(edge_hidden)
  double radius = graph::kUnlimitedRadius;
  bool shared_super_params = false;
  MeanAnchor anchor = MeanAnchor::absolute;

  std::map<std::string, std::string> to_metadata() const;
  static ModelConfig from_metadata(const std::map<std::string, std::string> & meta);
  bool operator==(const ModelConfig &) const = default;
};

struct RolloutOptions
{
  Mode mode = Mode::full;
  Phase phase = Phase::train;
  std::size_t obs_frames = 5;     // frames [0, obs_frames) are observed
  std::size_t total_frames = 13;  // window length; predictions cover [obs_frames, total_frames)
  std::size_t min_observed_frames = 2;
  Feedback feedback = Feedback::mean;
  std::uint64_t sample_seed = 0;
};

struct StepPrediction
{
  int frame = 0;  // frame the distribution is over
  GaussianParams gaussian;
};

struct AgentRollout
{
  int agent_id = 0;
  graph::Category category = graph::Category::pedestrian;
  /// Observed-window steps (frame < obs_frames) followed by prediction steps.
  std::vector<StepPrediction> steps;
  bool in_loss = false;
  double loss = 0.0;  // summed NLL over the prediction window

  const StepPrediction * at_frame(int frame) const;
};

/// Per-frame hidden states kept for inspection by tests.
struct HiddenTrace
{
  ad::Var h1;
  ad::Var h2;
  ad::Var cell;
};

struct RolloutResult
{
  std::vector<AgentRollout> agents;  // sorted by agent id
  /// Mean over loss-eligible agents of their summed NLL. Empty when no agent
  /// has a target inside the prediction window.
  std::optional<ad::Var> loss;
  std::size_t loss_agents = 0;
  /// Frames the model consumed: ground truth, or observed + generated.
  std::vector<graph::FrameObservation> frames;
  std::vector<std::map<int, HiddenTrace>> trace;

  const AgentRollout * find(int agent_id) const;
};

/// Behaviour shared by the graph model and the encoder-decoder baseline.
class SequenceModel
{
public:
  virtual ~SequenceModel() = default;

  virtual nn::ParameterStore & params() = 0;
  virtual const nn::ParameterStore & params() const = 0;
  /// Stored in checkpoints; used to reject mismatched loads.
  virtual std::string kind() const = 0;
  virtual std::map<std::string, std::string> metadata() const = 0;

  virtual RolloutResult rollout(
    nn::ParamBinding & params, std::span<const graph::FrameObservation> window,
    const RolloutOptions & options) const = 0;
};

/// Parameter groups of the graph model. Per-category groups are indexed by
/// graph::category_slot.
struct TrafficParams
{
  nn::EmbeddingParams spatial_embed;
  nn::LstmCellParams spatial_cell;
  std::array<nn::EmbeddingParams, 3> temporal_embed;
  std::array<nn::LstmCellParams, 3> temporal_cell;
  std::array<nn::EmbeddingParams, 3> instance_embed;
  std::array<nn::EmbeddingParams, 3> instance_context_embed;
  std::array<nn::LstmCellParams, 3> instance_cell;
  nn::LinearParams attention_query;
  nn::LinearParams attention_key;
  std::array<nn::EmbeddingParams, 3> super_temporal_embed;
  std::array<nn::LstmCellParams, 3> super_temporal_cell;
  std::array<nn::EmbeddingParams, 3> super_embed;
  std::array<nn::LstmCellParams, 3> super_cell;
  nn::LinearParams merge;  // concat(h1, h_u) -> node_hidden, no activation
  nn::LinearParams head;   // node_hidden -> 5
};

struct AttentionResult
{
  ad::Var output;
  std::optional<ad::Var> weights;  // absent when there are no neighbours
};

/// Scaled dot-product attention over neighbour edge states:
/// s_j = scale * <Wq h_self, Wk h_j>, w = softmax(s), output = sum_j w_j h_j.
/// With no neighbours the output is a zero vector of h_self's length.
AttentionResult attention_aggregate(
  nn::ParamBinding & params, const nn::LinearParams & query, const nn::LinearParams & key,
  ad::Var h_self, std::span<const ad::Var> neighbors, double scale);

/// Recurrent state carried between frames of one rollout.
struct TrafficState
{
  struct Instance
  {
    ad::Var h2;
    ad::Var cell;
  };
  struct Super
  {
    nn::LstmState temporal;
    nn::LstmState node;
    ad::Var feature;  // F_u of the frame the state belongs to
  };
  std::map<std::pair<int, int>, nn::LstmState> spatial;
  std::map<int, nn::LstmState> temporal;
  std::map<int, Instance> instance;
  std::array<std::optional<Super>, 3> super;
};

struct InstanceOutput
{
  ad::Var h1;
  ad::Var cell;
  ad::Var h_temporal;  // h_ii (zeros at an agent's first frame)
  ad::Var context;     // attention output H_i
};

struct CategoryOutput
{
  ad::Var feature;       // F_u
  ad::Var super_hidden;  // h_u
  std::map<int, ad::Var> h2;
};

class TrafficModel : public SequenceModel
{
public:
  explicit TrafficModel(ModelConfig config = {});

  const ModelConfig & config() const { return config_; }
  const TrafficParams & layout() const { return layout_; }
  nn::ParameterStore & params() override { return store_; }
  const nn::ParameterStore & params() const override { return store_; }
  std::string kind() const override { return "traffic"; }
  std::map<std::string, std::string> metadata() const override;

  void init(std::uint64_t seed) { store_.init(seed); }

  double attention_scale() const;

  /// Edge LSTMs, attention and instance LSTMs for one frame. Advances the
  /// spatial and temporal entries of `state`; instance entries are read
  /// (previous h2, cell) but not written.
  std::map<int, InstanceOutput> instance_layer_step(
    nn::ParamBinding & params, const graph::FrameGraph & graph,
    const graph::FrameObservation * previous, const graph::FrameObservation & current,
    TrafficState & state) const;

  /// Super node of one category from its members' (h1, cell). `previous` is
  /// the category's super state from the previous frame, if it existed then.
  CategoryOutput category_layer_step(
    nn::ParamBinding & params, graph::Category category,
    const std::vector<std::pair<int, InstanceOutput>> & members,
    const std::optional<TrafficState::Super> & previous, Mode mode,
    TrafficState::Super & next) const;

  RolloutResult rollout(
    nn::ParamBinding & params, std::span<const graph::FrameObservation> window,
    const RolloutOptions & options) const override;

private:
  ModelConfig config_;
  nn::ParameterStore store_;
  TrafficParams layout_;
};

}  // namespace hetpred::model

#endif  // HETPRED_MODEL_HPP_
