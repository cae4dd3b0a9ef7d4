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

#include "hetpred/ed_baseline.hpp"

#include "rollout_support.hpp"

namespace hetpred::model
{

std::map<std::string, std::string> EdConfig::to_metadata() const
{
  return {
    {"ed.hidden", std::to_string(hidden)},
    {"ed.embed_dim", std::to_string(embed_dim)},
    {"model.anchor", to_string(anchor)},
  };
}

EdConfig EdConfig::from_metadata(const std::map<std::string, std::string> & meta)
{
  EdConfig c;
  if (auto it = meta.find("ed.hidden"); it != meta.end()) {
    c.hidden = std::stoul(it->second);
  }
  if (auto it = meta.find("ed.embed_dim"); it != meta.end()) {
    c.embed_dim = std::stoul(it->second);
  }
  if (auto it = meta.find("model.anchor"); it != meta.end()) {
    c.anchor = anchor_from_string(it->second);
  }
  return c;
}

EdBaseline::EdBaseline(EdConfig config) : config_(config)
{
  encoder_embed_ = nn::add_linear(store_, "ed.encoder.embed", 3, config_.embed_dim);
  encoder_ = nn::add_lstm(store_, "ed.encoder.cell", config_.embed_dim, config_.hidden);
  decoder_embed_ = nn::add_linear(store_, "ed.decoder.embed", 3, config_.embed_dim);
  decoder_ = nn::add_lstm(store_, "ed.decoder.cell", config_.embed_dim, config_.hidden);
  head_ = nn::add_linear(store_, "ed.head", config_.hidden, 5);
}

std::map<std::string, std::string> EdBaseline::metadata() const
{
  auto meta = config_.to_metadata();
  meta["model.kind"] = kind();
  return meta;
}

RolloutResult EdBaseline::rollout(
  nn::ParamBinding & params, std::span<const graph::FrameObservation> window,
  const RolloutOptions & opt) const
{
  ad::Tape & tape = params.tape();
  const std::size_t total = detail::rollout_length(window, opt);
  const std::set<int> eligible = detail::loss_eligible_agents(window, opt);
  std::mt19937_64 rng(opt.sample_seed);
  const std::size_t last_obs = opt.obs_frames - 1;

  auto anchor_at = [&](double x, double y) -> std::optional<std::pair<double, double>> {
    if (config_.anchor == MeanAnchor::last_position) {
      return std::make_pair(x, y);
    }
    return std::nullopt;
  };

  RolloutResult result;
  std::map<int, graph::AgentObservation> identity;
  for (std::size_t t = 0; t < opt.obs_frames; ++t) {
    for (const auto & a : window[t].agents) {
      identity.emplace(a.agent_id, a);
    }
  }

  // Predicted positions per generated frame, for closed-loop output frames.
  std::vector<std::map<int, std::pair<double, double>>> generated(total);
  std::vector<ad::Var> per_agent;

  for (const auto & [id, who] : identity) {
    AgentRollout rec;
    rec.agent_id = id;
    rec.category = who.category;

    nn::LstmState state = nn::zero_state(tape, config_.hidden);
    for (std::size_t t = 0; t < opt.obs_frames; ++t) {
      const graph::AgentObservation * a = window[t].find(id);
      if (!a) {
        continue;
      }
      state = nn::lstm_step(
        params, encoder_, state, nn::embed(params, encoder_embed_, tape.constant(graph::node_feature(*a))));
      if (t + 1 < opt.obs_frames) {
        const GaussianVars g = gaussian_head(params, head_, state.h, anchor_at(a->x, a->y));
        rec.steps.push_back({static_cast<int>(t + 1), g.value()});
      }
    }

    std::vector<ad::Var> terms;
    const graph::AgentObservation * last = window[last_obs].find(id);
    if (last) {
      graph::AgentObservation position = *last;
      for (std::size_t t = opt.obs_frames; t < total; ++t) {
        state = nn::lstm_step(
          params, decoder_, state,
          nn::embed(params, decoder_embed_, tape.constant(graph::node_feature(position))));
        const GaussianVars g = gaussian_head(params, head_, state.h, anchor_at(position.x, position.y));
        const GaussianParams gp = g.value();
        rec.steps.push_back({static_cast<int>(t), gp});
        if (opt.phase == Phase::train) {
          const graph::AgentObservation * target = window[t].find(id);
          if (!target) {
            break;
          }
          if (eligible.count(id)) {
            terms.push_back(nll_loss(g, target->x, target->y));
          }
          position = *target;
        } else {
          const auto [x, y] = detail::feedback_position(gp, opt, rng);
          position.x = x;
          position.y = y;
          generated[t].emplace(id, std::make_pair(x, y));
        }
      }
    }
    if (!terms.empty()) {
      const ad::Var agent_loss = ad::add_n(terms);
      rec.in_loss = true;
      rec.loss = agent_loss.value().item();
      per_agent.push_back(agent_loss);
    }
    result.agents.push_back(std::move(rec));
  }

  if (!per_agent.empty()) {
    result.loss = ad::mean_n(per_agent);
  }
  result.loss_agents = per_agent.size();

  result.frames.assign(window.begin(), window.begin() + static_cast<std::ptrdiff_t>(
    opt.phase == Phase::train ? total : opt.obs_frames));
  if (opt.phase == Phase::predict) {
    for (std::size_t t = opt.obs_frames; t < total; ++t) {
      graph::FrameObservation f;
      f.frame_index = result.frames.back().frame_index + 1;
      for (const auto & [id, xy] : generated[t]) {
        f.agents.push_back({id, identity.at(id).category, xy.first, xy.second});
      }
      result.frames.push_back(std::move(f));
    }
  }
  return result;
}

}  // namespace hetpred::model
