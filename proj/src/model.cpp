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

#include "hetpred/model.hpp"

#include "hetpred/errors.hpp"
#include "rollout_support.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hetpred::model
{
namespace
{

std::string slot_name(std::size_t slot)
{
  return std::string(graph::category_name(graph::kCategories[slot]));
}

std::string format_double(double v)
{
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::size_t parse_size(const std::map<std::string, std::string> & meta, const std::string & key, std::size_t fallback)
{
  auto it = meta.find(key);
  if (it == meta.end()) {
    return fallback;
  }
  try {
    return static_cast<std::size_t>(std::stoull(it->second));
  } catch (const std::exception &) {
    throw ConfigError("bad value for " + key + ": '" + it->second + "'");
  }
}

double parse_double(const std::map<std::string, std::string> & meta, const std::string & key, double fallback)
{
  auto it = meta.find(key);
  if (it == meta.end()) {
    return fallback;
  }
  try {
    return std::stod(it->second);
  } catch (const std::exception &) {
    throw ConfigError("bad value for " + key + ": '" + it->second + "'");
  }
}

}  // namespace

std::string to_string(Mode m)
{
  switch (m) {
    case Mode::full:
      return "full";
    case Mode::no_category_layer:
      return "no_category_layer";
    case Mode::no_self_attention:
      return "no_self_attention";
  }
  return "unknown";
}

Mode mode_from_string(const std::string & name)
{
  if (name == "full") {
    return Mode::full;
  }
  if (name == "no_category_layer") {
    return Mode::no_category_layer;
  }
  if (name == "no_self_attention") {
    return Mode::no_self_attention;
  }
  throw ConfigError("unknown model mode '" + name + "'");
}

std::string to_string(MeanAnchor a)
{
  return a == MeanAnchor::absolute ? "absolute" : "last_position";
}

MeanAnchor anchor_from_string(const std::string & name)
{
  if (name == "absolute") {
    return MeanAnchor::absolute;
  }
  if (name == "last_position") {
    return MeanAnchor::last_position;
  }
  throw ConfigError("unknown mean anchor '" + name + "'");
}

std::map<std::string, std::string> ModelConfig::to_metadata() const
{
  return {
    {"model.edge_hidden", std::to_string(edge_hidden)},
    {"model.node_hidden", std::to_string(node_hidden)},
    {"model.embed_dim", std::to_string(embed_dim)},
    {"model.attention_dim", std::to_string(attention_dim)},
    {"model.attention_m", format_double(attention_m)},
    {"model.radius", format_double(radius)},
    {"model.shared_super_params", shared_super_params ? "1" : "0"},
    {"model.anchor", to_string(anchor)},
  };
}

ModelConfig ModelConfig::from_metadata(const std::map<std::string, std::string> & meta)
{
  ModelConfig c;
  c.edge_hidden = parse_size(meta, "model.edge_hidden", c.edge_hidden);
  c.node_hidden = parse_size(meta, "model.node_hidden", c.node_hidden);
  c.embed_dim = parse_size(meta, "model.embed_dim", c.embed_dim);
  c.attention_dim = parse_size(meta, "model.attention_dim", c.attention_dim);
  c.attention_m = parse_double(meta, "model.attention_m", c.attention_m);
  c.radius = parse_double(meta, "model.radius", c.radius);
  if (auto it = meta.find("model.shared_super_params"); it != meta.end()) {
    c.shared_super_params = it->second == "1" || it->second == "true";
  }
  if (auto it = meta.find("model.anchor"); it != meta.end()) {
    c.anchor = anchor_from_string(it->second);
  }
  return c;
}

const StepPrediction * AgentRollout::at_frame(int frame) const
{
  for (const auto & s : steps) {
    if (s.frame == frame) {
      return &s;
    }
  }
  return nullptr;
}

const AgentRollout * RolloutResult::find(int agent_id) const
{
  auto it = std::lower_bound(
    agents.begin(), agents.end(), agent_id, [](const AgentRollout & a, int id) { return a.agent_id < id; });
  return (it != agents.end() && it->agent_id == agent_id) ? &*it : nullptr;
}

AttentionResult attention_aggregate(
  nn::ParamBinding & params, const nn::LinearParams & query, const nn::LinearParams & key,
  ad::Var h_self, std::span<const ad::Var> neighbors, double scale)
{
  ad::Tape & tape = params.tape();
  if (neighbors.empty()) {
    return {tape.constant(ad::Tensor::zeros(h_self.shape())), std::nullopt};
  }
  const ad::Var q = nn::linear(params, query, h_self);
  std::vector<ad::Var> scores;
  scores.reserve(neighbors.size());
  for (const ad::Var & h : neighbors) {
    if (h.shape() != h_self.shape()) {
      throw DimensionError("attention: neighbour state shape differs from own state");
    }
    scores.push_back(ad::dot(q, nn::linear(params, key, h)));
  }
  const ad::Var weights = ad::softmax(ad::scale(ad::stack(scores), scale));
  const ad::Var output = ad::vecmat(weights, ad::stack(neighbors));
  return {output, weights};
}

TrafficModel::TrafficModel(ModelConfig config) : config_(config)
{
  const std::size_t E = config_.embed_dim;
  const std::size_t EH = config_.edge_hidden;
  const std::size_t NH = config_.node_hidden;
  auto & L = layout_;
  auto & S = store_;

  L.spatial_embed = nn::add_linear(S, "spatial.embed", 3, E);
  L.spatial_cell = nn::add_lstm(S, "spatial.cell", E, EH);
  for (std::size_t k = 0; k < graph::kNumCategories; ++k) {
    L.temporal_embed[k] = nn::add_linear(S, "temporal." + slot_name(k) + ".embed", 3, E);
    L.temporal_cell[k] = nn::add_lstm(S, "temporal." + slot_name(k) + ".cell", E, EH);
  }
  for (std::size_t k = 0; k < graph::kNumCategories; ++k) {
    const std::string p = "instance." + slot_name(k);
    L.instance_embed[k] = nn::add_linear(S, p + ".embed", 3, E);
    L.instance_context_embed[k] = nn::add_linear(S, p + ".context", 2 * EH, E);
    L.instance_cell[k] = nn::add_lstm(S, p + ".cell", 2 * E, NH);
  }
  L.attention_query = nn::add_linear(S, "attention.query", EH, config_.attention_dim);
  L.attention_key = nn::add_linear(S, "attention.key", EH, config_.attention_dim);
  for (std::size_t k = 0; k < graph::kNumCategories; ++k) {
    if (config_.shared_super_params && k > 0) {
      L.super_temporal_embed[k] = L.super_temporal_embed[0];
      L.super_temporal_cell[k] = L.super_temporal_cell[0];
      L.super_embed[k] = L.super_embed[0];
      L.super_cell[k] = L.super_cell[0];
      continue;
    }
    const std::string name = config_.shared_super_params ? "shared" : slot_name(k);
    L.super_temporal_embed[k] = nn::add_linear(S, "super_temporal." + name + ".embed", NH, E);
    L.super_temporal_cell[k] = nn::add_lstm(S, "super_temporal." + name + ".cell", E, EH);
    L.super_embed[k] = nn::add_linear(S, "super." + name + ".embed", NH, E);
    L.super_cell[k] = nn::add_lstm(S, "super." + name + ".cell", E + EH, NH);
  }
  L.merge = nn::add_linear(S, "merge", 2 * NH, NH);
  L.head = nn::add_linear(S, "head", NH, 5);
}

std::map<std::string, std::string> TrafficModel::metadata() const
{
  auto meta = config_.to_metadata();
  meta["model.kind"] = kind();
  return meta;
}

double TrafficModel::attention_scale() const
{
  return config_.attention_m / std::sqrt(static_cast<double>(config_.edge_hidden));
}

std::map<int, InstanceOutput> TrafficModel::instance_layer_step(
  nn::ParamBinding & params, const graph::FrameGraph & graph,
  const graph::FrameObservation * previous, const graph::FrameObservation & current,
  TrafficState & state) const
{
  ad::Tape & tape = params.tape();
  const auto & L = layout_;
  const nn::LstmState zero_edge = nn::zero_state(tape, config_.edge_hidden);
  const nn::LstmState zero_node = nn::zero_state(tape, config_.node_hidden);

  auto require = [&](const graph::FrameObservation * f, int id) -> const graph::AgentObservation & {
    const graph::AgentObservation * a = f ? f->find(id) : nullptr;
    if (!a) {
      throw Error("internal: graph references agent " + std::to_string(id) + " missing from its frame");
    }
    return *a;
  };

  // Spatial edges (i looks at j), one state per direction, shared weights.
  std::map<std::pair<int, int>, nn::LstmState> spatial;
  std::map<int, std::vector<ad::Var>> neighbors;
  for (const auto & edge : graph.spatial_edges) {
    const auto & ai = require(&current, edge.first);
    const auto & aj = require(&current, edge.second);
    const ad::Var e = nn::embed(params, L.spatial_embed, tape.constant(graph::spatial_edge_feature(ai, aj)));
    auto it = state.spatial.find(edge);
    const nn::LstmState next = nn::lstm_step(params, L.spatial_cell, it != state.spatial.end() ? it->second : zero_edge, e);
    spatial.emplace(edge, next);
    neighbors[edge.first].push_back(next.h);
  }

  std::map<int, nn::LstmState> temporal;
  std::map<int, InstanceOutput> out;
  for (int id : graph.nodes) {
    const auto & a = require(&current, id);
    const std::size_t slot = graph::category_slot(a.category);

    ad::Var h_temporal = zero_edge.h;
    if (std::binary_search(graph.temporal_agents.begin(), graph.temporal_agents.end(), id)) {
      const auto & before = require(previous, id);
      const ad::Var e = nn::embed(
        params, L.temporal_embed[slot], tape.constant(graph::temporal_edge_feature(before, a)));
      auto it = state.temporal.find(id);
      const nn::LstmState next =
        nn::lstm_step(params, L.temporal_cell[slot], it != state.temporal.end() ? it->second : zero_edge, e);
      temporal.emplace(id, next);
      h_temporal = next.h;
    }

    static const std::vector<ad::Var> kNone;
    auto nit = neighbors.find(id);
    const auto & nbrs = nit != neighbors.end() ? nit->second : kNone;
    const ad::Var context =
      attention_aggregate(params, L.attention_query, L.attention_key, h_temporal, nbrs, attention_scale()).output;

    const ad::Var e_node = nn::embed(params, L.instance_embed[slot], tape.constant(graph::node_feature(a)));
    const ad::Var e_ctx = nn::embed(params, L.instance_context_embed[slot], ad::concat(h_temporal, context));
    nn::LstmState prev = zero_node;
    if (auto it = state.instance.find(id); it != state.instance.end()) {
      prev = nn::LstmState{it->second.h2, it->second.cell};
    }
    const nn::LstmState next = nn::lstm_step(params, L.instance_cell[slot], prev, ad::concat(e_node, e_ctx));
    out.emplace(id, InstanceOutput{next.h, next.c, h_temporal, context});
  }

  state.spatial = std::move(spatial);
  state.temporal = std::move(temporal);
  return out;
}

CategoryOutput TrafficModel::category_layer_step(
  nn::ParamBinding & params, graph::Category category,
  const std::vector<std::pair<int, InstanceOutput>> & members,
  const std::optional<TrafficState::Super> & previous, Mode mode, TrafficState::Super & next) const
{
  if (members.empty()) {
    throw UsageError("category layer step with no members");
  }
  ad::Tape & tape = params.tape();
  const auto & L = layout_;
  const std::size_t slot = graph::category_slot(category);

  std::vector<ad::Var> movement;
  movement.reserve(members.size());
  for (const auto & [id, m] : members) {
    movement.push_back(mode == Mode::no_self_attention ? m.h1 : ad::mul(m.h1, ad::softmax(m.cell)));
  }
  const ad::Var feature = ad::mean_n(movement);
  const ad::Var feature_delta =
    previous ? ad::sub(feature, previous->feature) : tape.constant(ad::Tensor::zeros({config_.node_hidden}));

  const nn::LstmState temporal = nn::lstm_step(
    params, L.super_temporal_cell[slot],
    previous ? previous->temporal : nn::zero_state(tape, config_.edge_hidden),
    nn::embed(params, L.super_temporal_embed[slot], feature_delta));
  const nn::LstmState node = nn::lstm_step(
    params, L.super_cell[slot], previous ? previous->node : nn::zero_state(tape, config_.node_hidden),
    ad::concat(nn::embed(params, L.super_embed[slot], feature), temporal.h));

  CategoryOutput out{feature, node.h, {}};
  for (const auto & [id, m] : members) {
    out.h2.emplace(id, nn::linear(params, L.merge, ad::concat(m.h1, node.h)));
  }
  next = TrafficState::Super{temporal, node, feature};
  return out;
}

RolloutResult TrafficModel::rollout(
  nn::ParamBinding & params, std::span<const graph::FrameObservation> window,
  const RolloutOptions & opt) const
{
  const std::size_t total = detail::rollout_length(window, opt);
  const std::set<int> eligible = detail::loss_eligible_agents(window, opt);
  std::mt19937_64 rng(opt.sample_seed);

  RolloutResult result;
  result.frames.reserve(total);
  result.trace.resize(total);
  std::map<int, AgentRollout> agents;
  std::map<int, std::vector<ad::Var>> losses;
  std::map<int, GaussianVars> pending;

  TrafficState state;
  for (std::size_t t = 0; t < total; ++t) {
    if (opt.phase == Phase::train || t < opt.obs_frames) {
      result.frames.push_back(window[t]);
    } else {
      std::map<int, GaussianParams> predicted;
      for (const auto & [id, g] : pending) {
        predicted.emplace(id, g.value());
      }
      result.frames.push_back(detail::generated_frame(result.frames.back(), predicted, opt, rng));
    }
    const graph::FrameObservation & current = result.frames.back();
    const graph::FrameObservation * previous = t ? &result.frames[t - 1] : nullptr;
    const graph::FrameGraph graph = graph::build_frame_graph(previous, current, static_cast<int>(t), config_.radius);

    if (opt.phase == Phase::train && t >= opt.obs_frames) {
      for (const auto & [id, g] : pending) {
        const graph::AgentObservation * target = current.find(id);
        if (target && eligible.count(id)) {
          losses[id].push_back(nll_loss(g, target->x, target->y));
        }
      }
    }

    const std::map<int, InstanceOutput> inst = instance_layer_step(params, graph, previous, current, state);

    std::map<int, ad::Var> h2;
    std::array<std::optional<TrafficState::Super>, 3> supers;
    if (opt.mode == Mode::no_category_layer) {
      for (const auto & [id, o] : inst) {
        h2.emplace(id, o.h1);
      }
    } else {
      for (graph::Category c : graph::kCategories) {
        const std::size_t slot = graph::category_slot(c);
        if (graph.members[slot].empty()) {
          continue;
        }
        std::vector<std::pair<int, InstanceOutput>> members;
        for (int id : graph.members[slot]) {
          members.emplace_back(id, inst.at(id));
        }
        const std::optional<TrafficState::Super> prev_super =
          graph.super_temporal[slot] ? state.super[slot] : std::nullopt;
        TrafficState::Super next;
        CategoryOutput co = category_layer_step(params, c, members, prev_super, opt.mode, next);
        supers[slot] = next;
        h2.merge(co.h2);
      }
    }
    state.super = supers;

    state.instance.clear();
    for (const auto & [id, o] : inst) {
      state.instance.emplace(id, TrafficState::Instance{h2.at(id), o.cell});
      result.trace[t].emplace(id, HiddenTrace{o.h1, h2.at(id), o.cell});
    }

    pending.clear();
    if (t + 1 < total) {
      for (const auto & a : current.agents) {
        std::optional<std::pair<double, double>> anchor;
        if (config_.anchor == MeanAnchor::last_position) {
          anchor = std::make_pair(a.x, a.y);
        }
        GaussianVars g = gaussian_head(params, layout_.head, h2.at(a.agent_id), anchor);
        auto & rec = agents[a.agent_id];
        rec.agent_id = a.agent_id;
        rec.category = a.category;
        rec.steps.push_back({static_cast<int>(t + 1), g.value()});
        pending.emplace(a.agent_id, g);
      }
    }
  }

  std::vector<ad::Var> per_agent;
  for (auto & [id, terms] : losses) {
    const ad::Var agent_loss = ad::add_n(terms);
    auto & rec = agents[id];
    rec.in_loss = true;
    rec.loss = agent_loss.value().item();
    per_agent.push_back(agent_loss);
  }
  if (!per_agent.empty()) {
    result.loss = ad::mean_n(per_agent);
  }
  result.loss_agents = per_agent.size();
  for (auto & [id, rec] : agents) {
    result.agents.push_back(std::move(rec));
  }
  return result;
}

}  // namespace hetpred::model
