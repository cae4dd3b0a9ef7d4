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

#include "hetpred/graph4d.hpp"

#include "hetpred/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace hetpred::graph
{

Category category_from_int(int value)
{
  if (value < 1 || value > 3) {
    throw ValidationError("invalid category " + std::to_string(value) + " (expected 1, 2 or 3)");
  }
  return static_cast<Category>(value);
}

std::string_view category_name(Category c)
{
  switch (c) {
    case Category::pedestrian:
      return "pedestrian";
    case Category::bicycle:
      return "bicycle";
    case Category::vehicle:
      return "vehicle";
  }
  return "unknown";
}

const AgentObservation * FrameObservation::find(int agent_id) const
{
  for (const auto & a : agents) {
    if (a.agent_id == agent_id) {
      return &a;
    }
  }
  return nullptr;
}

void validate_frame(const FrameObservation & frame)
{
  std::set<int> seen;
  for (const auto & a : frame.agents) {
    if (!seen.insert(a.agent_id).second) {
      throw ValidationError(
        "frame " + std::to_string(frame.frame_index) + " lists agent " +
        std::to_string(a.agent_id) + " twice");
    }
    if (!std::isfinite(a.x) || !std::isfinite(a.y)) {
      throw ValidationError(
        "agent " + std::to_string(a.agent_id) + " has non-finite coordinates in frame " +
        std::to_string(frame.frame_index));
    }
    category_from_int(static_cast<int>(a.category));
  }
}

FrameGraph build_frame_graph(
  const FrameObservation * previous, const FrameObservation & current, int frame, double radius)
{
  validate_frame(current);
  FrameGraph g;
  g.frame = frame;

  std::vector<const AgentObservation *> agents;
  agents.reserve(current.agents.size());
  for (const auto & a : current.agents) {
    agents.push_back(&a);
  }
  std::sort(agents.begin(), agents.end(), [](auto * a, auto * b) { return a->agent_id < b->agent_id; });

  for (const auto * a : agents) {
    g.nodes.push_back(a->agent_id);
    g.members[category_slot(a->category)].push_back(a->agent_id);
    if (previous && previous->find(a->agent_id)) {
      g.temporal_agents.push_back(a->agent_id);
    }
  }
  for (const auto * a : agents) {
    for (const auto * b : agents) {
      if (a == b) {
        continue;
      }
      if (std::hypot(b->x - a->x, b->y - a->y) <= radius) {
        g.spatial_edges.emplace_back(a->agent_id, b->agent_id);
      }
    }
  }
  if (previous) {
    std::array<bool, kNumCategories> before{};
    for (const auto & a : previous->agents) {
      before[category_slot(a.category)] = true;
    }
    for (std::size_t k = 0; k < kNumCategories; ++k) {
      g.super_temporal[k] = before[k] && !g.members[k].empty();
    }
  }
  return g;
}

Graph4D build_graph(std::span<const FrameObservation> frames, double radius)
{
  if (frames.empty()) {
    throw UsageError("build_graph needs at least one frame");
  }
  Graph4D graph;
  graph.frames.reserve(frames.size());
  for (std::size_t t = 0; t < frames.size(); ++t) {
    graph.frames.push_back(
      build_frame_graph(t ? &frames[t - 1] : nullptr, frames[t], static_cast<int>(t), radius));
  }
  return graph;
}

std::vector<SpatialEdge> Graph4D::spatial_edges() const
{
  std::vector<SpatialEdge> out;
  for (const auto & f : frames) {
    for (const auto & [i, j] : f.spatial_edges) {
      out.push_back({f.frame, i, j});
    }
  }
  return out;
}

std::vector<TemporalEdge> Graph4D::temporal_edges() const
{
  std::vector<TemporalEdge> out;
  for (const auto & f : frames) {
    for (int id : f.temporal_agents) {
      out.push_back({id, f.frame});
    }
  }
  return out;
}

std::vector<SuperNode> Graph4D::super_nodes() const
{
  std::vector<SuperNode> out;
  for (const auto & f : frames) {
    for (Category c : kCategories) {
      if (f.has_super_node(c)) {
        out.push_back({f.frame, c, f.members[category_slot(c)]});
      }
    }
  }
  return out;
}

std::vector<SuperTemporalLink> Graph4D::super_links() const
{
  std::vector<SuperTemporalLink> out;
  for (const auto & f : frames) {
    for (Category c : kCategories) {
      if (f.super_temporal[category_slot(c)]) {
        out.push_back({f.frame, c});
      }
    }
  }
  return out;
}

double category_pair_code(Category ci, Category cj)
{
  const int a = static_cast<int>(ci) - 1;
  const int b = static_cast<int>(cj) - 1;
  return static_cast<double>(a * 3 + b) / 8.0;
}

ad::Tensor spatial_edge_feature(const AgentObservation & i, const AgentObservation & j)
{
  return ad::Tensor::vector({j.x - i.x, j.y - i.y, category_pair_code(i.category, j.category)});
}

ad::Tensor temporal_edge_feature(const AgentObservation & before, const AgentObservation & after)
{
  if (before.agent_id != after.agent_id) {
    throw UsageError(
      "temporal edge between different agents " + std::to_string(before.agent_id) + " and " +
      std::to_string(after.agent_id));
  }
  return ad::Tensor::vector(
    {after.x - before.x, after.y - before.y, category_pair_code(after.category, after.category)});
}

ad::Tensor node_feature(const AgentObservation & a)
{
  return ad::Tensor::vector({a.x, a.y, (static_cast<double>(a.category) - 1.0) / 2.0});
}

}  // namespace hetpred::graph
