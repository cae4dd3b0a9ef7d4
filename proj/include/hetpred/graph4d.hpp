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

#ifndef HETPRED_GRAPH4D_HPP_
#define HETPRED_GRAPH4D_HPP_

#include "hetpred/tensor.hpp"

#include <array>
#include <compare>
#include <limits>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace hetpred::graph
{

enum class Category : int { pedestrian = 1, bicycle = 2, vehicle = 3 };

inline constexpr std::size_t kNumCategories = 3;
inline constexpr std::array<Category, kNumCategories> kCategories = {
  Category::pedestrian, Category::bicycle, Category::vehicle};

/// 0-based slot for per-category parameter groups and tables.
constexpr std::size_t category_slot(Category c) { return static_cast<std::size_t>(c) - 1; }
/// Throws ValidationError outside {1, 2, 3}.
Category category_from_int(int value);
std::string_view category_name(Category c);

struct AgentObservation
{
  int agent_id = 0;
  Category category = Category::pedestrian;
  double x = 0.0;
  double y = 0.0;
};

struct FrameObservation
{
  int frame_index = 0;
  std::vector<AgentObservation> agents;

  const AgentObservation * find(int agent_id) const;
};

/// Throws ValidationError on duplicate agent ids or non-finite coordinates.
void validate_frame(const FrameObservation & frame);

/// Structure of one time slice: instance nodes, directed spatial edges,
/// incoming temporal edges and category membership. All id lists are sorted.
struct FrameGraph
{
  int frame = 0;
  std::vector<int> nodes;
  /// (i, j): the edge agent i uses to look at agent j.
  std::vector<std::pair<int, int>> spatial_edges;
  /// Agents also present in the previous frame (temporal edge t-1 -> t).
  std::vector<int> temporal_agents;
  /// Members per category slot; a super node exists iff the list is non-empty.
  std::array<std::vector<int>, kNumCategories> members;
  /// Super node of the category exists both here and in the previous frame.
  std::array<bool, kNumCategories> super_temporal{};

  bool has_super_node(Category c) const { return !members[category_slot(c)].empty(); }
};

struct SpatialEdge
{
  int frame;
  int from;
  int to;
  auto operator<=>(const SpatialEdge &) const = default;
};

struct TemporalEdge
{
  int agent_id;
  int frame;  // links frame - 1 -> frame
  auto operator<=>(const TemporalEdge &) const = default;
};

struct SuperNode
{
  int frame;
  Category category;
  std::vector<int> members;
  auto operator<=>(const SuperNode &) const = default;
};

struct SuperTemporalLink
{
  int frame;  // links frame - 1 -> frame
  Category category;
  auto operator<=>(const SuperTemporalLink &) const = default;
};

/// Instance nodes, spatial and temporal edges, and per-category super nodes
/// of a window of frames.
struct Graph4D
{
  std::vector<FrameGraph> frames;

  std::vector<SpatialEdge> spatial_edges() const;
  std::vector<TemporalEdge> temporal_edges() const;
  std::vector<SuperNode> super_nodes() const;
  std::vector<SuperTemporalLink> super_links() const;
};

inline constexpr double kUnlimitedRadius = std::numeric_limits<double>::infinity();

/// Graph slice for `current`, given the preceding frame (nullptr at the start).
FrameGraph build_frame_graph(
  const FrameObservation * previous, const FrameObservation & current, int frame,
  double radius = kUnlimitedRadius);

/// Throws UsageError on an empty frame list.
Graph4D build_graph(std::span<const FrameObservation> frames, double radius = kUnlimitedRadius);

/// Ordered-pair category code ((ci - 1) * 3 + (cj - 1)) / 8, in [0, 1].
double category_pair_code(Category ci, Category cj);

/// (xj - xi, yj - yi, code(ci, cj))
ad::Tensor spatial_edge_feature(const AgentObservation & i, const AgentObservation & j);
/// (dx, dy, code(c, c)); UsageError if the agent ids differ.
ad::Tensor temporal_edge_feature(const AgentObservation & before, const AgentObservation & after);
/// (x, y, (c - 1) / 2)
ad::Tensor node_feature(const AgentObservation & a);

}  // namespace hetpred::graph

#endif  // HETPRED_GRAPH4D_HPP_
