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

#include "hetpred/errors.hpp"
#include "hetpred/graph4d.hpp"
#include "oracles/graph_oracle.hpp"
#include "support.hpp"

#include <doctest.h>

#include <map>

using namespace hetpred;
using namespace hetpred::graph;
using hetpred::testing::brute_force_graph;
using hetpred::testing::frame;
using hetpred::testing::graph_sets;

TEST_CASE("one agent over two frames")
{
  const std::vector<FrameObservation> frames = {
    frame(0, {{7, Category::bicycle, 0.0, 0.0}}), frame(1, {{7, Category::bicycle, 0.1, 0.0}})};
  const auto g = build_graph(frames);
  CHECK(g.spatial_edges().empty());
  CHECK(g.temporal_edges().size() == 1);
  CHECK(g.super_nodes().size() == 2);
  CHECK(g.super_links().size() == 1);
  for (const auto & f : g.frames) {
    CHECK(f.has_super_node(Category::bicycle));
    CHECK_FALSE(f.has_super_node(Category::pedestrian));
  }
}

TEST_CASE("three agents are fully connected")
{
  const std::vector<FrameObservation> frames = {frame(
    0, {{1, Category::pedestrian, 0, 0}, {2, Category::vehicle, 50, 0}, {3, Category::bicycle, 0, 9}})};
  CHECK(build_graph(frames).spatial_edges().size() == 6);
}

TEST_CASE("vehicle appearing in the last of three frames")
{
  const std::vector<FrameObservation> frames = {
    frame(0, {{1, Category::pedestrian, 0, 0}, {2, Category::pedestrian, 1, 0}}),
    frame(1, {{1, Category::pedestrian, 0, 1}, {2, Category::pedestrian, 1, 1}}),
    frame(2, {{1, Category::pedestrian, 0, 2}, {2, Category::pedestrian, 1, 2}, {3, Category::vehicle, 5, 5}}),
  };
  const auto g = build_graph(frames);
  const auto oracle = brute_force_graph(frames, kUnlimitedRadius);
  CHECK(graph_sets(g) == oracle);
  // 2 + 2 + 6 directed edges; 4 temporal edges; 4 super nodes; 2 links.
  CHECK(oracle.spatial.size() == 10);
  CHECK(oracle.temporal.size() == 4);
  CHECK(oracle.supers.size() == 4);
  CHECK(oracle.super_links.size() == 2);
  CHECK_FALSE(g.frames[2].super_temporal[category_slot(Category::vehicle)]);
}

TEST_CASE("random scenes agree with set enumeration")
{
  std::mt19937_64 rng(2024);
  for (int scene = 0; scene < 50; ++scene) {
    const auto frames = testing::random_scene(rng, 2 + uniform_index(rng, 6), 1 + uniform_index(rng, 8), 0.7);
    const double radius = scene % 3 == 0 ? 0.8 : kUnlimitedRadius;
    CHECK(graph_sets(build_graph(frames, radius)) == brute_force_graph(frames, radius));
  }
}

TEST_CASE("graph invariants on random scenes")
{
  std::mt19937_64 rng(7);
  for (int scene = 0; scene < 30; ++scene) {
    const auto frames = testing::random_scene(rng, 5, 7, 0.75);
    const auto g = build_graph(frames);
    for (std::size_t t = 0; t < frames.size(); ++t) {
      const auto & fg = g.frames[t];
      const std::size_t n = frames[t].agents.size();
      CHECK(fg.spatial_edges.size() == n * (n - 1));
      std::set<std::pair<int, int>> edges(fg.spatial_edges.begin(), fg.spatial_edges.end());
      for (const auto & [i, j] : edges) {
        CHECK(edges.count({j, i}) == 1);
        CHECK(i != j);
      }
      std::multiset<int> seen;
      for (const auto c : kCategories) {
        for (const int id : fg.members[category_slot(c)]) {
          seen.insert(id);
          CHECK(frames[t].find(id)->category == c);
        }
        const bool any = std::any_of(frames[t].agents.begin(), frames[t].agents.end(), [&](const auto & a) {
          return a.category == c;
        });
        CHECK(fg.has_super_node(c) == any);
      }
      CHECK(seen.size() == n);
      CHECK(std::set<int>(seen.begin(), seen.end()).size() == n);
    }
  }
}

TEST_CASE("structure is translation invariant")
{
  std::mt19937_64 rng(9);
  for (int scene = 0; scene < 20; ++scene) {
    auto frames = testing::random_scene(rng, 4, 6, 0.8);
    const auto before = graph_sets(build_graph(frames, 0.9));
    for (auto & f : frames) {
      for (auto & a : f.agents) {
        a.x += 123.25;
        a.y -= 77.5;
      }
    }
    CHECK(graph_sets(build_graph(frames, 0.9)) == before);
  }
}

TEST_CASE("bad input")
{
  CHECK_THROWS_AS(build_graph(std::vector<FrameObservation>{}), UsageError);
  const std::vector<FrameObservation> dup = {
    frame(0, {{1, Category::pedestrian, 0, 0}, {1, Category::vehicle, 1, 1}})};
  CHECK_THROWS_AS(build_graph(dup), ValidationError);
  CHECK_THROWS_AS(category_from_int(0), ValidationError);
  CHECK_THROWS_AS(category_from_int(4), ValidationError);
}

TEST_CASE("spatial edge feature")
{
  const AgentObservation i{1, Category::pedestrian, 1, 2};
  const AgentObservation j{2, Category::vehicle, 4, 6};
  CHECK(spatial_edge_feature(i, j) == ad::Tensor::vector({3, 4, 2.0 / 8.0}));
  const AgentObservation k{3, Category::bicycle, 1, 2};
  CHECK(spatial_edge_feature(i, k) == ad::Tensor::vector({0, 0, category_pair_code(Category::pedestrian, Category::bicycle)}));
}

TEST_CASE("pair codes are unique and bounded")
{
  std::set<double> codes;
  for (const auto a : kCategories) {
    for (const auto b : kCategories) {
      const double c = category_pair_code(a, b);
      CHECK(c >= 0.0);
      CHECK(c <= 1.0);
      codes.insert(c);
    }
  }
  CHECK(codes.size() == 9);
}

TEST_CASE("spatial features are antisymmetric")
{
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    const AgentObservation a{1, kCategories[uniform_index(rng, 3)], uniform(rng, -50, 50), uniform(rng, -50, 50)};
    const AgentObservation b{2, kCategories[uniform_index(rng, 3)], uniform(rng, -50, 50), uniform(rng, -50, 50)};
    const auto ab = spatial_edge_feature(a, b);
    const auto ba = spatial_edge_feature(b, a);
    CHECK(ab[0] == -ba[0]);
    CHECK(ab[1] == -ba[1]);
  }
}

TEST_CASE("temporal edge feature")
{
  const AgentObservation still{4, Category::bicycle, 2, 3};
  CHECK(temporal_edge_feature(still, still) == ad::Tensor::vector({0, 0, category_pair_code(Category::bicycle, Category::bicycle)}));
  const AgentObservation a{4, Category::pedestrian, 2, 3};
  const AgentObservation b{4, Category::pedestrian, 3, 1};
  CHECK(temporal_edge_feature(a, b) == ad::Tensor::vector({1, -2, 0.0}));
  const AgentObservation v0{5, Category::vehicle, 0, 0};
  const AgentObservation v1{5, Category::vehicle, 1, 0};
  CHECK(temporal_edge_feature(v0, v1)[2] == 1.0);
  CHECK_THROWS_AS(temporal_edge_feature(a, v1), UsageError);
}

TEST_CASE("node feature carries the category")
{
  CHECK(node_feature({1, Category::pedestrian, 0.5, -0.5}) == ad::Tensor::vector({0.5, -0.5, 0.0}));
  CHECK(node_feature({1, Category::vehicle, 0.5, -0.5})[2] == 1.0);
}
