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

#ifndef HETPRED_BENCHMARK_HPP_
#define HETPRED_BENCHMARK_HPP_

#include "hetpred/keyvalue.hpp"
#include "hetpred/scenario.hpp"
#include "hetpred/window.hpp"

#include <cstdint>
#include <vector>

namespace hetpred::data
{

/// Mixed straight-lane and crossroad scenes sliced into windows.
struct BenchmarkConfig
{
  std::size_t train_windows = 200;
  std::size_t test_windows = 50;
  std::uint64_t seed = 1;
  std::size_t obs_frames = 5;
  std::size_t pred_frames = 13;
  std::size_t stride = 4;
  ScenarioSpec scene;  // kind and seed are set per scene

  static BenchmarkConfig from_key_values(const KeyValues & kv);
};

struct Benchmark
{
  std::vector<SceneWindow> train;
  std::vector<SceneWindow> test;
  std::size_t skipped = 0;  // windows with a frame gap or nobody to score
  std::size_t scenes = 0;
};

/// True when some agent has at least `min_observed` observed frames and
/// appears again after the observed part.
bool window_has_target(const SceneWindow & w, std::size_t obs_frames, std::size_t min_observed = 2);

/// Scene i of a split alternates straight_lanes (even) and crossroad (odd).
ScenarioSpec benchmark_scene(const BenchmarkConfig & config, bool test_split, std::size_t index);

Benchmark make_benchmark(const BenchmarkConfig & config);

}  // namespace hetpred::data

#endif  // HETPRED_BENCHMARK_HPP_
