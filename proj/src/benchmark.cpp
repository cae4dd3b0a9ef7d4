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

#include "hetpred/benchmark.hpp"

#include "hetpred/errors.hpp"
#include "hetpred/random.hpp"

#include <map>
#include <string>

namespace hetpred::data
{
namespace
{

constexpr std::size_t kMaxScenes = 10000;

void fill_split(
  const BenchmarkConfig & config, bool test_split, std::size_t wanted,
  std::vector<SceneWindow> & out, Benchmark & bench)
{
  for (std::size_t i = 0; out.size() < wanted; ++i) {
    if (i == kMaxScenes) {
      throw ConfigError("benchmark scenes yield too few windows");
    }
    const ScenarioSpec spec = benchmark_scene(config, test_split, i);
    ++bench.scenes;
    auto sliced = slice_windows(generate_scenario(spec), config.obs_frames, config.pred_frames, config.stride);
    bench.skipped += sliced.skipped;
    for (auto & w : sliced.windows) {
      if (out.size() == wanted) {
        break;
      }
      if (!window_has_target(w, config.obs_frames)) {
        ++bench.skipped;
        continue;
      }
      w.scene = to_string(spec.kind);
      out.push_back(std::move(w));
    }
  }
}

}  // namespace

BenchmarkConfig BenchmarkConfig::from_key_values(const KeyValues & kv)
{
  BenchmarkConfig c;
  c.train_windows = kv.get_uint("benchmark.train_windows", c.train_windows);
  c.test_windows = kv.get_uint("benchmark.test_windows", c.test_windows);
  c.seed = kv.get_uint("benchmark.seed", c.seed);
  c.obs_frames = kv.get_uint("obs_frames", c.obs_frames);
  c.pred_frames = kv.get_uint("pred_frames", c.pred_frames);
  c.stride = kv.get_uint("benchmark.stride", c.stride);
  c.scene = ScenarioSpec::from_key_values(kv, "benchmark.scene.");
  c.scene.min_frames = static_cast<int>(c.pred_frames);
  c.scene.validate();
  return c;
}

bool window_has_target(const SceneWindow & w, std::size_t obs_frames, std::size_t min_observed)
{
  std::map<int, std::size_t> observed;
  for (std::size_t t = 0; t < obs_frames && t < w.frames.size(); ++t) {
    for (const auto & a : w.frames[t].agents) {
      ++observed[a.agent_id];
    }
  }
  for (std::size_t t = obs_frames; t < w.frames.size(); ++t) {
    for (const auto & a : w.frames[t].agents) {
      const auto it = observed.find(a.agent_id);
      if (it != observed.end() && it->second >= min_observed) {
        return true;
      }
    }
  }
  return false;
}

ScenarioSpec benchmark_scene(const BenchmarkConfig & config, bool test_split, std::size_t index)
{
  ScenarioSpec spec = config.scene;
  spec.kind = index % 2 == 0 ? ScenarioKind::straight_lanes : ScenarioKind::crossroad;
  spec.seed = derive_seed(config.seed, (test_split ? "test-scene-" : "train-scene-") + std::to_string(index));
  spec.min_frames = static_cast<int>(config.pred_frames);
  return spec;
}

Benchmark make_benchmark(const BenchmarkConfig & config)
{
  Benchmark bench;
  fill_split(config, false, config.train_windows, bench.train, bench);
  fill_split(config, true, config.test_windows, bench.test, bench);
  return bench;
}

}  // namespace hetpred::data
