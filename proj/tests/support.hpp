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

#ifndef HETPRED_TESTS_SUPPORT_HPP_
#define HETPRED_TESTS_SUPPORT_HPP_

#include "hetpred/graph4d.hpp"
#include "hetpred/params.hpp"
#include "hetpred/random.hpp"
#include "hetpred/tape.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace hetpred::testing
{

inline ad::Tensor random_tensor(ad::Shape shape, std::mt19937_64 & rng, double lo = -1.0, double hi = 1.0)
{
  ad::Tensor t(std::move(shape));
  for (auto & v : t.values()) {
    v = uniform(rng, lo, hi);
  }
  return t;
}

struct GradCheck
{
  std::size_t checked = 0;
  std::size_t failed = 0;
  double worst = 0.0;  // largest |analytic - numeric| / max(1, |numeric|)
};

/// Central differences over every scalar of every parameter in `store`.
/// `loss` builds a scalar on a fresh tape bound to the store.
inline GradCheck check_store_gradients(
  nn::ParameterStore & store, const std::function<ad::Var(nn::ParamBinding &)> & loss, double h = 1e-5,
  double tol = 1e-4)
{
  std::vector<ad::Tensor> analytic;
  {
    ad::Tape tape;
    nn::ParamBinding binding(tape, store);
    const ad::Var l = loss(binding);
    tape.backward(l);
    analytic = binding.gradients();
  }
  auto evaluate = [&] {
    ad::Tape tape;
    nn::ParamBinding binding(tape, store);
    return loss(binding).value().item();
  };
  GradCheck r;
  for (std::size_t p = 0; p < store.size(); ++p) {
    auto values = store.value(p).values();
    for (std::size_t k = 0; k < values.size(); ++k) {
      const double saved = values[k];
      values[k] = saved + h;
      const double up = evaluate();
      values[k] = saved - h;
      const double down = evaluate();
      values[k] = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double err = std::abs(analytic[p].values()[k] - numeric) / std::max(1.0, std::abs(numeric));
      r.worst = std::max(r.worst, err);
      ++r.checked;
      if (!(err <= tol)) {
        ++r.failed;
      }
    }
  }
  return r;
}

/// d loss / d x for a leaf tensor, by central differences.
inline ad::Tensor numeric_gradient(
  const ad::Tensor & x, const std::function<double(const ad::Tensor &)> & f, double h = 1e-5)
{
  ad::Tensor g = ad::Tensor::zeros_like(x);
  ad::Tensor probe = x;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double saved = probe.values()[k];
    probe.values()[k] = saved + h;
    const double up = f(probe);
    probe.values()[k] = saved - h;
    const double down = f(probe);
    probe.values()[k] = saved;
    g.values()[k] = (up - down) / (2.0 * h);
  }
  return g;
}

inline graph::FrameObservation frame(int index, std::vector<graph::AgentObservation> agents)
{
  return {index, std::move(agents)};
}

/// Frames with agents of mixed categories; agents appear and vanish at random.
inline std::vector<graph::FrameObservation> random_scene(
  std::mt19937_64 & rng, std::size_t frames, std::size_t agents, double presence = 0.8)
{
  std::vector<graph::FrameObservation> out;
  std::vector<double> x(agents);
  std::vector<double> y(agents);
  std::vector<double> vx(agents);
  std::vector<double> vy(agents);
  std::vector<graph::Category> cat(agents);
  for (std::size_t a = 0; a < agents; ++a) {
    x[a] = uniform(rng, -1.0, 1.0);
    y[a] = uniform(rng, -1.0, 1.0);
    vx[a] = uniform(rng, -0.2, 0.2);
    vy[a] = uniform(rng, -0.2, 0.2);
    cat[a] = graph::kCategories[uniform_index(rng, 3)];
  }
  for (std::size_t t = 0; t < frames; ++t) {
    graph::FrameObservation f;
    f.frame_index = static_cast<int>(t);
    for (std::size_t a = 0; a < agents; ++a) {
      if (uniform01(rng) < presence) {
        f.agents.push_back({static_cast<int>(a) + 1, cat[a], x[a] + vx[a] * t, y[a] + vy[a] * t});
      }
    }
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace hetpred::testing

#endif  // HETPRED_TESTS_SUPPORT_HPP_
