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

#ifndef HETPRED_SRC_ROLLOUT_SUPPORT_HPP_
#define HETPRED_SRC_ROLLOUT_SUPPORT_HPP_

#include "hetpred/errors.hpp"
#include "hetpred/model.hpp"

#include <map>
#include <random>
#include <set>
#include <span>
#include <string>

namespace hetpred::model::detail
{

/// Number of frames the rollout will run; UsageError when the window is too
/// short for the requested phase.
inline std::size_t rollout_length(
  std::span<const graph::FrameObservation> window, const RolloutOptions & opt)
{
  if (opt.obs_frames == 0) {
    throw UsageError("rollout needs at least one observed frame");
  }
  if (opt.phase == Phase::train) {
    if (window.size() < opt.obs_frames + 1) {
      throw UsageError(
        "training rollout needs " + std::to_string(opt.obs_frames + 1) + " frames, window has " +
        std::to_string(window.size()));
    }
    return window.size();
  }
  if (window.size() < opt.obs_frames) {
    throw UsageError(
      "prediction needs " + std::to_string(opt.obs_frames) + " observed frames, window has " +
      std::to_string(window.size()));
  }
  if (opt.total_frames <= opt.obs_frames) {
    throw UsageError("prediction horizon is empty");
  }
  return opt.total_frames;
}

/// Agents seen in at least `min_observed_frames` of the observed frames.
inline std::set<int> loss_eligible_agents(
  std::span<const graph::FrameObservation> window, const RolloutOptions & opt)
{
  std::map<int, std::size_t> counts;
  for (std::size_t t = 0; t < opt.obs_frames && t < window.size(); ++t) {
    for (const auto & a : window[t].agents) {
      ++counts[a.agent_id];
    }
  }
  std::set<int> out;
  for (const auto & [id, n] : counts) {
    if (n >= opt.min_observed_frames) {
      out.insert(id);
    }
  }
  return out;
}

/// Position fed back in closed loop.
inline std::pair<double, double> feedback_position(
  const GaussianParams & g, const RolloutOptions & opt, std::mt19937_64 & rng)
{
  if (opt.feedback == Feedback::sample) {
    return sample_gaussian(g, rng);
  }
  return {g.mu_x, g.mu_y};
}

inline graph::FrameObservation generated_frame(
  const graph::FrameObservation & previous, const std::map<int, GaussianParams> & predicted,
  const RolloutOptions & opt, std::mt19937_64 & rng)
{
  graph::FrameObservation out;
  out.frame_index = previous.frame_index + 1;
  for (const auto & a : previous.agents) {
    auto it = predicted.find(a.agent_id);
    if (it == predicted.end()) {
      continue;
    }
    const auto [x, y] = feedback_position(it->second, opt, rng);
    out.agents.push_back({a.agent_id, a.category, x, y});
  }
  return out;
}

}  // namespace hetpred::model::detail

#endif  // HETPRED_SRC_ROLLOUT_SUPPORT_HPP_
