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

#ifndef HETPRED_OPTIMIZER_HPP_
#define HETPRED_OPTIMIZER_HPP_

#include "hetpred/checkpoint.hpp"
#include "hetpred/params.hpp"

#include <cstdint>
#include <vector>

namespace hetpred::train
{

struct AdamConfig
{
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // Staircase schedule: rate = learning_rate * decay^floor(step / decay_interval).
  double decay = 0.95;
  std::uint64_t decay_interval = 0;  // in optimizer steps; 0 disables decay
};

/// Learning rate after `step` completed optimizer steps.
double staircase_rate(const AdamConfig & config, std::uint64_t step);

/// Adam with bias correction. Moments are aligned with a ParameterStore.
class Adam
{
public:
  Adam(const nn::ParameterStore & store, AdamConfig config);

  /// Throws DimensionError when `grads` does not match the store layout.
  void step(nn::ParameterStore & store, const std::vector<ad::Tensor> & grads);

  const AdamConfig & config() const { return config_; }
  void set_decay_interval(std::uint64_t steps) { config_.decay_interval = steps; }
  std::uint64_t step_count() const { return step_; }
  /// Rate the next step() will use.
  double current_rate() const { return staircase_rate(config_, step_); }
  const std::vector<ad::Tensor> & first_moment() const { return m_; }
  const std::vector<ad::Tensor> & second_moment() const { return v_; }

  void save(nn::Checkpoint & ckpt, const nn::ParameterStore & store) const;
  void restore(const nn::Checkpoint & ckpt, const nn::ParameterStore & store);

private:
  AdamConfig config_;
  std::uint64_t step_ = 0;
  std::vector<ad::Tensor> m_;
  std::vector<ad::Tensor> v_;
};

/// Elementwise clamp of every gradient value into [lo, hi].
void clip_gradients(std::vector<ad::Tensor> & grads, double lo, double hi);

}  // namespace hetpred::train

#endif  // HETPRED_OPTIMIZER_HPP_
