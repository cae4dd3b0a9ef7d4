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

#include "hetpred/optimizer.hpp"

#include "hetpred/errors.hpp"

#include <algorithm>
#include <cmath>

namespace hetpred::train
{

double staircase_rate(const AdamConfig & config, std::uint64_t step)
{
  if (config.decay_interval == 0) {
    return config.learning_rate;
  }
  const auto stairs = static_cast<double>(step / config.decay_interval);
  return config.learning_rate * std::pow(config.decay, stairs);
}

Adam::Adam(const nn::ParameterStore & store, AdamConfig config)
: config_(config), m_(nn::zero_gradients(store)), v_(nn::zero_gradients(store))
{
}

void Adam::step(nn::ParameterStore & store, const std::vector<ad::Tensor> & grads)
{
  if (grads.size() != store.size() || m_.size() != store.size()) {
    throw DimensionError("Adam::step: gradient count does not match parameter count");
  }
  for (std::size_t p = 0; p < store.size(); ++p) {
    if (grads[p].shape() != store.value(p).shape()) {
      throw DimensionError("Adam::step: gradient shape mismatch for " + store.name(p));
    }
  }
  const double lr = current_rate();
  ++step_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  for (std::size_t p = 0; p < store.size(); ++p) {
    ad::Tensor & theta = store.value(p);
    const ad::Tensor & g = grads[p];
    double * m = m_[p].data();
    double * v = v_[p].data();
    double * w = theta.data();
    for (std::size_t i = 0; i < theta.size(); ++i) {
      m[i] = b1 * m[i] + (1.0 - b1) * g[i];
      v[i] = b2 * v[i] + (1.0 - b2) * g[i] * g[i];
      const double m_hat = m[i] / c1;
      const double v_hat = v[i] / c2;
      w[i] -= lr * m_hat / (std::sqrt(v_hat) + config_.epsilon);
    }
  }
}

void Adam::save(nn::Checkpoint & ckpt, const nn::ParameterStore & store) const
{
  ckpt.metadata["adam.step"] = std::to_string(step_);
  for (std::size_t p = 0; p < store.size(); ++p) {
    ckpt.tensors.emplace_back("adam.m/" + store.name(p), m_[p]);
    ckpt.tensors.emplace_back("adam.v/" + store.name(p), v_[p]);
  }
}

void Adam::restore(const nn::Checkpoint & ckpt, const nn::ParameterStore & store)
{
  auto it = ckpt.metadata.find("adam.step");
  if (it == ckpt.metadata.end()) {
    throw ConfigError("checkpoint carries no optimizer state");
  }
  step_ = std::stoull(it->second);
  for (std::size_t p = 0; p < store.size(); ++p) {
    const ad::Tensor * m = ckpt.find("adam.m/" + store.name(p));
    const ad::Tensor * v = ckpt.find("adam.v/" + store.name(p));
    if (!m || !v || m->shape() != store.value(p).shape() || v->shape() != store.value(p).shape()) {
      throw ConfigError("checkpoint optimizer state does not match parameter " + store.name(p));
    }
    m_[p] = *m;
    v_[p] = *v;
  }
}

void clip_gradients(std::vector<ad::Tensor> & grads, double lo, double hi)
{
  for (auto & g : grads) {
    for (double & x : g.values()) {
      x = std::clamp(x, lo, hi);
    }
  }
}

}  // namespace hetpred::train
