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

#include "hetpred/params.hpp"

#include "hetpred/errors.hpp"

#include <cmath>
#include <random>

namespace hetpred::nn
{

ParamId ParameterStore::add(std::string name, ad::Shape shape, std::size_t fan_in, ParamInit init)
{
  if (index_.count(name)) {
    throw ConfigError("duplicate parameter name '" + name + "'");
  }
  if (fan_in == 0) {
    throw ConfigError("parameter '" + name + "' has zero fan-in");
  }
  const std::size_t idx = values_.size();
  index_.emplace(name, idx);
  values_.emplace_back(std::move(shape));
  meta_.push_back(Meta{std::move(name), fan_in, init});
  return ParamId{idx};
}

std::size_t ParameterStore::scalar_count() const
{
  std::size_t n = 0;
  for (const auto & v : values_) {
    n += v.size();
  }
  return n;
}

std::optional<ParamId> ParameterStore::find(const std::string & name) const
{
  auto it = index_.find(name);
  if (it == index_.end()) {
    return std::nullopt;
  }
  return ParamId{it->second};
}

void ParameterStore::init(std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  // 53 random bits -> [0, 1); avoids implementation-defined distributions.
  auto unit = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(meta_[i].fan_in));
    for (double & v : values_[i].values()) {
      v = (2.0 * unit() - 1.0) * bound;
    }
    if (meta_[i].init == ParamInit::lstm_bias) {
      // Gate blocks are [input, forget, candidate, output].
      const std::size_t hidden = values_[i].size() / 4;
      for (std::size_t k = hidden; k < 2 * hidden; ++k) {
        values_[i][k] = 1.0;
      }
    }
  }
}

bool ParameterStore::same_layout(const ParameterStore & other) const
{
  if (other.size() != size()) {
    return false;
  }
  for (std::size_t i = 0; i < size(); ++i) {
    if (other.name(i) != name(i) || other.value(i).shape() != value(i).shape()) {
      return false;
    }
  }
  return true;
}

void ParameterStore::copy_values_from(const ParameterStore & other)
{
  if (!same_layout(other)) {
    throw ConfigError("parameter layouts differ");
  }
  for (std::size_t i = 0; i < size(); ++i) {
    values_[i] = other.value(i);
  }
}

ParamBinding::ParamBinding(ad::Tape & tape, const ParameterStore & store)
: tape_(tape), store_(store), bound_(store.size())
{
}

ad::Var ParamBinding::operator()(ParamId id)
{
  auto & slot = bound_.at(id.index);
  if (!slot) {
    slot = tape_.leaf(store_.value(id));
  }
  return *slot;
}

std::vector<ad::Tensor> ParamBinding::gradients() const
{
  std::vector<ad::Tensor> out = zero_gradients(store_);
  accumulate_gradients(out);
  return out;
}

void ParamBinding::accumulate_gradients(std::vector<ad::Tensor> & sums) const
{
  if (sums.size() != bound_.size()) {
    throw DimensionError("gradient buffer count does not match parameter count");
  }
  for (std::size_t i = 0; i < bound_.size(); ++i) {
    if (bound_[i] && tape_.has_grad(*bound_[i])) {
      sums[i].add_in_place(tape_.grad(*bound_[i]));
    }
  }
}

std::vector<ad::Tensor> zero_gradients(const ParameterStore & store)
{
  std::vector<ad::Tensor> out;
  out.reserve(store.size());
  for (std::size_t i = 0; i < store.size(); ++i) {
    out.push_back(ad::Tensor::zeros_like(store.value(i)));
  }
  return out;
}

}  // namespace hetpred::nn
