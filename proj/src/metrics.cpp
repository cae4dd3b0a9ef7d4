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

#include "hetpred/metrics.hpp"

#include "hetpred/errors.hpp"

#include <cmath>
#include <string>

namespace hetpred::eval
{
namespace
{

void check_pair(std::span<const Point> predicted, std::span<const Point> truth)
{
  if (predicted.empty() || truth.empty()) {
    throw UsageError("empty prediction");
  }
  if (predicted.size() != truth.size()) {
    throw UsageError(
      "prediction has " + std::to_string(predicted.size()) + " steps, truth has " +
      std::to_string(truth.size()));
  }
}

}  // namespace

double ade(std::span<const Point> predicted, std::span<const Point> truth)
{
  check_pair(predicted, truth);
  double sum = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    sum += std::hypot(predicted[i].x - truth[i].x, predicted[i].y - truth[i].y);
  }
  return sum / static_cast<double>(predicted.size());
}

double fde(std::span<const Point> predicted, std::span<const Point> truth)
{
  check_pair(predicted, truth);
  return std::hypot(predicted.back().x - truth.back().x, predicted.back().y - truth.back().y);
}

std::vector<Point> constant_velocity_baseline(std::span<const Point> observed, std::size_t steps)
{
  const std::size_t n = observed.size();
  if (n < 2) {
    throw UsageError("constant velocity needs at least two observed points");
  }
  const std::size_t back = n >= 3 ? 2 : 1;
  const Point & last = observed[n - 1];
  const Point & ref = observed[n - 1 - back];
  const double vx = (last.x - ref.x) / static_cast<double>(back);
  const double vy = (last.y - ref.y) / static_cast<double>(back);
  std::vector<Point> out;
  out.reserve(steps);
  for (std::size_t k = 1; k <= steps; ++k) {
    out.push_back({last.x + vx * static_cast<double>(k), last.y + vy * static_cast<double>(k)});
  }
  return out;
}

}  // namespace hetpred::eval
