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

#ifndef HETPRED_METRICS_HPP_
#define HETPRED_METRICS_HPP_

#include <span>
#include <vector>

namespace hetpred::eval
{

struct Point
{
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point &) const = default;
};

/// Mean Euclidean distance over paired steps. UsageError on length mismatch
/// or empty input.
double ade(std::span<const Point> predicted, std::span<const Point> truth);

/// Distance at the last step.
double fde(std::span<const Point> predicted, std::span<const Point> truth);

/// Extrapolates `steps` points with the mean velocity of the last two
/// observed steps (one step when only two points exist).
std::vector<Point> constant_velocity_baseline(std::span<const Point> observed, std::size_t steps);

}  // namespace hetpred::eval

#endif  // HETPRED_METRICS_HPP_
