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

#ifndef HETPRED_GAUSSIAN_HPP_
#define HETPRED_GAUSSIAN_HPP_

#include "hetpred/nn.hpp"

#include <optional>
#include <random>
#include <utility>

namespace hetpred::model
{

/// Bivariate normal over the next position. sigma > 0 and |rho| < 1 always.
struct GaussianParams
{
  double mu_x = 0.0;
  double mu_y = 0.0;
  double sigma_x = 1.0;
  double sigma_y = 1.0;
  double rho = 0.0;
};

/// Differentiable view of a head output.
struct GaussianVars
{
  ad::Var mu_x;
  ad::Var mu_y;
  ad::Var log_sigma_x;
  ad::Var log_sigma_y;
  ad::Var sigma_x;
  ad::Var sigma_y;
  ad::Var rho;

  GaussianParams value() const;
};

// log-sigma is clamped to this range so sigma never under- or overflows.
inline constexpr double kLogSigmaMin = -20.0;
inline constexpr double kLogSigmaMax = 20.0;
// rho = kRhoBound * tanh(raw); keeps 1 - rho^2 bounded away from zero.
inline constexpr double kRhoBound = 1.0 - 1e-9;

/// Squash a raw 5-vector (mu_x, mu_y, s_x, s_y, r) into valid parameters:
/// sigma = exp(s), rho = kRhoBound * tanh(r). `anchor`, when given, is added
/// to the mean.
GaussianVars squash_gaussian(ad::Var raw, std::optional<std::pair<double, double>> anchor = std::nullopt);

/// Affine projection of a hidden state followed by squash_gaussian.
GaussianVars gaussian_head(
  nn::ParamBinding & params, const nn::LinearParams & head, ad::Var hidden,
  std::optional<std::pair<double, double>> anchor = std::nullopt);

/// -log N((x, y) | mu, sigma, rho), recorded on the tape.
ad::Var nll_loss(const GaussianVars & g, double x, double y);
/// Same density evaluated in plain doubles.
double nll_value(const GaussianParams & g, double x, double y);

std::pair<double, double> sample_gaussian(const GaussianParams & g, std::mt19937_64 & rng);

}  // namespace hetpred::model

#endif  // HETPRED_GAUSSIAN_HPP_
