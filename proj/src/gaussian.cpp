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

#include "hetpred/gaussian.hpp"

#include "hetpred/errors.hpp"
#include "hetpred/random.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace hetpred::model
{
namespace
{
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
}  // namespace

GaussianParams GaussianVars::value() const
{
  return GaussianParams{
    mu_x.value().item(), mu_y.value().item(), sigma_x.value().item(), sigma_y.value().item(),
    rho.value().item()};
}

GaussianVars squash_gaussian(ad::Var raw, std::optional<std::pair<double, double>> anchor)
{
  if (raw.shape() != ad::Shape{5}) {
    throw DimensionError("gaussian head expects 5 raw values, got " + ad::shape_string(raw.shape()));
  }
  GaussianVars g;
  g.mu_x = ad::pick(raw, 0);
  g.mu_y = ad::pick(raw, 1);
  if (anchor) {
    g.mu_x = ad::add_scalar(g.mu_x, anchor->first);
    g.mu_y = ad::add_scalar(g.mu_y, anchor->second);
  }
  g.log_sigma_x = ad::clamp(ad::pick(raw, 2), kLogSigmaMin, kLogSigmaMax);
  g.log_sigma_y = ad::clamp(ad::pick(raw, 3), kLogSigmaMin, kLogSigmaMax);
  g.sigma_x = ad::exp(g.log_sigma_x);
  g.sigma_y = ad::exp(g.log_sigma_y);
  g.rho = ad::scale(ad::tanh(ad::pick(raw, 4)), kRhoBound);
  return g;
}

GaussianVars gaussian_head(
  nn::ParamBinding & params, const nn::LinearParams & head, ad::Var hidden,
  std::optional<std::pair<double, double>> anchor)
{
  return squash_gaussian(nn::linear(params, head, hidden), anchor);
}

ad::Var nll_loss(const GaussianVars & g, double x, double y)
{
  const ad::Var zx = ad::div(ad::neg(ad::add_scalar(g.mu_x, -x)), g.sigma_x);
  const ad::Var zy = ad::div(ad::neg(ad::add_scalar(g.mu_y, -y)), g.sigma_y);
  const ad::Var one_minus_rho2 = ad::add_scalar(ad::neg(ad::square(g.rho)), 1.0);
  // z = zx^2 + zy^2 - 2 rho zx zy
  const ad::Var z = ad::sub(
    ad::add(ad::square(zx), ad::square(zy)), ad::scale(ad::mul(g.rho, ad::mul(zx, zy)), 2.0));
  const ad::Var quad = ad::div(z, ad::scale(one_minus_rho2, 2.0));
  const ad::Var log_norm = ad::add_scalar(
    ad::add(ad::add(g.log_sigma_x, g.log_sigma_y), ad::scale(ad::log(one_minus_rho2), 0.5)),
    kLog2Pi);
  const ad::Var out = ad::add(quad, log_norm);
  return out;
}

double nll_value(const GaussianParams & g, double x, double y)
{
  const double zx = (x - g.mu_x) / g.sigma_x;
  const double zy = (y - g.mu_y) / g.sigma_y;
  const double omr = 1.0 - g.rho * g.rho;
  const double z = zx * zx + zy * zy - 2.0 * g.rho * zx * zy;
  const double v = z / (2.0 * omr) + std::log(g.sigma_x) + std::log(g.sigma_y) + 0.5 * std::log(omr) + kLog2Pi;
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << "non-finite NLL for mu=(" << g.mu_x << ", " << g.mu_y << ") sigma=(" << g.sigma_x << ", "
       << g.sigma_y << ") rho=" << g.rho << " at (" << x << ", " << y << ")";
    throw NumericDomainError(os.str());
  }
  return v;
}

std::pair<double, double> sample_gaussian(const GaussianParams & g, std::mt19937_64 & rng)
{
  const double z1 = standard_normal(rng);
  const double z2 = standard_normal(rng);
  return {
    g.mu_x + g.sigma_x * z1,
    g.mu_y + g.sigma_y * (g.rho * z1 + std::sqrt(1.0 - g.rho * g.rho) * z2)};
}

}  // namespace hetpred::model
