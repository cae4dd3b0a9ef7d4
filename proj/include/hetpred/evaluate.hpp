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

#ifndef HETPRED_EVALUATE_HPP_
#define HETPRED_EVALUATE_HPP_

#include "hetpred/metrics.hpp"
#include "hetpred/model.hpp"
#include "hetpred/window.hpp"

#include <array>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace hetpred::eval
{

/// An agent scored in a window: present in the last two observed frames and
/// in every predicted frame. Points are normalized.
struct EvalAgent
{
  int agent_id = 0;
  graph::Category category = graph::Category::pedestrian;
  std::vector<Point> observed;  // trailing run of consecutive observed frames
  std::vector<Point> truth;     // frames [obs_frames, window length)
};

std::vector<EvalAgent> evaluation_agents(const data::SceneWindow & w, std::size_t obs_frames);

/// Normalized predictions for frames [obs_frames, window length), by agent id.
using Predictions = std::map<int, std::vector<Point>>;

struct Method
{
  std::string name;
  std::function<Predictions(const data::SceneWindow &)> predict;
};

Method constant_velocity_method(std::size_t obs_frames);
/// Returns the ground truth; every error is zero.
Method oracle_method(std::size_t obs_frames);
/// Closed-loop mean rollout. The model must outlive the method.
Method model_method(
  std::string name, const model::SequenceModel & model, model::Mode mode, std::size_t obs_frames);

/// Closed-loop ADE/FDE of one model on one window, normalized units,
/// averaged over scored agents. Returns {0, 0} when nobody is scored.
std::pair<double, double> window_ade_fde(
  const model::SequenceModel & model, model::Mode mode, const data::SceneWindow & w,
  std::size_t obs_frames);

enum class Scale { normalized, meters };
std::string to_string(Scale s);

struct CategoryMetrics
{
  double ade = 0.0;
  double fde = 0.0;
  std::size_t agents = 0;  // agent-window pairs
};

inline constexpr std::size_t kTotalRow = 3;
inline constexpr std::array<const char *, 4> kRowNames = {"pedestrian", "bicycle", "vehicle", "total"};

struct MethodReport
{
  std::string name;
  std::array<CategoryMetrics, 4> normalized;
  std::array<CategoryMetrics, 4> meters;

  const std::array<CategoryMetrics, 4> & rows(Scale s) const
  {
    return s == Scale::normalized ? normalized : meters;
  }
};

struct MetricsReport
{
  std::vector<MethodReport> methods;
  std::size_t windows = 0;           // windows every method completed
  std::size_t excluded_windows = 0;  // a method failed; dropped for all
  std::vector<std::string> exclusions;

  const MethodReport * find(const std::string & method) const;
};

struct EvalConfig
{
  std::size_t obs_frames = 5;
  std::size_t workers = 1;
};

MetricsReport evaluate(
  std::span<const data::SceneWindow> windows, const std::vector<Method> & methods, const EvalConfig & config);

/// Columns: method,category,ade,fde,n_windows,coordinate_scale. n_windows
/// counts agent-window pairs.
void write_report_csv(std::ostream & out, const MetricsReport & report);
/// Rows: the two error kinds times four categories; one column per method.
void write_report_table(std::ostream & out, const MetricsReport & report, Scale scale);

}  // namespace hetpred::eval

#endif  // HETPRED_EVALUATE_HPP_
