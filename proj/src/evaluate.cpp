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

#include "hetpred/evaluate.hpp"

#include "hetpred/errors.hpp"
#include "hetpred/tape.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

namespace hetpred::eval
{
namespace
{

struct AgentError
{
  graph::Category category;
  double ade_n;
  double fde_n;
  double ade_m;
  double fde_m;
};

struct WindowOutcome
{
  std::vector<std::vector<AgentError>> per_method;
  std::optional<std::string> failure;
};

std::vector<Point> to_world(const data::SceneWindow & w, const std::vector<Point> & pts)
{
  std::vector<Point> out;
  out.reserve(pts.size());
  for (const auto & p : pts) {
    const auto [x, y] = w.transform.to_world(p.x, p.y);
    out.push_back({x, y});
  }
  return out;
}

WindowOutcome score_window(
  const data::SceneWindow & w, const std::vector<Method> & methods, std::size_t obs_frames)
{
  WindowOutcome outcome;
  const auto agents = evaluation_agents(w, obs_frames);
  for (const auto & method : methods) {
    std::vector<AgentError> errors;
    try {
      const Predictions pred = method.predict(w);
      for (const auto & a : agents) {
        const auto it = pred.find(a.agent_id);
        if (it == pred.end()) {
          throw Error("no prediction for agent " + std::to_string(a.agent_id));
        }
        const auto truth_m = to_world(w, a.truth);
        const auto pred_m = to_world(w, it->second);
        errors.push_back(
          {a.category, ade(it->second, a.truth), fde(it->second, a.truth), ade(pred_m, truth_m),
           fde(pred_m, truth_m)});
      }
    } catch (const Error & e) {
      outcome.failure = method.name + ": " + e.what();
      return outcome;
    }
    outcome.per_method.push_back(std::move(errors));
  }
  return outcome;
}

void add(std::array<CategoryMetrics, 4> & rows, std::size_t slot, double a, double f)
{
  for (const std::size_t r : {slot, kTotalRow}) {
    rows[r].ade += a;
    rows[r].fde += f;
    ++rows[r].agents;
  }
}

void finish(std::array<CategoryMetrics, 4> & rows)
{
  for (auto & r : rows) {
    if (r.agents > 0) {
      r.ade /= static_cast<double>(r.agents);
      r.fde /= static_cast<double>(r.agents);
    }
  }
}

std::string fixed(double v, int digits)
{
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

}  // namespace

std::vector<EvalAgent> evaluation_agents(const data::SceneWindow & w, std::size_t obs_frames)
{
  if (obs_frames < 2 || obs_frames >= w.frames.size()) {
    throw UsageError("need 2 <= T_obs < window length");
  }
  std::vector<EvalAgent> out;
  for (const auto & a : w.frames[obs_frames - 1].agents) {
    if (!w.frames[obs_frames - 2].find(a.agent_id)) {
      continue;
    }
    EvalAgent e;
    e.agent_id = a.agent_id;
    e.category = a.category;
    bool complete = true;
    for (std::size_t t = obs_frames; t < w.frames.size(); ++t) {
      const auto * p = w.frames[t].find(a.agent_id);
      if (!p) {
        complete = false;
        break;
      }
      e.truth.push_back({p->x, p->y});
    }
    if (!complete) {
      continue;
    }
    std::size_t first = obs_frames - 1;
    while (first > 0 && w.frames[first - 1].find(a.agent_id)) {
      --first;
    }
    for (std::size_t t = first; t < obs_frames; ++t) {
      const auto * p = w.frames[t].find(a.agent_id);
      e.observed.push_back({p->x, p->y});
    }
    out.push_back(std::move(e));
  }
  return out;
}

Method constant_velocity_method(std::size_t obs_frames)
{
  return {"constant_velocity", [obs_frames](const data::SceneWindow & w) {
            Predictions out;
            const std::size_t steps = w.frames.size() - obs_frames;
            for (const auto & a : evaluation_agents(w, obs_frames)) {
              out[a.agent_id] = constant_velocity_baseline(a.observed, steps);
            }
            return out;
          }};
}

Method oracle_method(std::size_t obs_frames)
{
  return {"oracle", [obs_frames](const data::SceneWindow & w) {
            Predictions out;
            for (const auto & a : evaluation_agents(w, obs_frames)) {
              out[a.agent_id] = a.truth;
            }
            return out;
          }};
}

Method model_method(
  std::string name, const model::SequenceModel & model, model::Mode mode, std::size_t obs_frames)
{
  return {std::move(name), [&model, mode, obs_frames](const data::SceneWindow & w) {
            ad::Tape tape;
            nn::ParamBinding binding(tape, model.params());
            model::RolloutOptions opt;
            opt.mode = mode;
            opt.phase = model::Phase::predict;
            opt.obs_frames = obs_frames;
            opt.total_frames = w.frames.size();
            const auto result = model.rollout(binding, std::span(w.frames).first(obs_frames), opt);
            Predictions out;
            for (const auto & agent : result.agents) {
              std::vector<Point> pts;
              for (std::size_t t = obs_frames; t < w.frames.size(); ++t) {
                const auto * step = agent.at_frame(static_cast<int>(t));
                if (!step) {
                  break;
                }
                pts.push_back({step->gaussian.mu_x, step->gaussian.mu_y});
              }
              if (pts.size() == w.frames.size() - obs_frames) {
                out[agent.agent_id] = std::move(pts);
              }
            }
            return out;
          }};
}

std::pair<double, double> window_ade_fde(
  const model::SequenceModel & model, model::Mode mode, const data::SceneWindow & w,
  std::size_t obs_frames)
{
  const auto agents = evaluation_agents(w, obs_frames);
  if (agents.empty()) {
    return {0.0, 0.0};
  }
  const auto pred = model_method("probe", model, mode, obs_frames).predict(w);
  double a = 0.0;
  double f = 0.0;
  for (const auto & agent : agents) {
    const auto it = pred.find(agent.agent_id);
    if (it == pred.end()) {
      throw Error("no prediction for agent " + std::to_string(agent.agent_id));
    }
    a += ade(it->second, agent.truth);
    f += fde(it->second, agent.truth);
  }
  const double n = static_cast<double>(agents.size());
  return {a / n, f / n};
}

std::string to_string(Scale s)
{
  return s == Scale::normalized ? "normalized" : "meters";
}

const MethodReport * MetricsReport::find(const std::string & method) const
{
  for (const auto & m : methods) {
    if (m.name == method) {
      return &m;
    }
  }
  return nullptr;
}

MetricsReport evaluate(
  std::span<const data::SceneWindow> windows, const std::vector<Method> & methods, const EvalConfig & config)
{
  std::vector<WindowOutcome> outcomes(windows.size());
  const std::size_t workers = std::max<std::size_t>(1, std::min(config.workers, windows.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < windows.size(); ++i) {
      outcomes[i] = score_window(windows[i], methods, config.obs_frames);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < workers; ++k) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < windows.size(); i = next++) {
          outcomes[i] = score_window(windows[i], methods, config.obs_frames);
        }
      });
    }
    for (auto & t : pool) {
      t.join();
    }
  }

  MetricsReport report;
  for (const auto & m : methods) {
    report.methods.push_back({m.name, {}, {}});
  }
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto & o = outcomes[i];
    if (o.failure) {
      ++report.excluded_windows;
      report.exclusions.push_back("window " + std::to_string(i) + ": " + *o.failure);
      continue;
    }
    ++report.windows;
    for (std::size_t m = 0; m < methods.size(); ++m) {
      for (const auto & e : o.per_method[m]) {
        const auto slot = graph::category_slot(e.category);
        add(report.methods[m].normalized, slot, e.ade_n, e.fde_n);
        add(report.methods[m].meters, slot, e.ade_m, e.fde_m);
      }
    }
  }
  for (auto & m : report.methods) {
    finish(m.normalized);
    finish(m.meters);
  }
  return report;
}

void write_report_csv(std::ostream & out, const MetricsReport & report)
{
  out << "method,category,ade,fde,n_windows,coordinate_scale\n";
  for (const Scale scale : {Scale::normalized, Scale::meters}) {
    for (const auto & m : report.methods) {
      const auto & rows = m.rows(scale);
      for (std::size_t r = 0; r < rows.size(); ++r) {
        out << m.name << ',' << kRowNames[r] << ',' << data::format_double(rows[r].ade) << ','
            << data::format_double(rows[r].fde) << ',' << rows[r].agents << ',' << to_string(scale)
            << '\n';
      }
    }
  }
}

void write_report_table(std::ostream & out, const MetricsReport & report, Scale scale)
{
  constexpr int kLabel = 18;
  constexpr int kRow = 12;
  std::size_t width = 10;
  for (const auto & m : report.methods) {
    width = std::max(width, m.name.size() + 2);
  }
  const int w = static_cast<int>(width);
  out << "Displacement errors (" << to_string(scale) << ")\n";
  out << std::left << std::setw(kLabel) << "Metric" << std::setw(kRow) << "Category";
  for (const auto & m : report.methods) {
    out << std::right << std::setw(w) << m.name;
  }
  out << '\n';
  const std::array<const char *, 2> labels = {"Avg. disp. error", "Final disp. error"};
  for (std::size_t kind = 0; kind < 2; ++kind) {
    for (std::size_t r = 0; r < kRowNames.size(); ++r) {
      out << std::left << std::setw(kLabel) << (r == 0 ? labels[kind] : "") << std::setw(kRow)
          << kRowNames[r];
      for (const auto & m : report.methods) {
        const auto & c = m.rows(scale)[r];
        out << std::right << std::setw(w) << fixed(kind == 0 ? c.ade : c.fde, 4);
      }
      out << '\n';
    }
  }
  out << "windows: " << report.windows << ", excluded: " << report.excluded_windows << '\n';
}

}  // namespace hetpred::eval
