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

#include "hetpred/benchmark.hpp"
#include "hetpred/errors.hpp"
#include "hetpred/evaluate.hpp"
#include "hetpred/metrics.hpp"
#include "hetpred/scenario.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace hetpred;
using namespace hetpred::eval;
using graph::Category;

namespace
{

std::vector<Point> random_track(std::mt19937_64 & rng, std::size_t n)
{
  std::vector<Point> out;
  for (std::size_t k = 0; k < n; ++k) {
    out.push_back({uniform(rng, -20, 20), uniform(rng, -20, 20)});
  }
  return out;
}

double brute_ade(const std::vector<Point> & a, const std::vector<Point> & b)
{
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    s += std::sqrt((a[k].x - b[k].x) * (a[k].x - b[k].x) + (a[k].y - b[k].y) * (a[k].y - b[k].y));
  }
  return s / static_cast<double>(a.size());
}

std::vector<Point> rigid(const std::vector<Point> & p, double angle, double tx, double ty)
{
  std::vector<Point> out;
  for (const auto & q : p) {
    out.push_back({std::cos(angle) * q.x - std::sin(angle) * q.y + tx, std::sin(angle) * q.x + std::cos(angle) * q.y + ty});
  }
  return out;
}

// Three agents over 4 frames, 2 observed; scale 0.5 so meters are twice the
// normalized values.
data::SceneWindow crafted_window()
{
  std::vector<graph::FrameObservation> raw;
  for (int t = 0; t < 4; ++t) {
    raw.push_back({t, {
                        {1, Category::pedestrian, 1.0 * t, 0.0},
                        {2, Category::pedestrian, -2.0, 2.0 * t},
                        {3, Category::vehicle, 4.0 * t - 4.0, -2.0},
                      }});
  }
  data::SceneWindow w;
  w.raw_frames = raw;
  w.transform = {0.0, 0.0, 0.5};
  for (const auto & f : raw) {
    w.frames.push_back(data::apply_transform(f, w.transform));
  }
  return w;
}

// Offsets each scored agent's truth by a fixed distance.
Method offset_method(std::map<int, double> dx)
{
  return {"offset", [dx](const data::SceneWindow & w) {
            Predictions out;
            for (const auto & a : evaluation_agents(w, 2)) {
              for (const auto & p : a.truth) {
                out[a.agent_id].push_back({p.x + dx.at(a.agent_id), p.y});
              }
            }
            return out;
          }};
}

}  // namespace

TEST_CASE("ade and fde examples")
{
  const std::vector<Point> truth = {{0, 0}, {1, 1}, {2, 3}};
  CHECK(ade(truth, truth) == 0.0);
  CHECK(fde(truth, truth) == 0.0);
  std::vector<Point> shifted;
  for (const auto & p : truth) {
    shifted.push_back({p.x + 0.3, p.y + 0.4});
  }
  CHECK(std::abs(ade(shifted, truth) - 0.5) <= 1e-15);
  const std::vector<Point> last_off = {{0, 0}, {1, 1}, {3, 3}};
  CHECK(fde(last_off, truth) == 1.0);
  CHECK_THROWS_AS(ade(truth, std::vector<Point>(2)), UsageError);
  CHECK_THROWS_AS(fde(std::vector<Point>{}, std::vector<Point>{}), UsageError);
  CHECK_THROWS_AS(ade(std::vector<Point>{}, std::vector<Point>{}), UsageError);
}

TEST_CASE("metrics against brute force and under rigid motion")
{
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 8);
    const auto a = random_track(rng, n);
    const auto b = random_track(rng, n);
    CHECK(std::abs(ade(a, b) - brute_ade(a, b)) <= 1e-12);
    CHECK(std::abs(fde(a, b) - std::hypot(a.back().x - b.back().x, a.back().y - b.back().y)) <= 1e-12);
    CHECK(ade(a, b) >= 0.0);
    const double angle = uniform(rng, -std::numbers::pi, std::numbers::pi);
    const double tx = uniform(rng, -50, 50);
    const double ty = uniform(rng, -50, 50);
    const auto ra = rigid(a, angle, tx, ty);
    const auto rb = rigid(b, angle, tx, ty);
    CHECK(std::abs(ade(ra, rb) - ade(a, b)) <= 1e-12);
    CHECK(std::abs(fde(ra, rb) - fde(a, b)) <= 1e-12);
    if (n == 1) {
      CHECK(ade(a, b) == fde(a, b));
    }
  }
}

TEST_CASE("constant velocity examples")
{
  const std::vector<Point> two = {{0, 0}, {1, 0}};
  CHECK(constant_velocity_baseline(two, 3) == std::vector<Point>{{2, 0}, {3, 0}, {4, 0}});
  const std::vector<Point> still = {{2, 5}, {2, 5}, {2, 5}};
  CHECK(constant_velocity_baseline(still, 2) == std::vector<Point>{{2, 5}, {2, 5}});
  // last two steps (1, 0) and (3, 0) average to (2, 0)
  const std::vector<Point> speeding = {{0, 0}, {1, 0}, {4, 0}};
  CHECK(constant_velocity_baseline(speeding, 2) == std::vector<Point>{{6, 0}, {8, 0}});
  CHECK_THROWS_AS(constant_velocity_baseline(std::vector<Point>{{0, 0}}, 2), UsageError);
}

TEST_CASE("constant velocity does worse on a turn than on a straight line")
{
  data::ScenarioSpec spec;
  spec.kind = data::ScenarioKind::crossroad;
  spec.pedestrians = 0;
  spec.bicycles = 0;
  spec.vehicles = 1;
  spec.noise = 0.0;
  auto track = [&](double turn_fraction, std::uint64_t seed) {
    spec.turn_fraction = turn_fraction;
    spec.seed = seed;
    const auto r = data::generate_scenario_detailed(spec);
    std::vector<Point> pts;
    for (const auto & rec : r.records) {
      pts.push_back({rec.x, rec.y});
    }
    return std::make_pair(pts, r.agents.front());
  };
  const auto [turn, plan] = track(1.0, 3);
  const auto [line, line_plan] = track(0.0, 3);
  REQUIRE(plan.maneuver != data::Maneuver::straight);
  REQUIRE(line_plan.maneuver == data::Maneuver::straight);
  // window whose prediction part begins where the turn does
  const double dt = 1.0 / spec.frame_rate;
  const auto begin = static_cast<std::size_t>(plan.arc_begin / (plan.speed * dt));
  REQUIRE(begin >= 5);
  REQUIRE(begin + 8 <= turn.size());
  auto cv_ade = [](const std::vector<Point> & pts, std::size_t at) {
    const std::vector<Point> obs(pts.begin() + static_cast<std::ptrdiff_t>(at - 5), pts.begin() + static_cast<std::ptrdiff_t>(at));
    const std::vector<Point> truth(pts.begin() + static_cast<std::ptrdiff_t>(at), pts.begin() + static_cast<std::ptrdiff_t>(at + 8));
    return ade(constant_velocity_baseline(obs, 8), truth);
  };
  const double turning = cv_ade(turn, begin);
  const double straight = cv_ade(line, 5);
  MESSAGE("cv ade turning " << turning << " straight " << straight);
  CHECK(turning > straight);
  CHECK(straight <= 1e-9);
}

TEST_CASE("scored agents")
{
  auto w = crafted_window();
  // agent 4 appears only in the last observed frame; agent 5 leaves early
  w.frames[1].agents.push_back({4, Category::bicycle, 0, 0});
  w.frames[0].agents.push_back({5, Category::bicycle, 0, 0});
  w.frames[1].agents.push_back({5, Category::bicycle, 0, 0});
  w.frames[2].agents.push_back({5, Category::bicycle, 0, 0});
  const auto agents = evaluation_agents(w, 2);
  REQUIRE(agents.size() == 3);
  CHECK(agents[0].agent_id == 1);
  CHECK(agents[0].observed.size() == 2);
  CHECK(agents[0].truth.size() == 2);
  CHECK_THROWS_AS(evaluation_agents(w, 4), UsageError);
  CHECK_THROWS_AS(evaluation_agents(w, 1), UsageError);
}

TEST_CASE("oracle scores zero")
{
  data::BenchmarkConfig c;
  c.train_windows = 1;
  c.test_windows = 6;
  const auto b = data::make_benchmark(c);
  const auto r = evaluate(b.test, {oracle_method(5), constant_velocity_method(5)}, EvalConfig{});
  CHECK(r.windows == 6);
  for (const auto scale : {Scale::normalized, Scale::meters}) {
    for (const auto & row : r.find("oracle")->rows(scale)) {
      CHECK(row.ade == 0.0);
      CHECK(row.fde == 0.0);
    }
    CHECK(r.find("constant_velocity")->rows(scale)[kTotalRow].ade > 0.0);
  }
  CHECK(r.find("oracle")->normalized[kTotalRow].agents > 0);
  CHECK(r.find("missing") == nullptr);
}

TEST_CASE("total is the agent weighted mean")
{
  const auto w = crafted_window();
  const std::vector<data::SceneWindow> windows = {w};
  const auto r = evaluate(windows, {offset_method({{1, 0.1}, {2, 0.3}, {3, 0.5}})}, EvalConfig{2, 1});
  const auto & rows = r.methods[0].normalized;
  CHECK(rows[0].agents == 2);
  CHECK(rows[1].agents == 0);
  CHECK(rows[2].agents == 1);
  CHECK(rows[kTotalRow].agents == 3);
  CHECK(std::abs(rows[0].ade - 0.2) <= 1e-12);
  CHECK(std::abs(rows[2].ade - 0.5) <= 1e-12);
  CHECK(rows[1].ade == 0.0);
  // (2 * 0.2 + 1 * 0.5) / 3
  CHECK(std::abs(rows[kTotalRow].ade - 0.3) <= 1e-12);
  CHECK(std::abs(rows[kTotalRow].fde - 0.3) <= 1e-12);
  // meters are normalized values divided by the scale
  CHECK(std::abs(r.methods[0].meters[kTotalRow].ade - 0.6) <= 1e-12);
}

TEST_CASE("a failing method excludes the window for everyone")
{
  auto w = crafted_window();
  auto other = crafted_window();
  other.start_frame = 50;
  const std::vector<data::SceneWindow> windows = {w, other};
  Method flaky{"flaky", [](const data::SceneWindow & sw) {
                 if (sw.start_frame == 50) {
                   throw NumericDomainError("boom");
                 }
                 return oracle_method(2).predict(sw);
               }};
  const auto r = evaluate(windows, {oracle_method(2), flaky}, EvalConfig{2, 1});
  CHECK(r.windows == 1);
  CHECK(r.excluded_windows == 1);
  REQUIRE(r.exclusions.size() == 1);
  CHECK(r.exclusions[0].find("flaky") != std::string::npos);
  CHECK(r.find("oracle")->normalized[kTotalRow].agents == 3);
  CHECK(r.find("flaky")->normalized[kTotalRow].agents == 3);

  Method partial{"partial", [](const data::SceneWindow &) { return Predictions{}; }};
  const auto p = evaluate(windows, {oracle_method(2), partial}, EvalConfig{2, 1});
  CHECK(p.windows == 0);
  CHECK(p.excluded_windows == 2);
}

TEST_CASE("evaluation is deterministic across worker counts")
{
  data::BenchmarkConfig c;
  c.train_windows = 1;
  c.test_windows = 12;
  const auto b = data::make_benchmark(c);
  const std::vector<Method> methods = {constant_velocity_method(5)};
  std::ostringstream one;
  std::ostringstream four;
  write_report_csv(one, evaluate(b.test, methods, EvalConfig{5, 1}));
  write_report_csv(four, evaluate(b.test, methods, EvalConfig{5, 4}));
  CHECK(one.str() == four.str());
}

TEST_CASE("report layout")
{
  const auto w = crafted_window();
  const std::vector<data::SceneWindow> windows = {w};
  auto a = offset_method({{1, 0.1}, {2, 0.3}, {3, 0.5}});
  a.name = "alpha";
  auto b = oracle_method(2);
  b.name = "beta";
  const auto r = evaluate(windows, {a, b}, EvalConfig{2, 1});

  std::ostringstream csv;
  write_report_csv(csv, r);
  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "method,category,ade,fde,n_windows,coordinate_scale");
  std::size_t rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
  }
  // 2 methods x 4 categories x 2 scales
  CHECK(rows == 16);
  CHECK(csv.str().find("\nalpha,total,0.3") != std::string::npos);
  CHECK(csv.str().find(",3,normalized\n") != std::string::npos);
  CHECK(csv.str().find("\nalpha,vehicle,1,1,1,meters\n") != std::string::npos);
  CHECK(csv.str().find("\nbeta,bicycle,0,0,0,meters\n") != std::string::npos);

  std::ostringstream table;
  write_report_table(table, r, Scale::normalized);
  const std::string t = table.str();
  CHECK(t.find("Avg. disp. error") != std::string::npos);
  CHECK(t.find("Final disp. error") != std::string::npos);
  CHECK(t.find("alpha") < t.find("beta"));
  std::size_t category_rows = 0;
  for (const char * name : kRowNames) {
    std::size_t pos = 0;
    while ((pos = t.find(name, pos)) != std::string::npos) {
      ++category_rows;
      ++pos;
    }
  }
  CHECK(category_rows == 8);
}
