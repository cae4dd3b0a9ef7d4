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

#include "hetpred/scenario.hpp"

#include "hetpred/errors.hpp"
#include "hetpred/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

namespace hetpred::data
{
namespace
{

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Lane offsets from the road axis (right-hand traffic) and turn radii.
constexpr double kVehicleLane = 1.75;
constexpr double kVehicleLaneWidth = 3.5;
constexpr double kBicycleLane = 4.5;
constexpr double kStraightBicycleLane = 8.5;
constexpr double kSidewalk = 11.0;
constexpr double kVehicleRight = 9.0;
constexpr double kVehicleLeft = 14.0;
constexpr double kBicycleRight = 9.0;
constexpr double kBicycleLeft = 16.0;

constexpr double kCrossroadExit = 50.0;
constexpr double kPedestrianExit = 40.0;
constexpr double kStraightExit = 60.0;

constexpr double kPedestrianPull = 0.5;
constexpr double kPedestrianJitter = 0.2;
constexpr double kRepulsionRange = 2.0;
constexpr double kRepulsionGain = 1.5;

struct Segment
{
  double x;
  double y;
  double heading;
  double length;
  double curvature;  // signed, 0 for straight

  std::pair<double, double> at(double u) const
  {
    if (curvature == 0.0) {
      return {x + u * std::cos(heading), y + u * std::sin(heading)};
    }
    const double h = heading + curvature * u;
    return {
      x + (std::sin(h) - std::sin(heading)) / curvature,
      y - (std::cos(h) - std::cos(heading)) / curvature};
  }
};

// Piecewise straight/arc path; the last piece extends forever.
class Path
{
public:
  Path(double x, double y, double heading) : x_(x), y_(y), heading_(heading) {}

  void straight(double length) { push(length, 0.0); }
  void arc(double radius, double angle)
  {
    push(radius * std::abs(angle), angle > 0 ? 1.0 / radius : -1.0 / radius);
  }

  std::pair<double, double> at(double s) const
  {
    for (const auto & seg : segments_) {
      if (s <= seg.length) {
        return seg.at(s);
      }
      s -= seg.length;
    }
    return Segment{x_, y_, heading_, kInf, 0.0}.at(s);
  }

private:
  void push(double length, double curvature)
  {
    Segment seg{x_, y_, heading_, length, curvature};
    std::tie(x_, y_) = seg.at(length);
    heading_ += curvature * length;
    segments_.push_back(seg);
  }

  double x_;
  double y_;
  double heading_;
  std::vector<Segment> segments_;
};

std::pair<double, double> rotate(double x, double y, double a)
{
  return {x * std::cos(a) - y * std::sin(a), x * std::sin(a) + y * std::cos(a)};
}

double wrap_angle(double a)
{
  return std::remainder(a, 2.0 * kPi);
}

// Lowest path speed whose per-frame chord on an arc of `radius` is `lo`.
double turning_speed_floor(double lo, double radius, double dt)
{
  return 2.0 * radius / dt * std::asin(std::min(1.0, lo * dt / (2.0 * radius)));
}

struct Agent
{
  AgentPlan plan;
  std::optional<Path> path;  // analytic movers
  // Pedestrian state.
  double px = 0.0;
  double py = 0.0;
  double heading = 0.0;
  double desired = 0.0;
  double exit_radius = kInf;
  bool exit_on_x = false;
  bool active = false;
  bool gone = false;
};

Agent make_crossroad_mover(
  graph::Category cat, const ScenarioSpec & spec, double dt, std::mt19937_64 & rng)
{
  const bool vehicle = cat == graph::Category::vehicle;
  const SpeedBand band = speed_band(cat);
  const double lane = vehicle ? kVehicleLane : kBicycleLane;
  const double r_right = vehicle ? kVehicleRight : kBicycleRight;
  const double r_left = vehicle ? kVehicleLeft : kBicycleLeft;
  const double d = vehicle ? uniform(rng, 30.0, 45.0) : uniform(rng, 12.0, 20.0);
  const double arm = kPi / 2.0 * static_cast<double>(uniform_index(rng, 4));

  Agent a;
  a.plan.category = cat;
  const double turn_draw = uniform01(rng);
  const bool left = uniform01(rng) < 0.5;
  a.plan.maneuver = turn_draw < spec.turn_fraction ? (left ? Maneuver::left : Maneuver::right)
                                                   : Maneuver::straight;

  const auto [sx, sy] = rotate(-d, -lane, arm);
  Path path(sx, sy, arm);
  double radius = 0.0;
  if (a.plan.maneuver == Maneuver::right) {
    radius = r_right;
    path.straight(d - lane - radius);
    path.arc(radius, -kPi / 2.0);
    a.plan.arc_begin = d - lane - radius;
  } else if (a.plan.maneuver == Maneuver::left) {
    radius = r_left;
    path.straight(d + lane - radius);
    path.arc(radius, kPi / 2.0);
    a.plan.arc_begin = d + lane - radius;
  }
  if (radius > 0.0) {
    a.plan.arc_end = a.plan.arc_begin + radius * kPi / 2.0;
    a.plan.turn_radius = radius;
  }
  const double lo = radius > 0.0 ? std::max(band.lo, turning_speed_floor(band.lo, radius, dt)) : band.lo;
  a.plan.speed = uniform(rng, lo, band.hi);
  a.path = std::move(path);
  a.exit_radius = kCrossroadExit;
  return a;
}

Agent make_straight_mover(graph::Category cat, std::mt19937_64 & rng)
{
  const bool vehicle = cat == graph::Category::vehicle;
  const SpeedBand band = speed_band(cat);
  const double dir = uniform01(rng) < 0.5 ? 1.0 : -1.0;
  double y = 0.0;
  double x = 0.0;
  if (vehicle) {
    const double lane = static_cast<double>(uniform_index(rng, 2));
    y = -dir * (kVehicleLane + kVehicleLaneWidth * lane);
    x = -dir * uniform(rng, 40.0, 58.0);
  } else {
    y = -dir * kStraightBicycleLane;
    x = -dir * uniform(rng, 10.0, 30.0);
  }
  Agent a;
  a.plan.category = cat;
  a.plan.maneuver = Maneuver::straight;
  a.plan.speed = uniform(rng, band.lo, band.hi);
  a.path.emplace(x, y, dir > 0 ? 0.0 : kPi);
  a.exit_radius = kStraightExit;
  a.exit_on_x = true;
  return a;
}

Agent make_pedestrian(ScenarioKind kind, std::mt19937_64 & rng)
{
  const SpeedBand band = speed_band(graph::Category::pedestrian);
  Agent a;
  a.plan.category = graph::Category::pedestrian;
  a.plan.maneuver = Maneuver::walk;
  a.plan.speed = uniform(rng, band.lo, band.hi);
  if (kind == ScenarioKind::crossroad) {
    const double sx = uniform01(rng) < 0.5 ? 1.0 : -1.0;
    const double sy = uniform01(rng) < 0.5 ? 1.0 : -1.0;
    const double c = uniform(rng, 8.0, 11.0);
    a.px = sx * c + uniform(rng, -1.0, 1.0);
    a.py = sy * c + uniform(rng, -1.0, 1.0);
    a.desired = uniform01(rng) < 0.5 ? std::atan2(0.0, -sx) : std::atan2(-sy, 0.0);
    a.exit_radius = kPedestrianExit;
  } else {
    const double side = uniform01(rng) < 0.5 ? 1.0 : -1.0;
    a.py = side * kSidewalk + uniform(rng, -0.8, 0.8);
    a.px = uniform(rng, -25.0, 25.0);
    a.desired = uniform01(rng) < 0.5 ? 0.0 : kPi;
    a.exit_radius = kStraightExit;
    a.exit_on_x = true;
  }
  a.heading = a.desired;
  return a;
}

bool outside(const Agent & a, double x, double y)
{
  return a.exit_on_x ? std::abs(x) > a.exit_radius : std::hypot(x, y) > a.exit_radius;
}

}  // namespace

std::string to_string(ScenarioKind k)
{
  return k == ScenarioKind::crossroad ? "crossroad" : "straight_lanes";
}

ScenarioKind scenario_kind_from_string(const std::string & name)
{
  if (name == "crossroad") {
    return ScenarioKind::crossroad;
  }
  if (name == "straight_lanes") {
    return ScenarioKind::straight_lanes;
  }
  throw ConfigError("unknown scenario kind '" + name + "'");
}

SpeedBand speed_band(graph::Category c)
{
  switch (c) {
    case graph::Category::pedestrian:
      return {1.0, 2.0};
    case graph::Category::bicycle:
      return {3.0, 5.0};
    case graph::Category::vehicle:
      return {8.0, 12.0};
  }
  throw ValidationError("bad category");
}

int ScenarioSpec::count(graph::Category c) const
{
  switch (c) {
    case graph::Category::pedestrian:
      return pedestrians;
    case graph::Category::bicycle:
      return bicycles;
    case graph::Category::vehicle:
      return vehicles;
  }
  return 0;
}

void ScenarioSpec::validate() const
{
  if (pedestrians < 0 || bicycles < 0 || vehicles < 0) {
    throw ConfigError("agent counts must be non-negative");
  }
  if (!(frame_rate > 0.0) || frame_rate > 10.0) {
    throw ConfigError("frame_rate must be in (0, 10]");
  }
  if (min_frames < 2) {
    throw ConfigError("min_frames must be at least 2");
  }
  if (duration < min_frames) {
    throw ConfigError(
      "duration of " + std::to_string(duration) + " frames is shorter than the " +
      std::to_string(min_frames) + "-frame window");
  }
  if (!(noise >= 0.0) || !std::isfinite(noise)) {
    throw ConfigError("noise must be a finite non-negative value");
  }
  if (!(turn_fraction >= 0.0 && turn_fraction <= 1.0)) {
    throw ConfigError("turn_fraction must be in [0, 1]");
  }
}

ScenarioSpec ScenarioSpec::from_key_values(const KeyValues & kv, const std::string & prefix)
{
  ScenarioSpec s;
  s.kind = scenario_kind_from_string(kv.get_string(prefix + "kind", to_string(s.kind)));
  s.pedestrians = static_cast<int>(kv.get_int(prefix + "pedestrians", s.pedestrians));
  s.bicycles = static_cast<int>(kv.get_int(prefix + "bicycles", s.bicycles));
  s.vehicles = static_cast<int>(kv.get_int(prefix + "vehicles", s.vehicles));
  s.frame_rate = kv.get_double(prefix + "frame_rate", s.frame_rate);
  s.duration = static_cast<int>(kv.get_int(prefix + "duration", s.duration));
  s.min_frames = static_cast<int>(kv.get_int(prefix + "min_frames", s.min_frames));
  s.noise = kv.get_double(prefix + "noise", s.noise);
  s.turn_fraction = kv.get_double(prefix + "turn_fraction", s.turn_fraction);
  s.seed = kv.get_uint(prefix + "seed", s.seed);
  s.validate();
  return s;
}

ScenarioResult generate_scenario_detailed(const ScenarioSpec & spec)
{
  spec.validate();
  const double dt = 1.0 / spec.frame_rate;
  std::mt19937_64 layout(derive_seed(spec.seed, "layout"));
  std::mt19937_64 walk(derive_seed(spec.seed, "walk"));
  std::mt19937_64 noise(derive_seed(spec.seed, "noise"));
  const auto spawn_slots = static_cast<std::uint64_t>(spec.duration - spec.min_frames + 1);

  std::vector<Agent> agents;
  int next_id = 1;
  for (const auto cat : graph::kCategories) {
    for (int n = 0; n < spec.count(cat); ++n) {
      Agent a;
      if (cat == graph::Category::pedestrian) {
        a = make_pedestrian(spec.kind, layout);
      } else if (spec.kind == ScenarioKind::crossroad) {
        a = make_crossroad_mover(cat, spec, dt, layout);
      } else {
        a = make_straight_mover(cat, layout);
      }
      a.plan.agent_id = next_id++;
      a.plan.spawn_frame = static_cast<int>(uniform_index(layout, spawn_slots));
      a.plan.last_frame = a.plan.spawn_frame - 1;
      agents.push_back(std::move(a));
    }
  }

  ScenarioResult result;
  std::vector<std::pair<double, double>> pos(agents.size());
  for (int k = 0; k < spec.duration; ++k) {
    // Positions at frame k.
    for (std::size_t i = 0; i < agents.size(); ++i) {
      Agent & a = agents[i];
      if (a.gone || k < a.plan.spawn_frame) {
        continue;
      }
      a.active = true;
      if (a.path) {
        pos[i] = a.path->at(a.plan.speed * dt * static_cast<double>(k - a.plan.spawn_frame));
      } else {
        pos[i] = {a.px, a.py};
      }
      if (outside(a, pos[i].first, pos[i].second)) {
        a.active = false;
        a.gone = true;
        continue;
      }
      a.plan.last_frame = k;
      const auto cat = a.plan.category;
      const double nx = spec.noise > 0.0 ? spec.noise * standard_normal(noise) : 0.0;
      const double ny = spec.noise > 0.0 ? spec.noise * standard_normal(noise) : 0.0;
      result.records.push_back({k, a.plan.agent_id, cat, pos[i].first + nx, pos[i].second + ny});
    }
    // Pedestrian steps toward frame k + 1, all reading frame-k positions.
    for (std::size_t i = 0; i < agents.size(); ++i) {
      Agent & a = agents[i];
      if (!a.active || a.path) {
        continue;
      }
      double h = a.heading + kPedestrianPull * wrap_angle(a.desired - a.heading) +
                 kPedestrianJitter * standard_normal(walk);
      double rx = 0.0;
      double ry = 0.0;
      for (std::size_t j = 0; j < agents.size(); ++j) {
        if (j == i || !agents[j].active) {
          continue;
        }
        const double dx = pos[i].first - pos[j].first;
        const double dy = pos[i].second - pos[j].second;
        const double dist = std::hypot(dx, dy);
        if (dist < kRepulsionRange && dist > 0.0) {
          const double w = (kRepulsionRange - dist) / kRepulsionRange;
          rx += w * dx / dist;
          ry += w * dy / dist;
        }
      }
      if (rx != 0.0 || ry != 0.0) {
        h = std::atan2(std::sin(h) + kRepulsionGain * ry, std::cos(h) + kRepulsionGain * rx);
      }
      a.heading = h;
      a.px = pos[i].first + a.plan.speed * dt * std::cos(h);
      a.py = pos[i].second + a.plan.speed * dt * std::sin(h);
    }
  }
  std::sort(result.records.begin(), result.records.end(), [](const auto & a, const auto & b) {
    return std::tie(a.frame, a.agent_id) < std::tie(b.frame, b.agent_id);
  });
  for (const auto & a : agents) {
    result.agents.push_back(a.plan);
  }
  return result;
}

std::vector<TrajectoryRecord> generate_scenario(const ScenarioSpec & spec)
{
  return generate_scenario_detailed(spec).records;
}

}  // namespace hetpred::data
