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

#ifndef HETPRED_SCENARIO_HPP_
#define HETPRED_SCENARIO_HPP_

#include "hetpred/keyvalue.hpp"
#include "hetpred/trajectory_io.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace hetpred::data
{

enum class ScenarioKind { straight_lanes, crossroad };

std::string to_string(ScenarioKind k);
ScenarioKind scenario_kind_from_string(const std::string & name);

struct SpeedBand
{
  double lo;
  double hi;
};

/// Meters per second.
SpeedBand speed_band(graph::Category c);

struct ScenarioSpec
{
  ScenarioKind kind = ScenarioKind::crossroad;
  int pedestrians = 3;
  int bicycles = 2;
  int vehicles = 4;
  double frame_rate = 2.5;  // frames per second, at most 10
  int duration = 40;        // frames
  int min_frames = 13;      // shortest sequence the scene must cover (one window)
  double noise = 0.05;      // std of the position noise, meters
  double turn_fraction = 2.0 / 3.0;  // crossroad vehicles and bicycles that turn
  std::uint64_t seed = 1;

  /// Raises ConfigError.
  void validate() const;
  int count(graph::Category c) const;

  /// Keys: kind, pedestrians, bicycles, vehicles, frame_rate, duration,
  /// min_frames, noise, turn_fraction, seed; each optionally prefixed.
  static ScenarioSpec from_key_values(const KeyValues & kv, const std::string & prefix = "");
};

enum class Maneuver { straight, left, right, walk };

struct AgentPlan
{
  int agent_id = 0;
  graph::Category category = graph::Category::pedestrian;
  Maneuver maneuver = Maneuver::straight;
  double speed = 0.0;  // m/s
  int spawn_frame = 0;
  int last_frame = 0;  // inclusive
  /// Arc-length interval of the turn along the path; empty when not turning.
  double arc_begin = 0.0;
  double arc_end = 0.0;
  double turn_radius = 0.0;
};

struct ScenarioResult
{
  std::vector<TrajectoryRecord> records;
  std::vector<AgentPlan> agents;
};

/// Deterministic for a given spec. Agent ids run 1..N: pedestrians, then
/// bicycles, then vehicles.
ScenarioResult generate_scenario_detailed(const ScenarioSpec & spec);
std::vector<TrajectoryRecord> generate_scenario(const ScenarioSpec & spec);

}  // namespace hetpred::data

#endif  // HETPRED_SCENARIO_HPP_
