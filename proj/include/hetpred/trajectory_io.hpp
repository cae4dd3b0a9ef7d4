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

#ifndef HETPRED_TRAJECTORY_IO_HPP_
#define HETPRED_TRAJECTORY_IO_HPP_

#include "hetpred/graph4d.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace hetpred::data
{

inline constexpr const char * kTrajectoryHeader = "frame,agent_id,category,x,y";

struct TrajectoryRecord
{
  int frame = 0;
  int agent_id = 0;
  graph::Category category = graph::Category::pedestrian;
  double x = 0.0;
  double y = 0.0;

  bool operator==(const TrajectoryRecord &) const = default;
};

/// Parses `frame,agent_id,category,x,y` CSV. Rows come back sorted by
/// (frame, agent_id). Malformed rows raise ParseError with the line number;
/// bad categories and duplicate (frame, agent_id) pairs raise ValidationError.
std::vector<TrajectoryRecord> parse_trajectories(std::istream & in);
std::vector<TrajectoryRecord> load_trajectories(const std::filesystem::path & path);

/// Doubles are written in shortest round-trip form.
void write_trajectories(std::ostream & out, const std::vector<TrajectoryRecord> & records);
void save_trajectories(const std::filesystem::path & path, const std::vector<TrajectoryRecord> & records);

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

}  // namespace hetpred::data

#endif  // HETPRED_TRAJECTORY_IO_HPP_
