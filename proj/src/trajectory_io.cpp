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

#include "hetpred/trajectory_io.hpp"

#include "hetpred/errors.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <string_view>
#include <utility>

namespace hetpred::data
{
namespace
{

std::string_view trim(std::string_view s)
{
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  return s;
}

template <class T>
T parse_field(std::string_view text, const char * what, std::size_t line)
{
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError("bad " + std::string(what) + " '" + std::string(text) + "'", line);
  }
  return value;
}

}  // namespace

std::string format_double(double v)
{
  std::array<char, 64> buf;
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) {
    throw Error("cannot format double");
  }
  return std::string(buf.data(), ptr);
}

std::vector<TrajectoryRecord> parse_trajectories(std::istream & in)
{
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    if (trim(line) != kTrajectoryHeader) {
      throw ParseError("expected header '" + std::string(kTrajectoryHeader) + "'", line_no);
    }
    have_header = true;
    break;
  }
  if (!have_header) {
    throw ParseError("missing header '" + std::string(kTrajectoryHeader) + "'", line_no + 1);
  }

  std::vector<TrajectoryRecord> records;
  std::set<std::pair<int, int>> seen;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest = trim(line);
    if (rest.empty()) {
      continue;
    }
    std::array<std::string_view, 5> fields;
    std::size_t n = 0;
    while (true) {
      const std::size_t comma = rest.find(',');
      if (n == fields.size()) {
        throw ParseError("too many fields", line_no);
      }
      fields[n++] = rest.substr(0, comma);
      if (comma == std::string_view::npos) {
        break;
      }
      rest.remove_prefix(comma + 1);
    }
    if (n != fields.size()) {
      throw ParseError("expected 5 fields, found " + std::to_string(n), line_no);
    }
    TrajectoryRecord r;
    r.frame = parse_field<int>(fields[0], "frame", line_no);
    r.agent_id = parse_field<int>(fields[1], "agent_id", line_no);
    const int category = parse_field<int>(fields[2], "category", line_no);
    r.x = parse_field<double>(fields[3], "x", line_no);
    r.y = parse_field<double>(fields[4], "y", line_no);
    try {
      r.category = graph::category_from_int(category);
    } catch (const ValidationError & e) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!std::isfinite(r.x) || !std::isfinite(r.y)) {
      throw ValidationError("line " + std::to_string(line_no) + ": non-finite coordinate");
    }
    if (!seen.emplace(r.frame, r.agent_id).second) {
      throw ValidationError(
        "line " + std::to_string(line_no) + ": duplicate (frame " + std::to_string(r.frame) +
        ", agent " + std::to_string(r.agent_id) + ")");
    }
    records.push_back(r);
  }
  std::sort(records.begin(), records.end(), [](const auto & a, const auto & b) {
    return std::tie(a.frame, a.agent_id) < std::tie(b.frame, b.agent_id);
  });
  return records;
}

std::vector<TrajectoryRecord> load_trajectories(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  return parse_trajectories(in);
}

void write_trajectories(std::ostream & out, const std::vector<TrajectoryRecord> & records)
{
  out << kTrajectoryHeader << '\n';
  for (const auto & r : records) {
    out << r.frame << ',' << r.agent_id << ',' << static_cast<int>(r.category) << ','
        << format_double(r.x) << ',' << format_double(r.y) << '\n';
  }
}

void save_trajectories(const std::filesystem::path & path, const std::vector<TrajectoryRecord> & records)
{
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  write_trajectories(out, records);
  if (!out) {
    throw IoError("failed writing " + path.string());
  }
}

}  // namespace hetpred::data
