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

#include "hetpred/window.hpp"

#include "hetpred/errors.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace hetpred::data
{

std::pair<double, double> NormalizeTransform::to_normalized(double x, double y) const
{
  return {(x - center_x) * scale, (y - center_y) * scale};
}

std::pair<double, double> NormalizeTransform::to_world(double x, double y) const
{
  return {x / scale + center_x, y / scale + center_y};
}

NormalizeTransform fit_transform(std::span<const graph::FrameObservation> frames)
{
  double sx = 0.0;
  double sy = 0.0;
  std::size_t n = 0;
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = min_x;
  double max_x = -min_x;
  double max_y = -min_x;
  for (const auto & f : frames) {
    for (const auto & a : f.agents) {
      sx += a.x;
      sy += a.y;
      ++n;
      min_x = std::min(min_x, a.x);
      max_x = std::max(max_x, a.x);
      min_y = std::min(min_y, a.y);
      max_y = std::max(max_y, a.y);
    }
  }
  if (n == 0) {
    throw UsageError("cannot normalize an empty window");
  }
  NormalizeTransform t;
  t.center_x = sx / static_cast<double>(n);
  t.center_y = sy / static_cast<double>(n);
  const double span = std::max(max_x - min_x, max_y - min_y);
  t.scale = span > 0.0 ? 2.0 / span : 1.0;
  return t;
}

graph::FrameObservation apply_transform(const graph::FrameObservation & frame, const NormalizeTransform & t)
{
  graph::FrameObservation out = frame;
  for (auto & a : out.agents) {
    std::tie(a.x, a.y) = t.to_normalized(a.x, a.y);
  }
  return out;
}

std::vector<graph::FrameObservation> group_frames(const std::vector<TrajectoryRecord> & records)
{
  std::map<int, graph::FrameObservation> by_frame;
  for (const auto & r : records) {
    auto & f = by_frame[r.frame];
    f.frame_index = r.frame;
    f.agents.push_back({r.agent_id, r.category, r.x, r.y});
  }
  std::vector<graph::FrameObservation> out;
  out.reserve(by_frame.size());
  for (auto & [frame, obs] : by_frame) {
    std::sort(obs.agents.begin(), obs.agents.end(), [](const auto & a, const auto & b) {
      return a.agent_id < b.agent_id;
    });
    out.push_back(std::move(obs));
  }
  return out;
}

SceneWindow normalize_window(std::vector<graph::FrameObservation> raw, std::size_t fit_frames)
{
  if (raw.empty()) {
    throw UsageError("cannot normalize an empty window");
  }
  for (std::size_t i = 1; i < raw.size(); ++i) {
    if (raw[i].frame_index != raw[i - 1].frame_index + 1) {
      throw UsageError("window frames are not consecutive");
    }
  }
  const std::size_t n = fit_frames == 0 ? raw.size() : std::min(fit_frames, raw.size());
  SceneWindow w;
  w.transform = fit_transform(std::span(raw).first(n));
  w.start_frame = raw.front().frame_index;
  w.frames.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    w.frames.push_back(apply_transform(raw[i], w.transform));
    w.frames.back().frame_index = static_cast<int>(i);
  }
  w.raw_frames = std::move(raw);
  return w;
}

SliceResult slice_windows(
  const std::vector<TrajectoryRecord> & records, std::size_t obs_frames, std::size_t pred_frames,
  std::size_t stride)
{
  if (obs_frames == 0 || obs_frames >= pred_frames) {
    throw UsageError("need 0 < T_obs < T_pred");
  }
  if (stride == 0) {
    throw UsageError("stride must be at least 1");
  }
  SliceResult result;
  const auto frames = group_frames(records);
  if (frames.empty()) {
    return result;
  }
  std::map<int, std::size_t> index;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    index[frames[i].frame_index] = i;
  }
  const long first = frames.front().frame_index;
  const long last = frames.back().frame_index;
  const long len = static_cast<long>(pred_frames);
  for (long s = first; s + len - 1 <= last; s += static_cast<long>(stride)) {
    std::vector<graph::FrameObservation> raw;
    raw.reserve(pred_frames);
    bool complete = true;
    for (long f = s; f < s + len; ++f) {
      const auto it = index.find(static_cast<int>(f));
      if (it == index.end()) {
        complete = false;
        break;
      }
      raw.push_back(frames[it->second]);
    }
    if (!complete) {
      ++result.skipped;
      continue;
    }
    result.windows.push_back(normalize_window(std::move(raw), obs_frames));
  }
  return result;
}

std::vector<TrajectoryRecord> to_records(const std::vector<graph::FrameObservation> & frames)
{
  std::vector<TrajectoryRecord> out;
  for (const auto & f : frames) {
    for (const auto & a : f.agents) {
      out.push_back({f.frame_index, a.agent_id, a.category, a.x, a.y});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto & a, const auto & b) {
    return std::tie(a.frame, a.agent_id) < std::tie(b.frame, b.agent_id);
  });
  return out;
}

}  // namespace hetpred::data
