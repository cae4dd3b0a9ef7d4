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

#ifndef HETPRED_WINDOW_HPP_
#define HETPRED_WINDOW_HPP_

#include "hetpred/graph4d.hpp"
#include "hetpred/trajectory_io.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hetpred::data
{

/// normalized = (world - center) * scale
struct NormalizeTransform
{
  double center_x = 0.0;
  double center_y = 0.0;
  double scale = 1.0;

  std::pair<double, double> to_normalized(double x, double y) const;
  std::pair<double, double> to_world(double x, double y) const;
  double distance_to_world(double d) const { return d / scale; }
};

/// Centroid of every coordinate in `frames`; scale maps the larger axis
/// span to [-1, 1]. Zero span falls back to scale 1.
NormalizeTransform fit_transform(std::span<const graph::FrameObservation> frames);

graph::FrameObservation apply_transform(const graph::FrameObservation & frame, const NormalizeTransform & t);

struct SceneWindow
{
  std::vector<graph::FrameObservation> frames;      // normalized, frame_index 0..n-1
  std::vector<graph::FrameObservation> raw_frames;  // world coordinates, original frame numbers
  NormalizeTransform transform;
  int start_frame = 0;
  std::string scene;  // free-form tag, e.g. "crossroad"
};

/// Frames grouped from records, one entry per distinct frame number, sorted.
std::vector<graph::FrameObservation> group_frames(const std::vector<TrajectoryRecord> & records);

/// Normalizes consecutive frames. The transform is fitted on the first
/// `fit_frames` frames (all frames when 0) so the future never leaks into it.
SceneWindow normalize_window(std::vector<graph::FrameObservation> raw, std::size_t fit_frames = 0);

struct SliceResult
{
  std::vector<SceneWindow> windows;
  std::size_t skipped = 0;  // windows dropped because a frame was missing
};

/// Windows of `pred_frames` consecutive frames every `stride` frames,
/// starting at the first recorded frame. Normalization is fitted on the
/// first `obs_frames` of each window.
SliceResult slice_windows(
  const std::vector<TrajectoryRecord> & records, std::size_t obs_frames, std::size_t pred_frames,
  std::size_t stride);

std::vector<TrajectoryRecord> to_records(const std::vector<graph::FrameObservation> & frames);

}  // namespace hetpred::data

#endif  // HETPRED_WINDOW_HPP_
