// Copyright 2026 The adeval Authors
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
//
// Shot-boundary detection over precomputed per-frame HSV channel means and
// the clip tiling built on top of it. Pure functions of the feature stream;
// no video decoding happens here.

#ifndef ADEVAL_SCENE_SEGMENTATION_HPP_
#define ADEVAL_SCENE_SEGMENTATION_HPP_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "adeval/types.hpp"

namespace adeval::scene {

struct FrameFeature {
  long frame_idx = 0;
  double t_s = 0.0;
  double h_mean = 0.0;
  double s_mean = 0.0;
  double v_mean = 0.0;
};

struct SegmentationConfig {
  // A cut fires when the mean absolute HSV delta exceeds this.
  double threshold = 27.0;
  // No cut closer than this to the previous one (or to the stream start).
  double min_scene_s = 15.0;
  // Segments longer than this are force-split at this interval.
  double max_scene_s = 40.0;
};

struct SceneCut {
  long frame_idx = 0;
  double t_s = 0.0;
  double delta = 0.0;  // the triggering mean absolute channel delta
};

// Frame order must be valid: strictly increasing frame_idx, non-decreasing
// t_s. Raising the threshold never produces more cuts. Streams with fewer
// than two frames yield no cuts.
std::vector<SceneCut> detect_scenes(std::span<const FrameFeature> frames,
                                    const SegmentationConfig& config);

// Tiles the stream's time span [first.t_s, last.t_s] into clips bounded by
// the detected cuts, force-splitting any segment longer than max_scene_s.
// Clip ids are "<game_id>_NNNN" in temporal order. The stream must be
// non-empty; clip durations sum to the stream duration exactly.
std::vector<Clip> split_into_clips(const std::string& game_id,
                                   std::span<const FrameFeature> frames,
                                   const SegmentationConfig& config);

// Header must be "frame_idx,t_s,h_mean,s_mean,v_mean"; errors carry
// file:line.
std::vector<FrameFeature> read_frames_csv(const std::filesystem::path& path);

}  // namespace adeval::scene

#endif  // ADEVAL_SCENE_SEGMENTATION_HPP_
