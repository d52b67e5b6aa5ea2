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

#include "adeval/scene_segmentation.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "adeval/error.hpp"

namespace adeval::scene {
namespace {

void validate_stream(std::span<const FrameFeature> frames) {
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (frames[i].frame_idx <= frames[i - 1].frame_idx) {
      throw DataError("frame stream not monotone: frame_idx " +
                      std::to_string(frames[i].frame_idx) + " after " +
                      std::to_string(frames[i - 1].frame_idx));
    }
    if (frames[i].t_s < frames[i - 1].t_s) {
      throw DataError("frame stream not monotone: t_s decreases at frame " +
                      std::to_string(frames[i].frame_idx));
    }
  }
}

std::string make_clip_id(const std::string& game_id, std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "_%04zu", index);
  return game_id + buf;
}

}  // namespace

std::vector<SceneCut> detect_scenes(std::span<const FrameFeature> frames,
                                    const SegmentationConfig& config) {
  validate_stream(frames);
  std::vector<SceneCut> cuts;
  if (frames.size() < 2) return cuts;
  double last_cut_t = frames.front().t_s;
  for (std::size_t i = 1; i < frames.size(); ++i) {
    const double delta = (std::fabs(frames[i].h_mean - frames[i - 1].h_mean) +
                          std::fabs(frames[i].s_mean - frames[i - 1].s_mean) +
                          std::fabs(frames[i].v_mean - frames[i - 1].v_mean)) /
                         3.0;
    if (delta > config.threshold &&
        frames[i].t_s - last_cut_t >= config.min_scene_s) {
      cuts.push_back({frames[i].frame_idx, frames[i].t_s, delta});
      last_cut_t = frames[i].t_s;
    }
  }
  return cuts;
}

std::vector<Clip> split_into_clips(const std::string& game_id,
                                   std::span<const FrameFeature> frames,
                                   const SegmentationConfig& config) {
  if (frames.empty()) {
    throw DataError("split_into_clips: empty frame stream");
  }
  if (config.max_scene_s <= 0.0) {
    throw UsageError("max_scene_s must be positive");
  }
  const auto cuts = detect_scenes(frames, config);

  std::vector<double> bounds;
  bounds.push_back(frames.front().t_s);
  for (const auto& cut : cuts) {
    if (cut.t_s > bounds.back()) bounds.push_back(cut.t_s);
  }
  const double end_t = frames.back().t_s;
  if (end_t > bounds.back()) bounds.push_back(end_t);

  std::vector<Clip> clips;
  for (std::size_t b = 0; b + 1 < bounds.size(); ++b) {
    double a = bounds[b];
    const double z = bounds[b + 1];
    // Force-split long segments; the final remainder keeps the exact end so
    // the tiling sums to the stream duration.
    while (z - a > config.max_scene_s) {
      Clip c;
      c.game_id = game_id;
      c.start_s = a;
      c.end_s = a + config.max_scene_s;
      clips.push_back(std::move(c));
      a += config.max_scene_s;
    }
    if (z > a) {
      Clip c;
      c.game_id = game_id;
      c.start_s = a;
      c.end_s = z;
      clips.push_back(std::move(c));
    }
  }
  for (std::size_t i = 0; i < clips.size(); ++i) {
    clips[i].clip_id = make_clip_id(game_id, i + 1);
  }
  return clips;
}

std::vector<FrameFeature> read_frames_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path.string());
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) {
    throw DataError(path.string() + ": empty file");
  }
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "frame_idx,t_s,h_mean,s_mean,v_mean") {
    throw DataError(path.string() +
                    ":1: expected header frame_idx,t_s,h_mean,s_mean,v_mean");
  }
  std::vector<FrameFeature> frames;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 5) {
      throw DataError(path.string() + ":" + std::to_string(lineno) +
                      ": expected 5 comma-separated fields");
    }
    FrameFeature f;
    try {
      std::size_t pos = 0;
      f.frame_idx = std::stol(fields[0], &pos);
      if (pos != fields[0].size()) throw std::invalid_argument(fields[0]);
      f.t_s = std::stod(fields[1]);
      f.h_mean = std::stod(fields[2]);
      f.s_mean = std::stod(fields[3]);
      f.v_mean = std::stod(fields[4]);
    } catch (const std::exception&) {
      throw DataError(path.string() + ":" + std::to_string(lineno) +
                      ": malformed numeric field");
    }
    frames.push_back(f);
  }
  validate_stream(frames);
  return frames;
}

}  // namespace adeval::scene
