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
// Batch pipeline: segment -> context-join -> prompt -> generate ->
// evaluate. Stages hand off through files under out_dir, so each can run
// standalone given its upstream artifacts. Outputs containing scores are
// byte-reproducible; wall-clock only ever appears in the run manifest.

#ifndef ADEVAL_PIPELINE_HPP_
#define ADEVAL_PIPELINE_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "adeval/arge_ad.hpp"
#include "adeval/inference.hpp"
#include "adeval/prompt.hpp"
#include "adeval/scene_segmentation.hpp"
#include "adeval/store.hpp"

namespace adeval::pipe {

struct PipelineConfig {
  struct Inputs {
    std::filesystem::path games;
    std::filesystem::path rosters;
    std::filesystem::path clips;
    std::filesystem::path context;     // empty: no context rows
    std::filesystem::path lexicon;     // empty: built-in action lexicon
    std::filesystem::path lexicons;    // empty: built-in word lists
    std::filesystem::path frames_csv;  // set: segment stage produces clips
    std::string frames_game_id;
    std::filesystem::path candidates;  // set: evaluate these, skip generate
    std::filesystem::path references;  // set: add reference-based scores
    std::filesystem::path durations;   // set: measured AD durations
  } inputs;

  std::filesystem::path out_dir = "out";

  prompt::Variant variant = prompt::Variant::kP3;
  prompt::ContextProfile profile = prompt::ContextProfile::kPlayersActions;
  std::filesystem::path template_file;  // empty: built-in template body

  ScoringConfig scoring;
  SpeechRateModel speech;
  scene::SegmentationConfig segmentation;
  infer::EndpointConfig endpoint;

  int gen_max_tokens = 128;
  double gen_temperature = 0.0;
  int gen_frames = 4;
  std::string video_uri_prefix;  // video_uri = prefix + clip_id when set
};

// File format <-> config. The auth token is environment-only and never
// serialized.
PipelineConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const PipelineConfig& config);
void apply_environment(PipelineConfig& config);

struct ResolvedClip {
  Clip clip;
  ClipContext context;
};

// Intermediate artifacts.
std::vector<ResolvedClip> read_resolved(const std::filesystem::path& path);
std::map<std::string, std::string> read_prompts(const std::filesystem::path& path);
std::vector<Candidate> read_candidates(const std::filesystem::path& path);
std::map<std::string, double> read_durations(const std::filesystem::path& path);
text::Lexicons load_lexicons_file(const std::filesystem::path& path);

// Stage functions. Writers return what they wrote.
std::vector<Clip> stage_segment(const PipelineConfig& config);
Store stage_ingest(const PipelineConfig& config);
std::vector<ResolvedClip> stage_context(const PipelineConfig& config,
                                        const Store& store);
std::map<std::string, std::string> stage_prompt(
    const PipelineConfig& config, const std::vector<ResolvedClip>& resolved);
std::vector<Candidate> stage_generate(
    const PipelineConfig& config, const std::vector<ResolvedClip>& resolved,
    const std::map<std::string, std::string>& prompts);
CorpusReport stage_evaluate(const PipelineConfig& config, const Store& store,
                            const std::vector<Candidate>& candidates);

// Report serialization and file emission (report.json, report.csv,
// component_means.csv, reference_scores.csv when references exist).
nlohmann::json report_to_json(const CorpusReport& report);
CorpusReport report_from_json(const nlohmann::json& doc);
void emit_report(const CorpusReport& report, const nlohmann::json& report_doc,
                 const std::filesystem::path& out_dir);

struct RunResult {
  CorpusReport report;
  std::filesystem::path report_json;
  std::filesystem::path candidates_file;
  std::filesystem::path manifest_file;
  std::size_t generation_failures = 0;
};

// End-to-end run. Aborts with the failing stage named; per-clip generation
// failures are recorded and evaluation proceeds over the successes.
RunResult run_pipeline(const PipelineConfig& config);

struct Correlation {
  double pearson = 0.0;
  double kendall = 0.0;
  std::size_t n = 0;
};

// Joins two score CSVs on clip_id and correlates the named columns.
Correlation correlate_csv(const std::filesystem::path& a_path,
                          const std::string& a_column,
                          const std::filesystem::path& b_path,
                          const std::string& b_column);

}  // namespace adeval::pipe

#endif  // ADEVAL_PIPELINE_HPP_
