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
// adeval command line. Subcommands mirror the pipeline stages plus the
// end-to-end `run`, a score correlator and a mock generation endpoint.
// Settings resolve in order: built-in defaults, then the --config file,
// then ADEVAL_* environment variables, then explicit flags.

#include <csignal>
#include <chrono>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "adeval/error.hpp"
#include "adeval/io_util.hpp"
#include "adeval/mock_server.hpp"
#include "adeval/pipeline.hpp"
#include "adeval/version.hpp"

namespace {

using adeval::DataError;
using adeval::EndpointError;
using adeval::UsageError;
using adeval::pipe::PipelineConfig;
using nlohmann::json;

volatile std::sig_atomic_t g_interrupted = 0;
void on_signal(int) { g_interrupted = 1; }

// Flag values land here only when the user passed them, so they can
// override the config file selectively.
struct Overrides {
  std::optional<std::string> config_file;
  std::optional<std::string> out_dir;

  std::optional<std::string> games, rosters, clips, contexts;
  std::optional<std::string> action_lexicon, word_lists;
  std::optional<std::string> frames_csv, game_id;
  std::optional<std::string> candidates, references, durations;

  std::optional<std::string> variant, profile, template_file;

  int strict_actions = 0, all_nouns = 0, graded = 0, full_name_only = 0,
      unknown_clip_fatal = 0;
  std::optional<double> wpm, pause_s;

  std::optional<double> threshold, min_scene, max_scene;

  std::optional<std::string> endpoint_url;
  std::optional<double> timeout_s, temperature;
  std::optional<int> max_attempts, backoff_ms, concurrency, max_tokens,
      gen_frames;
};

PipelineConfig build_config(const Overrides& o) {
  PipelineConfig cfg;
  if (o.config_file) cfg = adeval::pipe::load_config(*o.config_file);
  adeval::pipe::apply_environment(cfg);

  auto set_path = [](const std::optional<std::string>& v,
                     std::filesystem::path* dst) {
    if (v) *dst = *v;
  };
  set_path(o.out_dir, &cfg.out_dir);
  set_path(o.games, &cfg.inputs.games);
  set_path(o.rosters, &cfg.inputs.rosters);
  set_path(o.clips, &cfg.inputs.clips);
  set_path(o.contexts, &cfg.inputs.context);
  set_path(o.action_lexicon, &cfg.inputs.lexicon);
  set_path(o.word_lists, &cfg.inputs.lexicons);
  set_path(o.frames_csv, &cfg.inputs.frames_csv);
  set_path(o.candidates, &cfg.inputs.candidates);
  set_path(o.references, &cfg.inputs.references);
  set_path(o.durations, &cfg.inputs.durations);
  set_path(o.template_file, &cfg.template_file);
  if (o.game_id) cfg.inputs.frames_game_id = *o.game_id;

  if (o.variant) {
    const auto v = adeval::prompt::parse_variant(*o.variant);
    if (!v) throw UsageError("unknown prompt variant '" + *o.variant + "'");
    cfg.variant = *v;
  }
  if (o.profile) {
    const auto p = adeval::prompt::parse_profile(*o.profile);
    if (!p) throw UsageError("unknown context profile '" + *o.profile + "'");
    cfg.profile = *p;
  }

  if (o.strict_actions > 0) {
    cfg.scoring.action_mode = adeval::text::ActionMatchMode::kStrict;
  }
  if (o.all_nouns > 0) cfg.scoring.all_nouns = true;
  if (o.graded > 0) cfg.scoring.graded = true;
  if (o.full_name_only > 0) cfg.scoring.full_name_only = true;
  if (o.unknown_clip_fatal > 0) cfg.scoring.unknown_clip_fatal = true;
  if (o.wpm) cfg.speech.words_per_minute = *o.wpm;
  if (o.pause_s) cfg.speech.pause_per_sentence_s = *o.pause_s;

  if (o.threshold) cfg.segmentation.threshold = *o.threshold;
  if (o.min_scene) cfg.segmentation.min_scene_s = *o.min_scene;
  if (o.max_scene) cfg.segmentation.max_scene_s = *o.max_scene;

  if (o.endpoint_url) cfg.endpoint.base_url = *o.endpoint_url;
  if (o.timeout_s) cfg.endpoint.timeout_s = *o.timeout_s;
  if (o.max_attempts) cfg.endpoint.max_attempts = *o.max_attempts;
  if (o.backoff_ms) cfg.endpoint.backoff_ms = *o.backoff_ms;
  if (o.concurrency) cfg.endpoint.concurrency = *o.concurrency;
  if (o.max_tokens) cfg.gen_max_tokens = *o.max_tokens;
  if (o.temperature) cfg.gen_temperature = *o.temperature;
  if (o.gen_frames) cfg.gen_frames = *o.gen_frames;

  return cfg;
}

void add_config_out(CLI::App* sub, Overrides* o) {
  sub->add_option("--config", o->config_file, "JSON config file");
  sub->add_option("--out", o->out_dir, "Output directory (default: out)");
}

void add_ingest_inputs(CLI::App* sub, Overrides* o) {
  sub->add_option("--games", o->games, "games.json input");
  sub->add_option("--rosters", o->rosters, "rosters.json input");
  sub->add_option("--clips", o->clips, "clips.jsonl input");
  sub->add_option("--contexts", o->contexts, "context.jsonl input");
  sub->add_option("--action-lexicon", o->action_lexicon,
                  "action lexicon JSON (default: built-in)");
  sub->add_option("--word-lists", o->word_lists,
                  "pronoun/stopword lists JSON (default: built-in)");
}

void add_segment_flags(CLI::App* sub, Overrides* o) {
  sub->add_option("--frames-csv", o->frames_csv,
                  "per-frame HSV feature CSV; enables the segment stage");
  sub->add_option("--game-id", o->game_id, "game id for segmented clips");
  sub->add_option("--threshold", o->threshold, "scene cut threshold");
  sub->add_option("--min-scene", o->min_scene, "minimum scene length, seconds");
  sub->add_option("--max-scene", o->max_scene, "maximum clip length, seconds");
}

void add_prompt_flags(CLI::App* sub, Overrides* o) {
  sub->add_option("--prompt", o->variant,
                  "prompt variant: 1|2|3 (default: 3)");
  sub->add_option("--context", o->profile,
                  "context profile: none|pa|pa+c|pa+c+prev (default: pa)");
  sub->add_option("--template", o->template_file, "custom prompt body file");
}

void add_scoring_flags(CLI::App* sub, Overrides* o) {
  sub->add_flag("--strict-actions", o->strict_actions,
                "matched verbs must name a detected action when any exist");
  sub->add_flag("--all-nouns", o->all_nouns,
                "every noun token must be a roster token");
  sub->add_flag("--graded", o->graded,
                "fractional player/action components instead of binary");
  sub->add_flag("--strict-full-name", o->full_name_only,
                "full name sequences only; surnames alone do not match");
  sub->add_flag("--unknown-clip-fatal", o->unknown_clip_fatal,
                "abort on candidates for unknown clips instead of skipping");
  sub->add_option("--wpm", o->wpm, "speech rate, words per minute");
  sub->add_option("--pause", o->pause_s, "per-sentence pause, seconds");
}

void add_endpoint_flags(CLI::App* sub, Overrides* o) {
  sub->add_option("--endpoint-url", o->endpoint_url,
                  "generation endpoint base URL (env: ADEVAL_ENDPOINT_URL)");
  sub->add_option("--timeout", o->timeout_s, "request timeout, seconds");
  sub->add_option("--max-attempts", o->max_attempts, "tries per request");
  sub->add_option("--backoff-ms", o->backoff_ms, "initial retry backoff");
  sub->add_option("--concurrency", o->concurrency, "parallel requests");
  sub->add_option("--max-tokens", o->max_tokens, "generation token budget");
  sub->add_option("--temperature", o->temperature, "sampling temperature");
  sub->add_option("--gen-frames", o->gen_frames,
                  "frames sampled per clip by the endpoint");
}

void add_eval_inputs(CLI::App* sub, Overrides* o) {
  sub->add_option("--candidates", o->candidates,
                  "candidate ADs to score (default: <out>/candidates.jsonl)");
  sub->add_option("--references", o->references,
                  "reference ADs; adds ROUGE-L/CIDEr/IoU outputs");
  sub->add_option("--durations", o->durations,
                  "measured AD durations overriding the speech-rate model");
}

std::vector<adeval::pipe::ResolvedClip> load_resolved_or_hint(
    const PipelineConfig& cfg) {
  const auto path = cfg.out_dir / "context_resolved.jsonl";
  if (!std::filesystem::exists(path)) {
    throw DataError(path.string() +
                    " not found; run the context stage first");
  }
  return adeval::pipe::read_resolved(path);
}

int finish_report(const adeval::CorpusReport& report) {
  json summary;
  summary["clip_count"] = report.clip_count;
  if (report.clip_count == 0) {
    std::cerr << "no clips evaluated\n";
    summary["corpus_score"] = nullptr;
    std::cout << summary.dump() << "\n";
    return adeval::kExitData;
  }
  summary["corpus_score"] = report.corpus_score;
  summary["skipped"] = report.skipped.size();
  std::cout << summary.dump() << "\n";
  return adeval::kExitOk;
}

int run_mock_serve(int port, const std::string& fixtures_path) {
  adeval::infer::MockServer::Options options;
  if (!fixtures_path.empty()) {
    for (const auto& c : adeval::pipe::read_candidates(fixtures_path)) {
      options.fixtures[c.clip_id] = c.ad_text;
    }
  }
  adeval::infer::MockServer server(options);
  const int bound = server.start(port);
  std::cout << "mock endpoint listening at http://127.0.0.1:" << bound
            << " (" << (fixtures_path.empty() ? "echo" : "fixture")
            << " mode)\n"
            << std::flush;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  while (g_interrupted == 0) {
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  }
  server.stop();
  return adeval::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reference-free audio description evaluation for soccer video"};
  app.set_version_flag("--version", adeval::kVersion);
  app.require_subcommand(1);

  Overrides o;

  CLI::App* ingest = app.add_subcommand(
      "ingest", "Load and validate games, rosters, clips and context");
  add_config_out(ingest, &o);
  add_ingest_inputs(ingest, &o);
  add_segment_flags(ingest, &o);

  CLI::App* segment = app.add_subcommand(
      "segment", "Detect scene cuts in frame features and emit clips");
  add_config_out(segment, &o);
  add_segment_flags(segment, &o);

  CLI::App* context = app.add_subcommand(
      "context", "Join clips with their context into one resolved file");
  add_config_out(context, &o);
  add_ingest_inputs(context, &o);
  add_segment_flags(context, &o);

  CLI::App* prompt = app.add_subcommand(
      "prompt", "Build per-clip prompts from resolved context");
  add_config_out(prompt, &o);
  add_prompt_flags(prompt, &o);

  CLI::App* generate = app.add_subcommand(
      "generate", "Request ADs from the endpoint for built prompts");
  add_config_out(generate, &o);
  add_prompt_flags(generate, &o);
  add_endpoint_flags(generate, &o);

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "Score candidate ADs and write the report files");
  add_config_out(evaluate, &o);
  add_ingest_inputs(evaluate, &o);
  add_segment_flags(evaluate, &o);
  add_eval_inputs(evaluate, &o);
  add_scoring_flags(evaluate, &o);

  CLI::App* report_cmd = app.add_subcommand(
      "report", "Rebuild the CSV views from an existing report.json");
  add_config_out(report_cmd, &o);
  std::string report_path;
  report_cmd->add_option("--report", report_path,
                         "report.json to re-emit (default: <out>/report.json)");

  CLI::App* corr = app.add_subcommand(
      "corr", "Correlate two per-clip score CSVs joined on clip_id");
  std::string corr_a, corr_b, corr_column = "score";
  std::string corr_column_a, corr_column_b;
  corr->add_option("csv_a", corr_a, "first CSV")->required();
  corr->add_option("csv_b", corr_b, "second CSV")->required();
  corr->add_option("--column", corr_column, "column to read in both files");
  corr->add_option("--column-a", corr_column_a, "column in the first file");
  corr->add_option("--column-b", corr_column_b, "column in the second file");

  CLI::App* mock = app.add_subcommand(
      "mock-serve", "Serve a mock generation endpoint until interrupted");
  int mock_port = 8089;
  std::string mock_fixtures;
  mock->add_option("--port", mock_port, "port to bind (default: 8089)");
  mock->add_option("--fixtures", mock_fixtures,
                   "candidate-format JSONL of canned ADs; omit for echo mode");

  CLI::App* run = app.add_subcommand(
      "run", "Full pipeline: segment, ingest, prompt, generate, evaluate");
  add_config_out(run, &o);
  add_ingest_inputs(run, &o);
  add_segment_flags(run, &o);
  add_prompt_flags(run, &o);
  add_endpoint_flags(run, &o);
  add_eval_inputs(run, &o);
  add_scoring_flags(run, &o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? adeval::kExitOk : adeval::kExitUsage;
  }

  try {
    if (*ingest) {
      const PipelineConfig cfg = build_config(o);
      std::filesystem::create_directories(cfg.out_dir);
      if (!cfg.inputs.frames_csv.empty()) adeval::pipe::stage_segment(cfg);
      const adeval::Store store = adeval::pipe::stage_ingest(cfg);
      const adeval::StoreCounts c = store.counts();
      json out{{"games", c.games},
               {"players", c.players},
               {"clips", c.clips},
               {"contexts", c.contexts},
               {"action_labels", c.labels}};
      std::cout << out.dump() << "\n";
      return adeval::kExitOk;
    }

    if (*segment) {
      const PipelineConfig cfg = build_config(o);
      std::filesystem::create_directories(cfg.out_dir);
      const auto clips = adeval::pipe::stage_segment(cfg);
      std::cout << json{{"clips", clips.size()}}.dump() << "\n";
      return adeval::kExitOk;
    }

    if (*context) {
      const PipelineConfig cfg = build_config(o);
      std::filesystem::create_directories(cfg.out_dir);
      if (!cfg.inputs.frames_csv.empty()) adeval::pipe::stage_segment(cfg);
      const adeval::Store store = adeval::pipe::stage_ingest(cfg);
      const auto resolved = adeval::pipe::stage_context(cfg, store);
      std::cout << json{{"resolved", resolved.size()}}.dump() << "\n";
      return adeval::kExitOk;
    }

    if (*prompt) {
      const PipelineConfig cfg = build_config(o);
      const auto resolved = load_resolved_or_hint(cfg);
      const auto prompts = adeval::pipe::stage_prompt(cfg, resolved);
      std::cout << json{{"prompts", prompts.size()}}.dump() << "\n";
      return adeval::kExitOk;
    }

    if (*generate) {
      const PipelineConfig cfg = build_config(o);
      const auto resolved = load_resolved_or_hint(cfg);
      const auto prompts_path = cfg.out_dir / "prompts.jsonl";
      if (!std::filesystem::exists(prompts_path)) {
        throw DataError(prompts_path.string() +
                        " not found; run the prompt stage first");
      }
      const auto prompts = adeval::pipe::read_prompts(prompts_path);
      const auto candidates =
          adeval::pipe::stage_generate(cfg, resolved, prompts);
      std::cout << json{{"succeeded", candidates.size()},
                        {"failed", resolved.size() - candidates.size()}}
                       .dump()
                << "\n";
      return adeval::kExitOk;
    }

    if (*evaluate) {
      PipelineConfig cfg = build_config(o);
      std::filesystem::create_directories(cfg.out_dir);
      if (cfg.inputs.candidates.empty()) {
        cfg.inputs.candidates = cfg.out_dir / "candidates.jsonl";
      }
      if (!cfg.inputs.frames_csv.empty()) adeval::pipe::stage_segment(cfg);
      const adeval::Store store = adeval::pipe::stage_ingest(cfg);
      const auto candidates =
          adeval::pipe::read_candidates(cfg.inputs.candidates);
      const auto report = adeval::pipe::stage_evaluate(cfg, store, candidates);
      return finish_report(report);
    }

    if (*report_cmd) {
      const PipelineConfig cfg = build_config(o);
      const std::filesystem::path path =
          report_path.empty() ? cfg.out_dir / "report.json"
                              : std::filesystem::path(report_path);
      const json doc = adeval::io::parse_json_file(path);
      const adeval::CorpusReport rep = adeval::pipe::report_from_json(doc);
      adeval::pipe::emit_report(rep, doc, cfg.out_dir);
      return adeval::kExitOk;
    }

    if (*corr) {
      const std::string col_a =
          corr_column_a.empty() ? corr_column : corr_column_a;
      const std::string col_b =
          corr_column_b.empty() ? corr_column : corr_column_b;
      const auto c = adeval::pipe::correlate_csv(corr_a, col_a, corr_b, col_b);
      json out{{"pearson", c.pearson}, {"kendall_tau", c.kendall}, {"n", c.n}};
      std::cout << out.dump() << "\n";
      return adeval::kExitOk;
    }

    if (*mock) {
      return run_mock_serve(mock_port, mock_fixtures);
    }

    if (*run) {
      const PipelineConfig cfg = build_config(o);
      const auto result = adeval::pipe::run_pipeline(cfg);
      if (result.generation_failures > 0) {
        std::cerr << result.generation_failures
                  << " generation request(s) failed; see failures.jsonl\n";
      }
      return finish_report(result.report);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return adeval::kExitUsage;
  } catch (const EndpointError& e) {
    std::cerr << "endpoint error: " << e.what() << "\n";
    return adeval::kExitEndpoint;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return adeval::kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return adeval::kExitUsage;
  }

  return adeval::kExitOk;
}
