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

#include "adeval/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <set>
#include <sstream>
#include <utility>

#include "adeval/error.hpp"
#include "adeval/io_util.hpp"
#include "adeval/reference_metrics.hpp"
#include "adeval/unicode.hpp"
#include "adeval/version.hpp"

namespace adeval::pipe {
namespace {

namespace fs = std::filesystem;
using io::json;

// Shortest unambiguous decimal; scores and means never need more digits.
std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string utc_now_iso() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed) {
      if (item.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw UsageError("config: unknown key '" + item.key() + "' in " + where);
    }
  }
}

std::string get_string(const json& obj, const char* key, std::string fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string()) {
    throw UsageError(std::string("config: '") + key + "' must be a string");
  }
  return obj[key].get<std::string>();
}

double get_double(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) {
    throw UsageError(std::string("config: '") + key + "' must be a number");
  }
  return obj[key].get<double>();
}

int get_int(const json& obj, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) {
    throw UsageError(std::string("config: '") + key + "' must be an integer");
  }
  return obj[key].get<int>();
}

bool get_bool(const json& obj, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_boolean()) {
    throw UsageError(std::string("config: '") + key + "' must be a boolean");
  }
  return obj[key].get<bool>();
}

json context_to_json(const ClipContext& ctx) {
  json actions = json::array();
  for (const auto& a : ctx.actions) {
    actions.push_back({{"label", a.label}, {"t_s", a.t_s}});
  }
  json doc{{"clip_id", ctx.clip_id},
           {"commentary", ctx.commentary},
           {"players", ctx.players},
           {"actions", std::move(actions)}};
  if (ctx.previous_ad) doc["previous_ad"] = *ctx.previous_ad;
  return doc;
}

void write_jsonl(const fs::path& path, const std::vector<json>& rows) {
  std::string out;
  for (const auto& row : rows) {
    out += row.dump();
    out += '\n';
  }
  io::write_file(path, out);
}

// Shared by stage_generate and run_pipeline, which also needs the failure
// tally for the manifest.
struct GenerateResult {
  std::vector<Candidate> candidates;
  std::vector<infer::GenerationOutcome> failures;
};

GenerateResult generate_core(const PipelineConfig& config,
                             const std::vector<ResolvedClip>& resolved,
                             const std::map<std::string, std::string>& prompts) {
  const prompt::ContextFlags flags =
      prompt::context_flags_from_profile(config.profile);

  std::vector<infer::GenerationRequest> requests;
  requests.reserve(resolved.size());
  for (const auto& rc : resolved) {
    auto it = prompts.find(rc.clip.clip_id);
    if (it == prompts.end()) {
      throw DataError("generate: no prompt for clip '" + rc.clip.clip_id + "'");
    }
    infer::GenerationRequest r;
    r.clip_id = rc.clip.clip_id;
    if (!config.video_uri_prefix.empty()) {
      r.video_uri = config.video_uri_prefix + rc.clip.clip_id;
    }
    r.prompt = it->second;
    // The wire context mirrors the profile: the endpoint sees exactly the
    // cues the prompt was entitled to.
    r.context.clip_id = rc.clip.clip_id;
    if (flags.players_actions) {
      r.context.players = rc.context.players;
      r.context.actions = rc.context.actions;
    }
    if (flags.commentary) r.context.commentary = rc.context.commentary;
    if (flags.previous_ad) r.context.previous_ad = rc.context.previous_ad;
    r.max_tokens = config.gen_max_tokens;
    r.temperature = config.gen_temperature;
    r.frames = config.gen_frames;
    requests.push_back(std::move(r));
  }

  const auto outcomes = infer::generate_batch(requests, config.endpoint);

  GenerateResult result;
  bool any_reached = requests.empty();
  for (const auto& o : outcomes) {
    if (o.ok) {
      any_reached = true;
      result.candidates.push_back(
          {o.clip_id, o.response.ad_text,
           o.response.model_id.empty() ? "model" : o.response.model_id});
    } else {
      // Any HTTP-level verdict proves the endpoint was reachable.
      if (o.error != infer::RequestError::kTransport &&
          o.error != infer::RequestError::kTimeout) {
        any_reached = true;
      }
      result.failures.push_back(o);
    }
  }
  if (!any_reached) {
    throw EndpointError("generate stage: endpoint unreachable at " +
                        config.endpoint.base_url + ": " +
                        outcomes.front().message);
  }
  return result;
}

void write_generate_outputs(const PipelineConfig& config,
                            const GenerateResult& result) {
  std::vector<json> cand_rows;
  for (const auto& c : result.candidates) {
    cand_rows.push_back({{"clip_id", c.clip_id},
                         {"ad_text", c.ad_text},
                         {"source", c.source}});
  }
  write_jsonl(config.out_dir / "candidates.jsonl", cand_rows);

  std::vector<json> fail_rows;
  for (const auto& f : result.failures) {
    fail_rows.push_back({{"clip_id", f.clip_id},
                         {"error", infer::request_error_name(f.error)},
                         {"message", f.message},
                         {"attempts", f.attempts}});
  }
  write_jsonl(config.out_dir / "failures.jsonl", fail_rows);
}

// Raw reference texts per clip, as given.
std::map<std::string, std::vector<std::string>> read_references(
    const fs::path& path) {
  std::map<std::string, std::vector<std::string>> refs;
  io::for_each_jsonl(path, [&](std::size_t line, const json& rec) {
    const std::string where =
        path.string() + ":" + std::to_string(line);
    const std::string clip_id = io::require_string(rec, "clip_id", where);
    if (!rec.contains("references") || !rec["references"].is_array() ||
        rec["references"].empty()) {
      throw DataError(where + ": missing non-empty array field 'references'");
    }
    auto& list = refs[clip_id];
    if (!list.empty()) throw DataError(where + ": duplicate clip_id");
    for (const auto& r : rec["references"]) {
      if (!r.is_string()) {
        throw DataError(where + ": 'references' entries must be strings");
      }
      list.push_back(r.get<std::string>());
    }
  });
  return refs;
}

// ROUGE-L against multiple references takes the best-F reference; CIDEr
// consensus uses all of them. IoU likewise keeps the best overlap.
struct RefRow {
  double rouge = 0.0;
  double cider = 0.0;
  double iou = 0.0;
};

json reference_section(
    const CorpusReport& report,
    const std::map<std::string, std::vector<std::string>>& refs,
    const std::map<std::string, std::string>& ad_texts,
    const text::Lexicons& lexicons, std::map<std::string, RefRow>* rows) {
  const auto ad_text_of = [&](const std::string& clip_id) -> std::string {
    auto it = ad_texts.find(clip_id);
    return it == ad_texts.end() ? std::string{} : it->second;
  };

  metrics::ReferenceCorpus corpus;
  for (const auto& [clip_id, texts] : refs) {
    auto& seqs = corpus[clip_id];
    for (const auto& t : texts) seqs.push_back(metrics::word_norms(t));
  }

  std::map<std::string, std::vector<std::string>> cider_cands;
  metrics::ReferenceCorpus cider_refs;
  for (const auto& clip : report.clips) {
    auto it = corpus.find(clip.clip_id);
    if (it == corpus.end()) continue;
    cider_cands[clip.clip_id] = metrics::word_norms(ad_text_of(clip.clip_id));
    cider_refs[clip.clip_id] = it->second;
  }

  double rouge_sum = 0.0, iou_sum = 0.0;
  std::size_t n = 0;
  for (const auto& clip : report.clips) {
    auto it = corpus.find(clip.clip_id);
    auto raw = refs.find(clip.clip_id);
    if (it == corpus.end()) continue;
    const std::string ad = ad_text_of(clip.clip_id);
    const auto cand_tokens = metrics::word_norms(ad);
    RefRow row;
    for (const auto& ref_tokens : it->second) {
      row.rouge = std::max(row.rouge, metrics::rouge_l(cand_tokens, ref_tokens).f);
    }
    for (const auto& ref_text : raw->second) {
      row.iou = std::max(row.iou, metrics::token_set_iou(ad, ref_text, lexicons));
    }
    rouge_sum += row.rouge;
    iou_sum += row.iou;
    (*rows)[clip.clip_id] = row;
    ++n;
  }

  json section;
  if (n == 0) {
    section["note"] = "no evaluated clip has references";
    return section;
  }

  const auto cider_result = metrics::cider(cider_cands, cider_refs, corpus);
  double cider_sum = 0.0;
  for (auto& [clip_id, row] : *rows) {
    auto it = cider_result.per_clip.find(clip_id);
    row.cider = it == cider_result.per_clip.end() ? 0.0 : it->second;
    cider_sum += row.cider;
  }

  section["clips_with_references"] = n;
  section["rouge_l_mean"] = rouge_sum / static_cast<double>(n);
  section["cider_mean"] = cider_sum / static_cast<double>(n);
  section["token_iou_mean"] = iou_sum / static_cast<double>(n);
  return section;
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const fs::path& path) {
  const std::string content = io::read_file(path);
  CsvTable table;
  std::istringstream in(content);
  std::string line;
  bool first = true;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (first) {
      table.header = std::move(fields);
      first = false;
    } else {
      if (fields.size() != table.header.size()) {
        throw DataError(path.string() + ":" + std::to_string(lineno) +
                        ": expected " + std::to_string(table.header.size()) +
                        " fields");
      }
      table.rows.push_back(std::move(fields));
    }
  }
  if (table.header.empty()) {
    throw DataError(path.string() + ": empty CSV");
  }
  return table;
}

std::size_t column_index(const CsvTable& table, const std::string& name,
                         const fs::path& path) {
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (table.header[i] == name) return i;
  }
  throw UsageError(path.string() + ": no column '" + name + "'");
}

std::map<std::string, double> csv_column_by_clip(const fs::path& path,
                                                 const std::string& column) {
  const CsvTable table = read_csv(path);
  const std::size_t id_col = column_index(table, "clip_id", path);
  const std::size_t val_col = column_index(table, column, path);
  std::map<std::string, double> values;
  for (const auto& row : table.rows) {
    char* end = nullptr;
    const double v = std::strtod(row[val_col].c_str(), &end);
    if (end == row[val_col].c_str() || *end != '\0') {
      throw DataError(path.string() + ": non-numeric value '" + row[val_col] +
                      "' in column '" + column + "'");
    }
    values[row[id_col]] = v;  // a repeated clip_id keeps the last row
  }
  return values;
}

}  // namespace

PipelineConfig load_config(const fs::path& path) {
  PipelineConfig config;
  const json doc = io::parse_json_file(path);
  if (!doc.is_object()) throw UsageError("config: expected a JSON object");
  check_keys(doc,
             {"inputs", "out_dir", "prompt", "generation", "scoring", "speech",
              "segmentation", "endpoint"},
             "the top level");

  if (doc.contains("inputs")) {
    const json& in = doc["inputs"];
    check_keys(in,
               {"games", "rosters", "clips", "context", "lexicon", "lexicons",
                "frames_csv", "frames_game_id", "candidates", "references",
                "durations"},
               "'inputs'");
    config.inputs.games = get_string(in, "games", "");
    config.inputs.rosters = get_string(in, "rosters", "");
    config.inputs.clips = get_string(in, "clips", "");
    config.inputs.context = get_string(in, "context", "");
    config.inputs.lexicon = get_string(in, "lexicon", "");
    config.inputs.lexicons = get_string(in, "lexicons", "");
    config.inputs.frames_csv = get_string(in, "frames_csv", "");
    config.inputs.frames_game_id = get_string(in, "frames_game_id", "");
    config.inputs.candidates = get_string(in, "candidates", "");
    config.inputs.references = get_string(in, "references", "");
    config.inputs.durations = get_string(in, "durations", "");
  }

  config.out_dir = get_string(doc, "out_dir", config.out_dir.string());

  if (doc.contains("prompt")) {
    const json& p = doc["prompt"];
    check_keys(p, {"variant", "profile", "template_file"}, "'prompt'");
    const std::string variant = get_string(p, "variant", "P3");
    const auto v = prompt::parse_variant(variant);
    if (!v) throw UsageError("config: unknown prompt variant '" + variant + "'");
    config.variant = *v;
    const std::string profile = get_string(p, "profile", "pa");
    const auto pr = prompt::parse_profile(profile);
    if (!pr) {
      throw UsageError("config: unknown context profile '" + profile + "'");
    }
    config.profile = *pr;
    config.template_file = get_string(p, "template_file", "");
  }

  if (doc.contains("generation")) {
    const json& g = doc["generation"];
    check_keys(g, {"max_tokens", "temperature", "frames", "video_uri_prefix"},
               "'generation'");
    config.gen_max_tokens = get_int(g, "max_tokens", config.gen_max_tokens);
    config.gen_temperature =
        get_double(g, "temperature", config.gen_temperature);
    config.gen_frames = get_int(g, "frames", config.gen_frames);
    config.video_uri_prefix = get_string(g, "video_uri_prefix", "");
  }

  if (doc.contains("scoring")) {
    const json& s = doc["scoring"];
    check_keys(s,
               {"strict_actions", "all_nouns", "full_name_only", "graded",
                "unknown_clip_fatal", "weights"},
               "'scoring'");
    config.scoring.action_mode = get_bool(s, "strict_actions", false)
                                     ? text::ActionMatchMode::kStrict
                                     : text::ActionMatchMode::kLenient;
    config.scoring.all_nouns = get_bool(s, "all_nouns", false);
    config.scoring.full_name_only = get_bool(s, "full_name_only", false);
    config.scoring.graded = get_bool(s, "graded", false);
    config.scoring.unknown_clip_fatal = get_bool(s, "unknown_clip_fatal", false);
    if (s.contains("weights")) {
      if (!s["weights"].is_array() || s["weights"].size() != 5) {
        throw UsageError("config: 'weights' must be an array of 5 numbers");
      }
      for (std::size_t i = 0; i < 5; ++i) {
        if (!s["weights"][i].is_number()) {
          throw UsageError("config: 'weights' must be an array of 5 numbers");
        }
        config.scoring.weights[i] = s["weights"][i].get<double>();
      }
    }
  }

  if (doc.contains("speech")) {
    const json& s = doc["speech"];
    check_keys(s, {"words_per_minute", "pause_per_sentence_s"}, "'speech'");
    config.speech.words_per_minute =
        get_double(s, "words_per_minute", config.speech.words_per_minute);
    config.speech.pause_per_sentence_s = get_double(
        s, "pause_per_sentence_s", config.speech.pause_per_sentence_s);
  }

  if (doc.contains("segmentation")) {
    const json& s = doc["segmentation"];
    check_keys(s, {"threshold", "min_scene_s", "max_scene_s"}, "'segmentation'");
    config.segmentation.threshold =
        get_double(s, "threshold", config.segmentation.threshold);
    config.segmentation.min_scene_s =
        get_double(s, "min_scene_s", config.segmentation.min_scene_s);
    config.segmentation.max_scene_s =
        get_double(s, "max_scene_s", config.segmentation.max_scene_s);
  }

  if (doc.contains("endpoint")) {
    const json& e = doc["endpoint"];
    check_keys(e,
               {"url", "timeout_s", "max_attempts", "backoff_ms", "concurrency"},
               "'endpoint'");
    config.endpoint.base_url = get_string(e, "url", config.endpoint.base_url);
    config.endpoint.timeout_s =
        get_double(e, "timeout_s", config.endpoint.timeout_s);
    config.endpoint.max_attempts =
        get_int(e, "max_attempts", config.endpoint.max_attempts);
    config.endpoint.backoff_ms =
        get_int(e, "backoff_ms", config.endpoint.backoff_ms);
    config.endpoint.concurrency =
        get_int(e, "concurrency", config.endpoint.concurrency);
  }

  return config;
}

nlohmann::json config_to_json(const PipelineConfig& config) {
  // The auth token is deliberately absent: it must never land in a manifest.
  json doc;
  doc["inputs"] = {{"games", config.inputs.games.string()},
                   {"rosters", config.inputs.rosters.string()},
                   {"clips", config.inputs.clips.string()},
                   {"context", config.inputs.context.string()},
                   {"lexicon", config.inputs.lexicon.string()},
                   {"lexicons", config.inputs.lexicons.string()},
                   {"frames_csv", config.inputs.frames_csv.string()},
                   {"frames_game_id", config.inputs.frames_game_id},
                   {"candidates", config.inputs.candidates.string()},
                   {"references", config.inputs.references.string()},
                   {"durations", config.inputs.durations.string()}};
  doc["out_dir"] = config.out_dir.string();
  doc["prompt"] = {{"variant", prompt::variant_name(config.variant)},
                   {"profile", prompt::profile_name(config.profile)},
                   {"template_file", config.template_file.string()}};
  doc["generation"] = {{"max_tokens", config.gen_max_tokens},
                       {"temperature", config.gen_temperature},
                       {"frames", config.gen_frames},
                       {"video_uri_prefix", config.video_uri_prefix}};
  doc["scoring"] = {
      {"strict_actions",
       config.scoring.action_mode == text::ActionMatchMode::kStrict},
      {"all_nouns", config.scoring.all_nouns},
      {"full_name_only", config.scoring.full_name_only},
      {"graded", config.scoring.graded},
      {"unknown_clip_fatal", config.scoring.unknown_clip_fatal},
      {"weights", config.scoring.weights}};
  doc["speech"] = {{"words_per_minute", config.speech.words_per_minute},
                   {"pause_per_sentence_s", config.speech.pause_per_sentence_s}};
  doc["segmentation"] = {{"threshold", config.segmentation.threshold},
                         {"min_scene_s", config.segmentation.min_scene_s},
                         {"max_scene_s", config.segmentation.max_scene_s}};
  doc["endpoint"] = {{"url", config.endpoint.base_url},
                     {"timeout_s", config.endpoint.timeout_s},
                     {"max_attempts", config.endpoint.max_attempts},
                     {"backoff_ms", config.endpoint.backoff_ms},
                     {"concurrency", config.endpoint.concurrency}};
  return doc;
}

void apply_environment(PipelineConfig& config) {
  if (const char* url = std::getenv("ADEVAL_ENDPOINT_URL")) {
    if (*url != '\0') config.endpoint.base_url = url;
  }
  if (const char* token = std::getenv("ADEVAL_AUTH_TOKEN")) {
    if (*token != '\0') config.endpoint.auth_token = token;
  }
}

std::vector<ResolvedClip> read_resolved(const fs::path& path) {
  std::vector<ResolvedClip> out;
  io::for_each_jsonl(path, [&](std::size_t line, const json& rec) {
    const std::string where = path.string() + ":" + std::to_string(line);
    ResolvedClip rc;
    rc.clip.clip_id = io::require_string(rec, "clip_id", where);
    rc.clip.game_id = io::require_string(rec, "game_id", where);
    rc.clip.start_s = io::require_number(rec, "start_s", where);
    rc.clip.end_s = io::require_number(rec, "end_s", where);
    rc.context.clip_id = rc.clip.clip_id;
    if (rec.contains("commentary")) {
      rc.context.commentary = io::require_string(rec, "commentary", where);
    }
    if (rec.contains("players")) {
      for (const auto& p : rec["players"]) {
        if (!p.is_string()) {
          throw DataError(where + ": 'players' entries must be strings");
        }
        rc.context.players.push_back(p.get<std::string>());
      }
    }
    if (rec.contains("actions")) {
      for (const auto& a : rec["actions"]) {
        ActionEvent ev;
        ev.label = io::require_string(a, "label", where);
        ev.t_s = io::require_number(a, "t_s", where);
        rc.context.actions.push_back(std::move(ev));
      }
    }
    if (rec.contains("previous_ad") && !rec["previous_ad"].is_null()) {
      rc.context.previous_ad = io::require_string(rec, "previous_ad", where);
    }
    out.push_back(std::move(rc));
  });
  return out;
}

std::map<std::string, std::string> read_prompts(const fs::path& path) {
  std::map<std::string, std::string> prompts;
  io::for_each_jsonl(path, [&](std::size_t line, const json& rec) {
    const std::string where = path.string() + ":" + std::to_string(line);
    prompts[io::require_string(rec, "clip_id", where)] =
        io::require_string(rec, "prompt", where);
  });
  return prompts;
}

std::vector<Candidate> read_candidates(const fs::path& path) {
  std::vector<Candidate> out;
  io::for_each_jsonl(path, [&](std::size_t line, const json& rec) {
    const std::string where = path.string() + ":" + std::to_string(line);
    Candidate c;
    c.clip_id = io::require_string(rec, "clip_id", where);
    c.ad_text = io::require_string(rec, "ad_text", where);
    c.source = rec.contains("source")
                   ? io::require_string(rec, "source", where)
                   : "model";
    out.push_back(std::move(c));
  });
  return out;
}

std::map<std::string, double> read_durations(const fs::path& path) {
  std::map<std::string, double> out;
  io::for_each_jsonl(path, [&](std::size_t line, const json& rec) {
    const std::string where = path.string() + ":" + std::to_string(line);
    const std::string clip_id = io::require_string(rec, "clip_id", where);
    const double s = io::require_number(rec, "measured_s", where);
    if (s < 0.0) throw DataError(where + ": 'measured_s' must be >= 0");
    out[clip_id] = s;
  });
  return out;
}

text::Lexicons load_lexicons_file(const fs::path& path) {
  const json doc = io::parse_json_file(path);
  if (!doc.is_object()) {
    throw DataError(path.string() + ": expected a JSON object");
  }
  check_keys(doc, {"pronouns", "stopword_nouns"}, path.string());
  text::Lexicons lex;  // start empty: the file fully replaces the defaults
  auto load_set = [&](const char* key, std::set<std::string>* out) {
    if (!doc.contains(key)) return;
    if (!doc[key].is_array()) {
      throw DataError(path.string() + ": '" + key + "' must be an array");
    }
    for (const auto& w : doc[key]) {
      if (!w.is_string()) {
        throw DataError(path.string() + ": '" + std::string(key) +
                        "' entries must be strings");
      }
      out->insert(uni::fold(w.get<std::string>()));
    }
  };
  lex.pronouns.clear();
  lex.stopwords.clear();
  load_set("pronouns", &lex.pronouns);
  load_set("stopword_nouns", &lex.stopwords);
  return lex;
}

std::vector<Clip> stage_segment(const PipelineConfig& config) {
  if (config.inputs.frames_csv.empty()) {
    throw UsageError("segment: no frames_csv input configured");
  }
  if (config.inputs.frames_game_id.empty()) {
    throw UsageError("segment: frames_game_id is required with frames_csv");
  }
  const auto frames = scene::read_frames_csv(config.inputs.frames_csv);
  const auto clips = scene::split_into_clips(config.inputs.frames_game_id,
                                             frames, config.segmentation);
  std::vector<json> rows;
  for (const auto& c : clips) {
    rows.push_back({{"clip_id", c.clip_id},
                    {"game_id", c.game_id},
                    {"start_s", c.start_s},
                    {"end_s", c.end_s}});
  }
  write_jsonl(config.out_dir / "clips.jsonl", rows);
  return clips;
}

Store stage_ingest(const PipelineConfig& config) {
  IngestPaths paths;
  paths.games = config.inputs.games;
  paths.rosters = config.inputs.rosters;
  // When segmentation runs, its output becomes the clip list.
  paths.clips = config.inputs.frames_csv.empty()
                    ? config.inputs.clips
                    : config.out_dir / "clips.jsonl";
  paths.context = config.inputs.context;
  paths.lexicon = config.inputs.lexicon;
  if (paths.games.empty() || paths.rosters.empty() || paths.clips.empty()) {
    throw UsageError(
        "ingest: games, rosters and clips inputs are all required");
  }
  Store store = Store::ingest(paths);
  store.save_snapshot(config.out_dir / "snapshot.json");
  return store;
}

std::vector<ResolvedClip> stage_context(const PipelineConfig& config,
                                        const Store& store) {
  std::vector<ResolvedClip> resolved;
  std::vector<json> rows;
  for (const auto& clip : store.clips()) {
    ResolvedClip rc;
    rc.clip = clip;
    const ClipContext* ctx = store.context_for(clip.clip_id);
    if (ctx != nullptr) {
      rc.context = *ctx;
    } else {
      rc.context.clip_id = clip.clip_id;
    }
    json row = context_to_json(rc.context);
    row["game_id"] = clip.game_id;
    row["start_s"] = clip.start_s;
    row["end_s"] = clip.end_s;
    rows.push_back(std::move(row));
    resolved.push_back(std::move(rc));
  }
  write_jsonl(config.out_dir / "context_resolved.jsonl", rows);
  return resolved;
}

std::map<std::string, std::string> stage_prompt(
    const PipelineConfig& config, const std::vector<ResolvedClip>& resolved) {
  const prompt::PromptTemplate tmpl =
      config.template_file.empty()
          ? prompt::default_template(config.variant)
          : prompt::load_template_file(config.template_file, config.variant);

  std::map<std::string, std::string> prompts;
  std::vector<json> rows;
  for (const auto& rc : resolved) {
    const auto bundle = prompt::make_bundle(config.profile, rc.context);
    std::string text = prompt::build_prompt(tmpl, bundle);
    rows.push_back({{"clip_id", rc.clip.clip_id},
                    {"variant", prompt::variant_name(config.variant)},
                    {"profile", prompt::profile_name(config.profile)},
                    {"prompt", text}});
    prompts[rc.clip.clip_id] = std::move(text);
  }
  write_jsonl(config.out_dir / "prompts.jsonl", rows);
  return prompts;
}

std::vector<Candidate> stage_generate(
    const PipelineConfig& config, const std::vector<ResolvedClip>& resolved,
    const std::map<std::string, std::string>& prompts) {
  GenerateResult result = generate_core(config, resolved, prompts);
  write_generate_outputs(config, result);
  return std::move(result.candidates);
}

CorpusReport stage_evaluate(const PipelineConfig& config, const Store& store,
                            const std::vector<Candidate>& candidates) {
  ScoringConfig scoring = config.scoring;
  if (!config.inputs.lexicons.empty()) {
    scoring.lexicons = load_lexicons_file(config.inputs.lexicons);
  }
  DurationProvider provider(config.speech);
  if (!config.inputs.durations.empty()) {
    provider.set_measured(read_durations(config.inputs.durations));
  }

  CorpusReport report = evaluate_corpus(candidates, store, scoring, provider);
  json doc = report_to_json(report);

  // Evaluation rows carry diagnostics but not the AD text itself, which the
  // reference metrics need back.
  std::map<std::string, std::string> ad_texts;
  for (const auto& c : candidates) ad_texts[c.clip_id] = c.ad_text;

  std::map<std::string, RefRow> ref_rows;
  if (!config.inputs.references.empty()) {
    const auto refs = read_references(config.inputs.references);
    doc["reference_metrics"] =
        reference_section(report, refs, ad_texts, scoring.lexicons, &ref_rows);
  }

  emit_report(report, doc, config.out_dir);

  if (!config.inputs.references.empty()) {
    std::string csv = "clip_id,rouge_l,cider,token_iou\n";
    for (const auto& [clip_id, row] : ref_rows) {
      csv += clip_id + "," + fmt_g(row.rouge) + "," + fmt_g(row.cider) + "," +
             fmt_g(row.iou) + "\n";
    }
    io::write_file(config.out_dir / "reference_scores.csv", csv);
  }
  return report;
}

nlohmann::json report_to_json(const CorpusReport& report) {
  json doc;
  doc["clip_count"] = report.clip_count;
  if (report.clip_count > 0) {
    doc["corpus_score"] = report.corpus_score;
    doc["component_means"] = {{"z_p", report.component_means.z_p},
                              {"z_a", report.component_means.z_a},
                              {"z_l", report.component_means.z_l},
                              {"z_pr", report.component_means.z_pr},
                              {"z_o", report.component_means.z_o}};
  } else {
    doc["corpus_score"] = nullptr;
    doc["component_means"] = nullptr;
    doc["note"] = "no clips evaluated";
  }
  json clips = json::array();
  for (const auto& c : report.clips) {
    clips.push_back(
        {{"clip_id", c.clip_id},
         {"source", c.source},
         {"z_p", c.z.z_p},
         {"z_a", c.z.z_a},
         {"z_l", c.z.z_l},
         {"z_pr", c.z.z_pr},
         {"z_o", c.z.z_o},
         {"score", c.score},
         {"diagnostics",
          {{"matched_players", c.diag.matched_players},
           {"ambiguous_surnames", c.diag.ambiguous_surnames},
           {"matched_actions", c.diag.matched_actions},
           {"estimated_duration_s", c.diag.estimated_duration_s},
           {"measured_duration_used", c.diag.measured_duration_used},
           {"clip_duration_s", c.diag.clip_duration_s},
           {"commentary_ratio", c.diag.commentary_ratio}}}});
  }
  doc["clips"] = std::move(clips);
  json skipped = json::array();
  for (const auto& s : report.skipped) {
    skipped.push_back({{"clip_id", s.clip_id}, {"reason", s.reason}});
  }
  doc["skipped"] = std::move(skipped);
  return doc;
}

CorpusReport report_from_json(const nlohmann::json& doc) {
  CorpusReport report;
  report.clip_count = doc.at("clip_count").get<std::size_t>();
  if (report.clip_count > 0) {
    report.corpus_score = doc.at("corpus_score").get<double>();
    const json& means = doc.at("component_means");
    report.component_means.z_p = means.at("z_p").get<double>();
    report.component_means.z_a = means.at("z_a").get<double>();
    report.component_means.z_l = means.at("z_l").get<double>();
    report.component_means.z_pr = means.at("z_pr").get<double>();
    report.component_means.z_o = means.at("z_o").get<double>();
  }
  for (const auto& c : doc.at("clips")) {
    ClipEvaluation ev;
    ev.clip_id = c.at("clip_id").get<std::string>();
    ev.source = c.at("source").get<std::string>();
    ev.z.z_p = c.at("z_p").get<double>();
    ev.z.z_a = c.at("z_a").get<double>();
    ev.z.z_l = c.at("z_l").get<double>();
    ev.z.z_pr = c.at("z_pr").get<double>();
    ev.z.z_o = c.at("z_o").get<double>();
    ev.score = c.at("score").get<double>();
    const json& d = c.at("diagnostics");
    ev.diag.matched_players =
        d.at("matched_players").get<std::vector<std::string>>();
    ev.diag.ambiguous_surnames =
        d.at("ambiguous_surnames").get<std::vector<std::string>>();
    ev.diag.matched_actions =
        d.at("matched_actions").get<std::vector<std::string>>();
    ev.diag.estimated_duration_s = d.at("estimated_duration_s").get<double>();
    ev.diag.measured_duration_used =
        d.at("measured_duration_used").get<bool>();
    ev.diag.clip_duration_s = d.at("clip_duration_s").get<double>();
    ev.diag.commentary_ratio = d.at("commentary_ratio").get<double>();
    report.clips.push_back(std::move(ev));
  }
  for (const auto& s : doc.at("skipped")) {
    report.skipped.push_back({s.at("clip_id").get<std::string>(),
                              s.at("reason").get<std::string>()});
  }
  return report;
}

void emit_report(const CorpusReport& report, const nlohmann::json& report_doc,
                 const fs::path& out_dir) {
  io::write_file(out_dir / "report.json", report_doc.dump(2) + "\n");

  std::string csv = "clip_id,z_p,z_a,z_l,z_pr,z_o,score\n";
  for (const auto& c : report.clips) {
    csv += c.clip_id + "," + fmt_g(c.z.z_p) + "," + fmt_g(c.z.z_a) + "," +
           fmt_g(c.z.z_l) + "," + fmt_g(c.z.z_pr) + "," + fmt_g(c.z.z_o) +
           "," + fmt_g(c.score) + "\n";
  }
  io::write_file(out_dir / "report.csv", csv);

  std::string means = "component,mean\n";
  if (report.clip_count > 0) {
    means += std::string("z_p,") + fmt_g(report.component_means.z_p) + "\n";
    means += std::string("z_a,") + fmt_g(report.component_means.z_a) + "\n";
    means += std::string("z_l,") + fmt_g(report.component_means.z_l) + "\n";
    means += std::string("z_pr,") + fmt_g(report.component_means.z_pr) + "\n";
    means += std::string("z_o,") + fmt_g(report.component_means.z_o) + "\n";
    means += std::string("corpus,") + fmt_g(report.corpus_score) + "\n";
  }
  io::write_file(out_dir / "component_means.csv", means);
}

RunResult run_pipeline(const PipelineConfig& config) {
  fs::create_directories(config.out_dir);

  json stages;

  if (!config.inputs.frames_csv.empty()) {
    const auto clips = stage_segment(config);
    stages["segment"] = {{"clips", clips.size()}};
  }

  const Store store = stage_ingest(config);
  const StoreCounts counts = store.counts();
  stages["ingest"] = {{"games", counts.games},
                      {"players", counts.players},
                      {"clips", counts.clips},
                      {"contexts", counts.contexts},
                      {"action_labels", counts.labels}};

  const auto resolved = stage_context(config, store);
  stages["context"] = {{"resolved", resolved.size()}};

  RunResult result;
  std::vector<Candidate> candidates;
  if (!config.inputs.candidates.empty()) {
    // Evaluate-only: pre-existing candidates, no endpoint traffic. They are
    // still normalized into out_dir so the run directory is self-contained.
    candidates = read_candidates(config.inputs.candidates);
    std::vector<json> rows;
    for (const auto& c : candidates) {
      rows.push_back({{"clip_id", c.clip_id},
                      {"ad_text", c.ad_text},
                      {"source", c.source}});
    }
    write_jsonl(config.out_dir / "candidates.jsonl", rows);
    stages["generate"] = {{"requested", 0},
                          {"succeeded", 0},
                          {"failed", 0},
                          {"imported", candidates.size()}};
  } else {
    const auto prompts = stage_prompt(config, resolved);
    stages["prompt"] = {{"prompts", prompts.size()}};
    GenerateResult gen = generate_core(config, resolved, prompts);
    write_generate_outputs(config, gen);
    stages["generate"] = {{"requested", resolved.size()},
                          {"succeeded", gen.candidates.size()},
                          {"failed", gen.failures.size()},
                          {"imported", 0}};
    result.generation_failures = gen.failures.size();
    candidates = std::move(gen.candidates);
  }

  result.report = stage_evaluate(config, store, candidates);
  stages["evaluate"] = {{"evaluated", result.report.clip_count},
                        {"skipped", result.report.skipped.size()}};

  result.report_json = config.out_dir / "report.json";
  result.candidates_file = config.out_dir / "candidates.jsonl";
  result.manifest_file = config.out_dir / "manifest.json";

  const json config_doc = config_to_json(config);
  json manifest;
  manifest["tool_version"] = kVersion;
  manifest["created_utc"] = utc_now_iso();
  manifest["config"] = config_doc;
  manifest["config_hash"] = io::sha256_hex(config_doc.dump());
  json inputs = json::object();
  auto add_input = [&](const char* role, const fs::path& p) {
    if (p.empty()) return;
    inputs[role] = {{"path", p.string()}, {"sha256", io::sha256_file(p)}};
  };
  add_input("games", config.inputs.games);
  add_input("rosters", config.inputs.rosters);
  add_input("clips", config.inputs.clips);
  add_input("context", config.inputs.context);
  add_input("lexicon", config.inputs.lexicon);
  add_input("lexicons", config.inputs.lexicons);
  add_input("frames_csv", config.inputs.frames_csv);
  add_input("candidates", config.inputs.candidates);
  add_input("references", config.inputs.references);
  add_input("durations", config.inputs.durations);
  add_input("template_file", config.template_file);
  manifest["inputs"] = std::move(inputs);
  manifest["stages"] = std::move(stages);
  json outputs = json::object();
  outputs["candidates.jsonl"] = io::sha256_file(result.candidates_file);
  outputs["report.json"] = io::sha256_file(result.report_json);
  manifest["outputs"] = std::move(outputs);
  io::write_file(result.manifest_file, manifest.dump(2) + "\n");

  return result;
}

Correlation correlate_csv(const fs::path& a_path, const std::string& a_column,
                          const fs::path& b_path, const std::string& b_column) {
  const auto a = csv_column_by_clip(a_path, a_column);
  const auto b = csv_column_by_clip(b_path, b_column);
  std::vector<double> xs, ys;
  for (const auto& [clip_id, x] : a) {
    auto it = b.find(clip_id);
    if (it == b.end()) continue;
    xs.push_back(x);
    ys.push_back(it->second);
  }
  if (xs.size() < 2) {
    throw DataError("correlate: fewer than two joined rows");
  }
  Correlation c;
  c.pearson = metrics::pearson(xs, ys);
  c.kendall = metrics::kendall_tau(xs, ys);
  c.n = xs.size();
  return c;
}

}  // namespace adeval::pipe
