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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "adeval/error.hpp"
#include "adeval/io_util.hpp"
#include "adeval/mock_server.hpp"
#include "adeval/pipeline.hpp"

using namespace adeval;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = ADEVAL_FIXTURE_DIR;

fs::path fresh_dir(const std::string& label) {
  static std::atomic<int> counter{0};
  const fs::path dir = fs::temp_directory_path() /
                       ("adeval_pipe_" + label + "_" +
                        std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

pipe::PipelineConfig base_config(const fs::path& out_dir) {
  pipe::PipelineConfig config;
  config.inputs.games = kFixtures / "games.json";
  config.inputs.rosters = kFixtures / "rosters.json";
  config.inputs.clips = kFixtures / "clips.jsonl";
  config.inputs.context = kFixtures / "context.jsonl";
  config.out_dir = out_dir;
  config.variant = prompt::Variant::kP3;
  config.profile = prompt::ContextProfile::kFull;
  return config;
}

std::map<std::string, std::string> fixture_ads() {
  std::map<std::string, std::string> ads;
  for (const auto& c : pipe::read_candidates(kFixtures / "mock_ads.jsonl")) {
    ads[c.clip_id] = c.ad_text;
  }
  return ads;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Binds an ephemeral port without ever listening, then closes it, so a
// connect attempt is refused immediately instead of timing out.
int free_tcp_port() {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  REQUIRE(fd >= 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = 0;
  REQUIRE(::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0);
  socklen_t len = sizeof(addr);
  REQUIRE(::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len) == 0);
  const int port = ntohs(addr.sin_port);
  ::close(fd);
  return port;
}

}  // namespace

TEST_CASE("config files round-trip and reject unknown keys") {
  const fs::path dir = fresh_dir("config");
  const fs::path file = dir / "config.json";
  {
    std::ofstream out(file);
    out << R"({
      "inputs": {"games": "g.json", "rosters": "r.json", "clips": "c.jsonl"},
      "out_dir": "results",
      "prompt": {"variant": "2", "profile": "pa+c"},
      "generation": {"max_tokens": 64, "temperature": 0.5, "frames": 8,
                     "video_uri_prefix": "corpus/"},
      "scoring": {"strict_actions": true, "weights": [2, 1, 1, 1, 1]},
      "speech": {"words_per_minute": 120.0},
      "segmentation": {"threshold": 30.0},
      "endpoint": {"url": "http://10.0.0.1:9", "timeout_s": 3.5}
    })";
  }

  const auto config = pipe::load_config(file);
  CHECK(config.inputs.games == fs::path("g.json"));
  CHECK(config.out_dir == fs::path("results"));
  CHECK(config.variant == prompt::Variant::kP2);
  CHECK(config.profile == prompt::ContextProfile::kPlayersActionsCommentary);
  CHECK(config.gen_max_tokens == 64);
  CHECK(config.gen_temperature == doctest::Approx(0.5));
  CHECK(config.video_uri_prefix == "corpus/");
  CHECK(config.scoring.action_mode == text::ActionMatchMode::kStrict);
  CHECK(config.scoring.weights[0] == doctest::Approx(2.0));
  CHECK(config.speech.words_per_minute == doctest::Approx(120.0));
  CHECK(config.segmentation.threshold == doctest::Approx(30.0));
  CHECK(config.endpoint.base_url == "http://10.0.0.1:9");
  CHECK(config.endpoint.timeout_s == doctest::Approx(3.5));

  // Serialize, reload, serialize again: stable.
  const fs::path again = dir / "again.json";
  {
    std::ofstream out(again);
    out << pipe::config_to_json(config).dump(2) << "\n";
  }
  const auto reloaded = pipe::load_config(again);
  CHECK(pipe::config_to_json(reloaded).dump() ==
        pipe::config_to_json(config).dump());

  const fs::path bad_top = dir / "bad_top.json";
  {
    std::ofstream out(bad_top);
    out << R"({"out_dir": "x", "bogus": 1})";
  }
  CHECK_THROWS_WITH_AS(pipe::load_config(bad_top), doctest::Contains("bogus"),
                       UsageError);

  const fs::path bad_nested = dir / "bad_nested.json";
  {
    std::ofstream out(bad_nested);
    out << R"({"scoring": {"strictness": 1}})";
  }
  CHECK_THROWS_AS(pipe::load_config(bad_nested), UsageError);

  const fs::path bad_weights = dir / "bad_weights.json";
  {
    std::ofstream out(bad_weights);
    out << R"({"scoring": {"weights": [1, 2]}})";
  }
  CHECK_THROWS_AS(pipe::load_config(bad_weights), UsageError);

  const fs::path bad_variant = dir / "bad_variant.json";
  {
    std::ofstream out(bad_variant);
    out << R"({"prompt": {"variant": "9"}})";
  }
  CHECK_THROWS_AS(pipe::load_config(bad_variant), UsageError);
  fs::remove_all(dir);
}

TEST_CASE("the auth token never reaches serialized config") {
  auto config = base_config("unused");
  config.endpoint.auth_token = "extremely-secret";
  const std::string dumped = pipe::config_to_json(config).dump();
  CHECK(dumped.find("extremely-secret") == std::string::npos);
  CHECK(dumped.find("auth") == std::string::npos);
}

TEST_CASE("environment variables override endpoint settings") {
  auto config = base_config("unused");
  const std::string before_url = config.endpoint.base_url;

  ::setenv("ADEVAL_ENDPOINT_URL", "http://example.test:7777", 1);
  ::setenv("ADEVAL_AUTH_TOKEN", "tkn", 1);
  pipe::apply_environment(config);
  CHECK(config.endpoint.base_url == "http://example.test:7777");
  CHECK(config.endpoint.auth_token == "tkn");

  // Empty values are treated as unset.
  ::setenv("ADEVAL_ENDPOINT_URL", "", 1);
  config.endpoint.base_url = before_url;
  pipe::apply_environment(config);
  CHECK(config.endpoint.base_url == before_url);

  ::unsetenv("ADEVAL_ENDPOINT_URL");
  ::unsetenv("ADEVAL_AUTH_TOKEN");
}

TEST_CASE("context and prompt stages write readable artifacts") {
  const fs::path dir = fresh_dir("stages");
  auto config = base_config(dir);

  const Store store = pipe::stage_ingest(config);
  CHECK(fs::exists(dir / "snapshot.json"));

  const auto resolved = pipe::stage_context(config, store);
  REQUIRE(resolved.size() == 10);
  CHECK(fs::exists(dir / "context_resolved.jsonl"));

  const auto reread = pipe::read_resolved(dir / "context_resolved.jsonl");
  REQUIRE(reread.size() == resolved.size());
  for (std::size_t i = 0; i < reread.size(); ++i) {
    CHECK(reread[i].clip.clip_id == resolved[i].clip.clip_id);
    CHECK(reread[i].clip.start_s == resolved[i].clip.start_s);
    CHECK(reread[i].context.commentary == resolved[i].context.commentary);
    CHECK(reread[i].context.players == resolved[i].context.players);
    CHECK(reread[i].context.previous_ad == resolved[i].context.previous_ad);
  }

  const auto prompts = pipe::stage_prompt(config, resolved);
  CHECK(prompts.size() == 10);
  CHECK(fs::exists(dir / "prompts.jsonl"));
  const auto prompts_back = pipe::read_prompts(dir / "prompts.jsonl");
  CHECK(prompts_back == prompts);
  // Every prompt carries the shared instruction line.
  for (const auto& [id, text] : prompts) {
    CAPTURE(id);
    CHECK(text.find("Give an audio description") != std::string::npos);
  }
  fs::remove_all(dir);
}

TEST_CASE("run_pipeline end-to-end against the fixture endpoint") {
  infer::MockServer::Options options;
  options.fixtures = fixture_ads();
  infer::MockServer server(std::move(options));
  server.start(0);

  const fs::path dir = fresh_dir("run");
  auto config = base_config(dir);
  config.endpoint.base_url = server.base_url();
  config.endpoint.auth_token = "secret-token";

  const auto result = pipe::run_pipeline(config);
  server.stop();

  CHECK(result.report.clip_count == 10);
  CHECK(result.report.corpus_score == doctest::Approx(0.62).epsilon(1e-12));
  CHECK(result.generation_failures == 0);

  for (const char* name :
       {"snapshot.json", "context_resolved.jsonl", "prompts.jsonl",
        "candidates.jsonl", "failures.jsonl", "report.json", "report.csv",
        "component_means.csv", "manifest.json"}) {
    CAPTURE(name);
    CHECK(fs::exists(dir / name));
  }
  CHECK(slurp(dir / "failures.jsonl").empty());

  // Spot-check the CSV rows against the designed scores.
  const std::string report_csv = slurp(dir / "report.csv");
  CHECK(report_csv.find("clip_id,z_p,z_a,z_l,z_pr,z_o,score") == 0);
  CHECK(report_csv.find("c01,1,1,1,1,1,1\n") != std::string::npos);
  CHECK(report_csv.find("c08,0,0,0,0,0,0\n") != std::string::npos);
  const std::string means_csv = slurp(dir / "component_means.csv");
  CHECK(means_csv.find("z_p,0.6\n") != std::string::npos);
  CHECK(means_csv.find("corpus,0.62\n") != std::string::npos);

  // Manifest: hashes, config, and no trace of the auth token.
  const json manifest = json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["tool_version"].is_string());
  CHECK(manifest["created_utc"].is_string());
  CHECK(manifest["config_hash"].get<std::string>().size() == 64);
  CHECK(manifest["inputs"]["games"]["sha256"].get<std::string>().size() == 64);
  CHECK(manifest["outputs"].contains("report.json"));
  CHECK(manifest["outputs"].contains("candidates.jsonl"));
  CHECK(manifest.dump().find("secret-token") == std::string::npos);

  // Wall-clock stays out of everything except the manifest.
  const json report = json::parse(slurp(dir / "report.json"));
  CHECK_FALSE(report.contains("created_utc"));
  fs::remove_all(dir);
}

TEST_CASE("evaluate-only mode scores supplied candidates") {
  const fs::path dir = fresh_dir("evalonly");
  auto config = base_config(dir);
  config.inputs.candidates = kFixtures / "mock_ads.jsonl";
  config.endpoint.base_url = "http://127.0.0.1:1";  // must never be contacted

  const auto result = pipe::run_pipeline(config);
  CHECK(result.report.clip_count == 10);
  CHECK(result.report.corpus_score == doctest::Approx(0.62).epsilon(1e-12));
  CHECK(fs::exists(dir / "candidates.jsonl"));

  const json manifest = json::parse(slurp(dir / "manifest.json"));
  CHECK(manifest["stages"]["generate"].contains("imported"));
  fs::remove_all(dir);
}

TEST_CASE("reference inputs add the reference-based section") {
  const fs::path dir = fresh_dir("refs");
  auto config = base_config(dir);
  config.inputs.candidates = kFixtures / "mock_ads.jsonl";
  config.inputs.references = kFixtures / "references.jsonl";

  pipe::run_pipeline(config);

  const json report = json::parse(slurp(dir / "report.json"));
  REQUIRE(report.contains("reference_metrics"));
  const json& section = report["reference_metrics"];
  CHECK(section["clips_with_references"] == 3);
  CHECK(section["rouge_l_mean"].is_number());
  CHECK(section["cider_mean"].is_number());
  CHECK(section["token_iou_mean"].is_number());

  const std::string csv = slurp(dir / "reference_scores.csv");
  CHECK(csv.find("clip_id,rouge_l,cider,token_iou") == 0);
  // Header plus one row per referenced clip.
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  CHECK(csv.find("c01,") != std::string::npos);
  CHECK(csv.find("c05,") != std::string::npos);
  CHECK(csv.find("c09,") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("measured durations override the speech model") {
  const fs::path dir = fresh_dir("durations");
  auto config = base_config(dir);
  config.inputs.candidates = kFixtures / "mock_ads.jsonl";
  config.inputs.durations = dir / "durations.jsonl";
  {
    std::ofstream out(config.inputs.durations);
    // c01's AD easily fits its 20 s clip by the model; a measured 25 s
    // recording does not.
    out << R"({"clip_id": "c01", "measured_s": 25.0})" << "\n";
  }

  const auto result = pipe::run_pipeline(config);
  REQUIRE(!result.report.clips.empty());
  const auto& c01 = result.report.clips.front();
  REQUIRE(c01.clip_id == "c01");
  CHECK(c01.z.z_l == 0.0);
  CHECK(c01.score == doctest::Approx(0.8));
  CHECK(c01.diag.measured_duration_used);
  CHECK(c01.diag.estimated_duration_s == doctest::Approx(25.0));
  fs::remove_all(dir);
}

TEST_CASE("generation failures are recorded and evaluation proceeds") {
  auto ads = fixture_ads();
  ads.erase("c07");
  infer::MockServer::Options options;
  options.fixtures = std::move(ads);
  infer::MockServer server(std::move(options));
  server.start(0);

  const fs::path dir = fresh_dir("failures");
  auto config = base_config(dir);
  config.endpoint.base_url = server.base_url();
  config.endpoint.backoff_ms = 1;

  const auto result = pipe::run_pipeline(config);
  server.stop();

  CHECK(result.generation_failures == 1);
  CHECK(result.report.clip_count == 9);
  const std::string failures = slurp(dir / "failures.jsonl");
  CHECK(failures.find("c07") != std::string::npos);
  CHECK(failures.find("http_status") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("an unreachable endpoint aborts naming the generate stage") {
  const fs::path dir = fresh_dir("down");
  auto config = base_config(dir);
  config.endpoint.base_url =
      "http://127.0.0.1:" + std::to_string(free_tcp_port());
  config.endpoint.max_attempts = 1;
  config.endpoint.backoff_ms = 1;
  config.endpoint.timeout_s = 2.0;

  CHECK_THROWS_WITH_AS(pipe::run_pipeline(config),
                       doctest::Contains("generate"), EndpointError);
  fs::remove_all(dir);
}

TEST_CASE("an empty corpus yields an empty report, not a crash") {
  const fs::path dir = fresh_dir("empty");
  auto config = base_config(dir);
  config.inputs.clips = dir / "none.jsonl";
  config.inputs.context.clear();
  {
    std::ofstream out(config.inputs.clips);  // zero records
  }

  const auto result = pipe::run_pipeline(config);
  CHECK(result.report.clip_count == 0);
  const json report = json::parse(slurp(dir / "report.json"));
  CHECK(report["clip_count"] == 0);
  CHECK(report["corpus_score"].is_null());
  CHECK(report.contains("note"));
  fs::remove_all(dir);
}

TEST_CASE("report json round-trips through its reader") {
  const fs::path dir = fresh_dir("roundtrip");
  auto config = base_config(dir);
  config.inputs.candidates = kFixtures / "mock_ads.jsonl";
  const auto result = pipe::run_pipeline(config);

  const json doc = pipe::report_to_json(result.report);
  const auto back = pipe::report_from_json(doc);
  CHECK(back.clip_count == result.report.clip_count);
  CHECK(back.corpus_score == result.report.corpus_score);
  REQUIRE(back.clips.size() == result.report.clips.size());
  for (std::size_t i = 0; i < back.clips.size(); ++i) {
    CHECK(back.clips[i].clip_id == result.report.clips[i].clip_id);
    CHECK(back.clips[i].score == result.report.clips[i].score);
    CHECK(back.clips[i].z.z_o == result.report.clips[i].z.z_o);
    CHECK(back.clips[i].diag.estimated_duration_s ==
          result.report.clips[i].diag.estimated_duration_s);
  }
  CHECK(pipe::report_to_json(back).dump() == doc.dump());
  fs::remove_all(dir);
}

TEST_CASE("correlate_csv joins on clip_id") {
  const fs::path dir = fresh_dir("corr");
  const fs::path a = dir / "a.csv";
  const fs::path b = dir / "b.csv";
  {
    std::ofstream out(a);
    out << "clip_id,score\nc1,1\nc2,2\nc3,3\nc4,4\nonly_a,9\n";
  }
  {
    std::ofstream out(b);
    out << "clip_id,rouge_l\nc1,1\nc2,3\nc3,2\nc4,4\nonly_b,8\n";
  }

  const auto corr = pipe::correlate_csv(a, "score", b, "rouge_l");
  CHECK(corr.n == 4);
  CHECK(corr.pearson == doctest::Approx(0.8));
  CHECK(corr.kendall == doctest::Approx(2.0 / 3.0));

  CHECK_THROWS_WITH_AS(pipe::correlate_csv(a, "nope", b, "rouge_l"),
                       doctest::Contains("nope"), UsageError);

  const fs::path tiny = dir / "tiny.csv";
  {
    std::ofstream out(tiny);
    out << "clip_id,score\nc1,1\n";
  }
  CHECK_THROWS_WITH_AS(pipe::correlate_csv(a, "score", tiny, "score"),
                       doctest::Contains("two"), DataError);
  fs::remove_all(dir);
}

TEST_CASE("custom word lists flow into scoring") {
  const fs::path dir = fresh_dir("lexicons");
  const fs::path lex = dir / "wordlists.json";
  {
    std::ofstream out(lex);
    // No pronouns at all: the pronoun check can then never fire.
    out << R"({"pronouns": [], "stopword_nouns": ["the", "a"]})";
  }
  auto config = base_config(dir);
  config.inputs.candidates = kFixtures / "mock_ads.jsonl";
  config.inputs.lexicons = lex;

  const auto result = pipe::run_pipeline(config);
  for (const auto& clip : result.report.clips) {
    CAPTURE(clip.clip_id);
    CHECK(clip.z.z_pr == 1.0);
  }
  fs::remove_all(dir);
}
