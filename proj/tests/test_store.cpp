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

#include <atomic>
#include <filesystem>
#include <fstream>
#include <string>

#include "adeval/error.hpp"
#include "adeval/store.hpp"

using namespace adeval;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = ADEVAL_FIXTURE_DIR;

IngestPaths fixture_paths() {
  IngestPaths p;
  p.games = kFixtures / "games.json";
  p.rosters = kFixtures / "rosters.json";
  p.clips = kFixtures / "clips.jsonl";
  p.context = kFixtures / "context.jsonl";
  return p;
}

// Writes a small corpus into a fresh temp dir; empty strings reuse a
// minimal valid default for that file.
class TempCorpus {
 public:
  TempCorpus() {
    static std::atomic<int> counter{0};
    dir_ = fs::temp_directory_path() /
           ("adeval_store_test_" + std::to_string(counter++));
    fs::create_directories(dir_);
  }

  IngestPaths paths(const std::string& games, const std::string& rosters,
                    const std::string& clips, const std::string& context) {
    IngestPaths p;
    p.games = write("games.json", games.empty() ? kGames : games);
    p.rosters = write("rosters.json", rosters.empty() ? kRosters : rosters);
    p.clips = write("clips.jsonl", clips.empty() ? kClips : clips);
    p.context = write("context.jsonl", context);
    return p;
  }

  fs::path write(const std::string& name, const std::string& content) {
    const fs::path path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
  }

  const fs::path& dir() const { return dir_; }

  static constexpr const char* kGames =
      R"([{"game_id":"g1","season":"2014-2015","league":"epl","home":"United","away":"City"}])";
  static constexpr const char* kRosters =
      R"([{"game_id":"g1","team":"home","jersey":10,"player_name":"Wayne Rooney"},
          {"game_id":"g1","team":"away","jersey":1,"player_name":"Joe Hart"}])";
  static constexpr const char* kClips =
      R"({"clip_id":"k1","game_id":"g1","start_s":0.0,"end_s":20.0})";

 private:
  fs::path dir_;
};

}  // namespace

TEST_CASE("fixture corpus ingests with expected counts") {
  const Store store = Store::ingest(fixture_paths());
  const StoreCounts c = store.counts();
  CHECK(c.games == 2);
  CHECK(c.players == 28);
  CHECK(c.clips == 10);
  CHECK(c.contexts == 10);
  CHECK(c.labels == 10);  // built-in action lexicon
}

TEST_CASE("lookup_game narrows to a single game") {
  const Store store = Store::ingest(fixture_paths());
  Store::GameFilter f;
  f.season = "2014-2015";
  f.league = "england_epl";
  f.home = "Manchester United";
  f.away = "Arsenal";
  const auto games = store.lookup_game(f);
  REQUIRE(games.size() == 1);
  CHECK(games[0].game_id == "g-epl-0001");

  Store::GameFilter by_season;
  by_season.season = "2015-2016";
  const auto liga = store.lookup_game(by_season);
  REQUIRE(liga.size() == 1);
  CHECK(liga[0].game_id == "g-liga-0002");

  const auto all = store.lookup_game({});
  CHECK(all.size() == 2);

  Store::GameFilter none;
  none.home = "Chelsea";
  CHECK(store.lookup_game(none).empty());
}

TEST_CASE("roster queries") {
  const Store store = Store::ingest(fixture_paths());
  const auto names = store.roster_names("g-epl-0001");
  CHECK(names.size() == 16);
  CHECK(names.count("Wayne Rooney") == 1);
  CHECK(names.count("Mesut Özil") == 1);

  const auto rooney = store.player_by_jersey("g-epl-0001", Team::kHome, 10);
  REQUIRE(rooney.has_value());
  CHECK(rooney->player_name == "Wayne Rooney");

  CHECK_FALSE(store.player_by_jersey("g-epl-0001", Team::kHome, 99).has_value());
  CHECK_THROWS_AS((void)store.roster_names("nope"), DataError);
  CHECK_THROWS_AS((void)store.player_by_jersey("nope", Team::kHome, 1),
                  DataError);
}

TEST_CASE("clip and context lookups") {
  const Store store = Store::ingest(fixture_paths());
  const Clip* clip = store.find_clip("c03");
  REQUIRE(clip != nullptr);
  CHECK(clip->game_id == "g-epl-0001");
  CHECK(clip->duration_s() == doctest::Approx(18.0));

  const ClipContext* ctx = store.context_for("c01");
  REQUIRE(ctx != nullptr);
  REQUIRE(ctx->actions.size() == 1);
  CHECK(ctx->actions[0].label == "Free-kick");
  REQUIRE(ctx->previous_ad.has_value());

  CHECK(store.find_clip("zzz") == nullptr);
  CHECK(store.context_for("zzz") == nullptr);
}

TEST_CASE("names are NFC-composed at ingest") {
  TempCorpus tmp;
  // Roster name written with a combining diaeresis; lookups and the roster
  // set must see the composed form.
  const auto paths = tmp.paths(
      "",
      "[{\"game_id\":\"g1\",\"team\":\"home\",\"jersey\":7,"
      "\"player_name\":\"Müller\"}]",
      "", "");
  const Store store = Store::ingest(paths);
  const auto names = store.roster_names("g1");
  CHECK(names.count("Müller") == 1);
}

TEST_CASE("duplicate game ids are rejected") {
  TempCorpus tmp;
  const auto paths = tmp.paths(
      R"([{"game_id":"g1","season":"s","league":"l","home":"A","away":"B"},
          {"game_id":"g1","season":"s2","league":"l","home":"C","away":"D"}])",
      "", "", "");
  CHECK_THROWS_WITH_AS(Store::ingest(paths),
                       doctest::Contains("duplicate game_id"), DataError);
}

TEST_CASE("duplicate season league home away key is rejected") {
  TempCorpus tmp;
  const auto paths = tmp.paths(
      R"([{"game_id":"g1","season":"s","league":"l","home":"A","away":"B"},
          {"game_id":"g2","season":"s","league":"l","home":"A","away":"B"}])",
      R"([{"game_id":"g1","team":"home","jersey":10,"player_name":"Wayne Rooney"},
          {"game_id":"g2","team":"home","jersey":10,"player_name":"Joe Hart"}])",
      "", "");
  CHECK_THROWS_AS(Store::ingest(paths), DataError);
}

TEST_CASE("duplicate jersey on one team names the number") {
  TempCorpus tmp;
  const auto paths = tmp.paths(
      "",
      R"([{"game_id":"g1","team":"home","jersey":10,"player_name":"A B"},
          {"game_id":"g1","team":"home","jersey":10,"player_name":"C D"}])",
      "", "");
  CHECK_THROWS_WITH_AS(Store::ingest(paths), doctest::Contains("10"),
                       DataError);
}

TEST_CASE("same jersey on opposite teams is fine") {
  TempCorpus tmp;
  const auto paths = tmp.paths(
      "",
      R"([{"game_id":"g1","team":"home","jersey":1,"player_name":"A B"},
          {"game_id":"g1","team":"away","jersey":1,"player_name":"C D"}])",
      "", "");
  CHECK(Store::ingest(paths).counts().players == 2);
}

TEST_CASE("roster rows must reference a known game") {
  TempCorpus tmp;
  const auto paths = tmp.paths(
      "",
      R"([{"game_id":"missing","team":"home","jersey":1,"player_name":"A B"}])",
      "", "");
  CHECK_THROWS_AS(Store::ingest(paths), DataError);
}

TEST_CASE("team field must be home or away") {
  TempCorpus tmp;
  const auto paths = tmp.paths(
      "",
      R"([{"game_id":"g1","team":"bench","jersey":1,"player_name":"A B"}])",
      "", "");
  CHECK_THROWS_AS(Store::ingest(paths), DataError);
}

TEST_CASE("negative jerseys are rejected") {
  TempCorpus tmp;
  const auto paths = tmp.paths(
      "",
      R"([{"game_id":"g1","team":"home","jersey":-3,"player_name":"A B"}])",
      "", "");
  CHECK_THROWS_AS(Store::ingest(paths), DataError);
}

TEST_CASE("clips must reference a known game and have positive span") {
  TempCorpus tmp1;
  CHECK_THROWS_AS(
      Store::ingest(tmp1.paths(
          "", "", R"({"clip_id":"k1","game_id":"x","start_s":0,"end_s":5})",
          "")),
      DataError);
  TempCorpus tmp2;
  CHECK_THROWS_AS(
      Store::ingest(tmp2.paths(
          "", "", R"({"clip_id":"k1","game_id":"g1","start_s":5,"end_s":5})",
          "")),
      DataError);
}

TEST_CASE("context rows validate against clips and the lexicon") {
  SUBCASE("unknown clip") {
    TempCorpus tmp;
    CHECK_THROWS_AS(
        Store::ingest(tmp.paths("", "", "", R"({"clip_id":"nope"})")),
        DataError);
  }
  SUBCASE("duplicate context") {
    TempCorpus tmp;
    CHECK_THROWS_AS(Store::ingest(tmp.paths("", "", "",
                                            "{\"clip_id\":\"k1\"}\n"
                                            "{\"clip_id\":\"k1\"}\n")),
                    DataError);
  }
  SUBCASE("unknown action label") {
    TempCorpus tmp;
    CHECK_THROWS_WITH_AS(
        Store::ingest(tmp.paths(
            "", "", "",
            R"({"clip_id":"k1","actions":[{"label":"Throw-in","t_s":1.0}]})")),
        doctest::Contains("Throw-in"), DataError);
  }
  SUBCASE("action timestamp outside the clip span") {
    TempCorpus tmp;
    CHECK_THROWS_AS(
        Store::ingest(tmp.paths(
            "", "", "",
            R"({"clip_id":"k1","actions":[{"label":"Goal","t_s":25.0}]})")),
        DataError);
  }
  SUBCASE("valid context passes") {
    TempCorpus tmp;
    const Store store = Store::ingest(tmp.paths(
        "", "", "",
        R"({"clip_id":"k1","actions":[{"label":"Goal","t_s":19.0}]})"));
    CHECK(store.counts().contexts == 1);
  }
}

TEST_CASE("empty context path means no context rows") {
  TempCorpus tmp;
  auto paths = tmp.paths("", "", "", "");
  paths.context.clear();
  const Store store = Store::ingest(paths);
  CHECK(store.counts().contexts == 0);
  CHECK(store.context_for("k1") == nullptr);
}

TEST_CASE("malformed jsonl errors carry file and line") {
  TempCorpus tmp;
  const auto paths =
      tmp.paths("", "", "{\"clip_id\":\"k1\",\"game_id\":\"g1\",\"start_s\":0,\"end_s\":9}\nnot json\n", "");
  CHECK_THROWS_WITH_AS(Store::ingest(paths), doctest::Contains(":2"),
                       DataError);
}

TEST_CASE("custom action lexicon file replaces the default") {
  TempCorpus tmp;
  auto paths = tmp.paths("", "", "", "");
  paths.lexicon = kFixtures / "action_lexicon.json";
  const Store store = Store::ingest(paths);
  CHECK(store.counts().labels == 3);
  CHECK(store.lexicon().has_label("Save"));
  CHECK_FALSE(store.lexicon().has_label("Corner"));
}

TEST_CASE("snapshot round-trip is byte-stable") {
  const Store store = Store::ingest(fixture_paths());
  const fs::path snap =
      fs::temp_directory_path() / "adeval_store_snapshot_test.json";
  store.save_snapshot(snap);
  const Store reloaded = Store::from_snapshot(snap);

  CHECK(reloaded.snapshot_string() == store.snapshot_string());
  CHECK(reloaded.counts().players == store.counts().players);
  CHECK(reloaded.roster_names("g-liga-0002").count("Antonio Adán") == 1);
  const Clip* clip = reloaded.find_clip("c09");
  REQUIRE(clip != nullptr);
  CHECK(clip->end_s == 50.0);
  fs::remove(snap);
}
