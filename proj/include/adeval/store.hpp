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

#ifndef ADEVAL_STORE_HPP_
#define ADEVAL_STORE_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "adeval/types.hpp"

namespace adeval {

struct IngestPaths {
  std::filesystem::path games;
  std::filesystem::path rosters;
  std::filesystem::path clips;
  std::filesystem::path context;  // empty: no per-clip context rows
  std::filesystem::path lexicon;  // empty: use the built-in lexicon
};

struct StoreCounts {
  std::size_t games = 0;
  std::size_t players = 0;
  std::size_t clips = 0;
  std::size_t contexts = 0;
  std::size_t labels = 0;
};

// In-memory game/roster/clip/context repository. Immutable once built:
// every cross-reference is checked at ingest, names are stored
// NFC-composed, and all queries are read-only.
class Store {
 public:
  // Loads and validates the five inputs. Any malformed record, duplicate
  // key or dangling reference aborts with a diagnostic naming the file,
  // record and field.
  static Store ingest(const IngestPaths& paths);

  // Single-file archive. from_snapshot(save_snapshot(s)) reproduces the
  // store; re-serializing gives byte-identical output.
  static Store from_snapshot(const std::filesystem::path& path);
  void save_snapshot(const std::filesystem::path& path) const;
  std::string snapshot_string() const;

  struct GameFilter {
    std::optional<std::string> season;
    std::optional<std::string> league;
    std::optional<std::string> home;
    std::optional<std::string> away;
  };

  // Conjunctive filter over games; unset fields match everything.
  std::vector<Game> lookup_game(const GameFilter& filter) const;

  const Game* find_game(const std::string& game_id) const;
  const Clip* find_clip(const std::string& clip_id) const;
  const ClipContext* context_for(const std::string& clip_id) const;

  // All player names on either roster of the game. Unknown game_id is an
  // error.
  std::set<std::string> roster_names(const std::string& game_id) const;

  // The unique player, or nullopt when the jersey is unused. Unknown
  // game_id is an error.
  std::optional<Player> player_by_jersey(const std::string& game_id, Team team,
                                         int jersey) const;

  const std::vector<Game>& games() const { return games_; }
  const std::vector<Clip>& clips() const { return clips_; }
  const std::vector<Player>& players() const { return players_; }
  const ActionLexicon& lexicon() const { return lexicon_; }
  StoreCounts counts() const;

 private:
  Store() = default;
  void index_and_validate();

  std::vector<Game> games_;      // sorted by game_id
  std::vector<Player> players_;  // sorted by (game_id, team, jersey)
  std::vector<Clip> clips_;      // sorted by clip_id
  std::vector<ClipContext> contexts_;  // sorted by clip_id
  ActionLexicon lexicon_;

  std::map<std::string, std::size_t> game_index_;
  std::map<std::string, std::size_t> clip_index_;
  std::map<std::string, std::size_t> context_index_;
  std::map<std::string, std::set<std::string>> roster_names_;
};

}  // namespace adeval

#endif  // ADEVAL_STORE_HPP_
