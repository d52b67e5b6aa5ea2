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

#ifndef ADEVAL_TYPES_HPP_
#define ADEVAL_TYPES_HPP_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace adeval {

enum class Team { kHome, kAway };

const char* team_name(Team t);
std::optional<Team> parse_team(const std::string& s);

struct Game {
  std::string game_id;
  std::string season;
  std::string league;
  std::string home;
  std::string away;
};

struct Player {
  std::string game_id;
  Team team = Team::kHome;
  int jersey = 0;  // non-negative; unique per (game, team)
  std::string player_name;
};

struct Clip {
  std::string clip_id;
  std::string game_id;
  double start_s = 0.0;
  double end_s = 0.0;  // invariant: end_s > start_s

  double duration_s() const { return end_s - start_s; }
};

struct ActionEvent {
  std::string label;  // must resolve against the action lexicon
  double t_s = 0.0;   // absolute time within the game half
};

struct ClipContext {
  std::string clip_id;
  std::string commentary;              // may be empty
  std::vector<std::string> players;    // names detected in/near the clip
  std::vector<ActionEvent> actions;    // detected action events
  std::optional<std::string> previous_ad;
};

// label -> lowercase verb lemmas that realize the action in running text.
class ActionLexicon {
 public:
  ActionLexicon() = default;
  explicit ActionLexicon(std::map<std::string, std::vector<std::string>> entries);

  // The built-in lexicon covering the standard broadcast action classes.
  static ActionLexicon default_lexicon();

  bool has_label(const std::string& label) const;
  const std::vector<std::string>* lemmas_for(const std::string& label) const;
  const std::map<std::string, std::vector<std::string>>& entries() const {
    return entries_;
  }
  bool lemma_known(const std::string& lemma) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, std::vector<std::string>> entries_;
  std::set<std::string> all_lemmas_;
};

struct Candidate {
  std::string clip_id;
  std::string ad_text;
  std::string source;  // "model", "expert", ... informational
};

}  // namespace adeval

#endif  // ADEVAL_TYPES_HPP_
