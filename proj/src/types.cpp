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

#include "adeval/types.hpp"

#include "adeval/error.hpp"
#include "adeval/unicode.hpp"

namespace adeval {

const char* team_name(Team t) { return t == Team::kHome ? "home" : "away"; }

std::optional<Team> parse_team(const std::string& s) {
  if (s == "home") return Team::kHome;
  if (s == "away") return Team::kAway;
  return std::nullopt;
}

ActionLexicon::ActionLexicon(
    std::map<std::string, std::vector<std::string>> entries)
    : entries_(std::move(entries)) {
  for (auto& [label, lemmas] : entries_) {
    if (label.empty()) throw DataError("action lexicon: empty label");
    for (auto& lemma : lemmas) {
      if (lemma.empty()) {
        throw DataError("action lexicon: empty lemma under label '" + label +
                        "'");
      }
      lemma = uni::fold(lemma);  // stored lemmas are always in fold form
      all_lemmas_.insert(lemma);
    }
  }
}

ActionLexicon ActionLexicon::default_lexicon() {
  return ActionLexicon{{
      {"Ball out of play", {"clear", "hoof", "shepherd"}},
      {"Corner", {"whip", "swing", "deliver"}},
      {"Foul", {"foul", "trip", "hack"}},
      {"Free-kick", {"strike", "curl", "float"}},
      {"Goal", {"score", "net", "convert", "finish", "equalise"}},
      {"Pass", {"pass", "cross", "feed", "thread"}},
      {"Red card", {"dismiss", "send"}},
      {"Save", {"save", "parry", "deny"}},
      {"Shot", {"shoot", "fire", "blast", "head", "volley"}},
      {"Yellow card", {"book", "caution"}},
  }};
}

bool ActionLexicon::has_label(const std::string& label) const {
  return entries_.count(label) > 0;
}

const std::vector<std::string>* ActionLexicon::lemmas_for(
    const std::string& label) const {
  auto it = entries_.find(label);
  return it == entries_.end() ? nullptr : &it->second;
}

bool ActionLexicon::lemma_known(const std::string& lemma) const {
  return all_lemmas_.count(lemma) > 0;
}

}  // namespace adeval
