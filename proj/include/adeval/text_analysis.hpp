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
// Deterministic text analysis for AD scoring: tokenizer, rule-based POS
// tagger, roster and action matching, and the indel edit-distance ratio.
// No statistical models; every decision is reproducible from the inputs.

#ifndef ADEVAL_TEXT_ANALYSIS_HPP_
#define ADEVAL_TEXT_ANALYSIS_HPP_

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "adeval/types.hpp"

namespace adeval::text {

struct Token {
  std::string surface;
  std::string norm;    // folded form; equals surface for punctuation
  std::size_t begin;   // byte offset into the source text
  std::size_t end;     // one past the last byte
  bool is_word;
};

enum class Tag { kPronoun, kProperNoun, kNoun, kVerb, kOther };

const char* tag_name(Tag t);

struct TaggedToken {
  Token token;
  Tag tag = Tag::kOther;
};

// Configurable word lists. Defaults cover English AD text.
struct Lexicons {
  std::set<std::string> pronouns;
  std::set<std::string> stopwords;

  static Lexicons defaults();
};

// Tokens cover every non-whitespace byte, in order, without overlap. Word
// tokens are maximal alnum runs; apostrophes and hyphens join a word only
// between alnum characters. Each other printable character is its own token.
std::vector<Token> tokenize(std::string_view text);

// Roster names prepared for matching: folded tokens, surname index and
// full-name sequences. Built once per game, reused across clips.
class RosterIndex {
 public:
  RosterIndex() = default;
  explicit RosterIndex(const std::set<std::string>& names);

  bool has_token(const std::string& folded) const;
  // Names whose surname (last token) folds to `folded`.
  const std::vector<std::string>* names_for_surname(const std::string& folded) const;
  const std::vector<std::pair<std::string, std::vector<std::string>>>&
  sequences() const {
    return sequences_;
  }
  bool empty() const { return sequences_.empty(); }

 private:
  std::set<std::string> token_set_;
  std::map<std::string, std::vector<std::string>> by_surname_;
  // (original name, folded token sequence)
  std::vector<std::pair<std::string, std::vector<std::string>>> sequences_;
};

// Tag precedence: Pronoun, roster ProperNoun, Verb, then capitalization
// heuristics. Same tokens, roster and lexicons always give the same tags.
std::vector<TaggedToken> pos_tag(const std::vector<Token>& tokens,
                                 const RosterIndex& roster,
                                 const ActionLexicon& lexicon,
                                 const Lexicons& lexicons);

struct NameMatches {
  std::set<std::string> names;               // matched roster names
  std::set<std::string> ambiguous_surnames;  // folded surnames shared by >1 player

  bool empty() const { return names.empty(); }
};

// Default mode: a roster name matches when its surname token appears among
// ProperNoun/Noun tokens or its full token sequence appears consecutively.
// full_name_only restricts matching to full sequences. A surname shared by
// several roster players matches all of them and is flagged ambiguous.
NameMatches match_player_names(const std::vector<TaggedToken>& tagged,
                               const RosterIndex& roster,
                               bool full_name_only = false);

enum class ActionMatchMode { kLenient, kStrict };

// Labels whose verb lemmas intersect the lemmatized Verb tokens. In strict
// mode a non-empty `detected` set restricts the result to those labels.
std::set<std::string> match_actions(const std::vector<TaggedToken>& tagged,
                                    const ActionLexicon& lexicon,
                                    const std::set<std::string>& detected,
                                    ActionMatchMode mode = ActionMatchMode::kStrict);

// Strips -s/-es/-ies/-ied/-ed/-ing with e-restoration and consonant
// undoubling, longest suffix first; returns the first candidate the lexicon
// knows, else the word unchanged. Every rule strictly shortens the word.
std::string lemmatize(const std::string& folded_word, const ActionLexicon& lexicon);

// LCS length over token sequences.
std::size_t lcs_length(const std::vector<std::string>& a,
                       const std::vector<std::string>& b);

// Indel similarity on folded text: insertions and deletions cost 1,
// substitution 2, so ratio == 2*LCS/(|a|+|b|) at character level. Symmetric,
// in [0,1], and 1 exactly when the folded strings are equal.
double levenshtein_ratio(std::string_view a, std::string_view b);

}  // namespace adeval::text

#endif  // ADEVAL_TEXT_ANALYSIS_HPP_
