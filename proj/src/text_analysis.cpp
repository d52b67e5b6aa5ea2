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

#include "adeval/text_analysis.hpp"

#include <algorithm>
#include <cctype>

#include "adeval/unicode.hpp"

namespace adeval::text {
namespace {

bool is_ascii_alnum(char32_t cp) {
  return (cp >= U'0' && cp <= U'9') || (cp >= U'a' && cp <= U'z') ||
         (cp >= U'A' && cp <= U'Z');
}

bool is_word_cp(char32_t cp) {
  // Non-ASCII codepoints (accented letters, combining marks) stay inside
  // words so "Müller" is one token whether precomposed or decomposed.
  return is_ascii_alnum(cp) || cp >= 0x80;
}

bool is_space_cp(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' ||
         cp == U'\f' || cp == U'\v' || cp == 0x00A0;
}

bool is_joiner_cp(char32_t cp) {
  return cp == U'\'' || cp == 0x2019 || cp == U'-';
}

bool starts_upper(const std::string& surface) {
  const auto cps = uni::decode_utf8(surface);
  if (cps.empty()) return false;
  return uni::is_upper_letter(cps[0].cp);
}

bool is_sentence_end(const Token& t) {
  return !t.is_word &&
         (t.surface == "." || t.surface == "!" || t.surface == "?");
}

}  // namespace

const char* tag_name(Tag t) {
  switch (t) {
    case Tag::kPronoun: return "pronoun";
    case Tag::kProperNoun: return "proper_noun";
    case Tag::kNoun: return "noun";
    case Tag::kVerb: return "verb";
    case Tag::kOther: return "other";
  }
  return "other";
}

Lexicons Lexicons::defaults() {
  Lexicons lex;
  lex.pronouns = {"he",  "she",  "him",  "her", "his", "hers",
                  "they", "them", "their", "it",  "its"};
  lex.stopwords = {
      "a",    "an",   "and",  "as",    "at",   "be",    "been",  "but",
      "by",   "for",  "from", "here",  "if",   "in",    "into",  "is",
      "are",  "was",  "were", "of",    "off",  "on",    "or",    "out",
      "over", "so",   "that", "the",   "then", "there", "these", "this",
      "those", "to",  "too",  "under", "up",   "while", "with",  "now",
      "just", "not",  "no",   "down",  "near", "after", "before"};
  return lex;
}

std::vector<Token> tokenize(std::string_view text) {
  const auto cps = uni::decode_utf8(text);
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = cps.size();
  while (i < n) {
    if (is_space_cp(cps[i].cp)) {
      ++i;
      continue;
    }
    if (is_word_cp(cps[i].cp)) {
      std::size_t j = i + 1;
      while (j < n) {
        if (is_word_cp(cps[j].cp)) {
          ++j;
        } else if (is_joiner_cp(cps[j].cp) && j + 1 < n &&
                   is_word_cp(cps[j + 1].cp)) {
          j += 2;
        } else {
          break;
        }
      }
      Token t;
      t.begin = cps[i].begin;
      t.end = cps[j - 1].end;
      t.surface.assign(text.substr(t.begin, t.end - t.begin));
      t.norm = uni::fold(t.surface);
      if (t.norm.empty()) t.norm = t.surface;
      t.is_word = true;
      out.push_back(std::move(t));
      i = j;
    } else {
      Token t;
      t.begin = cps[i].begin;
      t.end = cps[i].end;
      t.surface.assign(text.substr(t.begin, t.end - t.begin));
      t.norm = t.surface;
      t.is_word = false;
      out.push_back(std::move(t));
      ++i;
    }
  }
  return out;
}

RosterIndex::RosterIndex(const std::set<std::string>& names) {
  for (const auto& name : names) {
    std::vector<std::string> folded;
    for (const auto& tok : tokenize(name)) {
      if (tok.is_word) folded.push_back(tok.norm);
    }
    if (folded.empty()) continue;
    for (const auto& t : folded) token_set_.insert(t);
    by_surname_[folded.back()].push_back(name);
    sequences_.emplace_back(name, std::move(folded));
  }
  for (auto& [surname, list] : by_surname_) std::sort(list.begin(), list.end());
}

bool RosterIndex::has_token(const std::string& folded) const {
  return token_set_.count(folded) > 0;
}

const std::vector<std::string>* RosterIndex::names_for_surname(
    const std::string& folded) const {
  auto it = by_surname_.find(folded);
  return it == by_surname_.end() ? nullptr : &it->second;
}

std::string lemmatize(const std::string& w, const ActionLexicon& lexicon) {
  if (lexicon.lemma_known(w)) return w;
  std::vector<std::string> candidates;
  const std::size_t n = w.size();
  auto undouble = [](const std::string& s) -> std::string {
    if (s.size() >= 2 && s[s.size() - 1] == s[s.size() - 2]) {
      return s.substr(0, s.size() - 1);
    }
    return {};
  };
  if (n > 4 && w.ends_with("ing")) {
    const std::string stem = w.substr(0, n - 3);
    candidates.push_back(stem);
    candidates.push_back(stem + "e");
    if (auto u = undouble(stem); !u.empty()) candidates.push_back(u);
  }
  if (n > 3 && w.ends_with("ies")) {
    candidates.push_back(w.substr(0, n - 3) + "y");
  }
  if (n > 3 && w.ends_with("ied")) {
    candidates.push_back(w.substr(0, n - 3) + "y");
  }
  if (n > 3 && w.ends_with("ed")) {
    const std::string stem = w.substr(0, n - 2);
    candidates.push_back(stem);
    candidates.push_back(stem + "e");
    if (auto u = undouble(stem); !u.empty()) candidates.push_back(u);
  }
  if (n > 2 && w.ends_with("es")) {
    candidates.push_back(w.substr(0, n - 2));
  }
  if (n > 1 && w.ends_with("s") && !w.ends_with("ss")) {
    candidates.push_back(w.substr(0, n - 1));
  }
  for (const auto& c : candidates) {
    if (lexicon.lemma_known(c)) return c;
  }
  return w;
}

std::vector<TaggedToken> pos_tag(const std::vector<Token>& tokens,
                                 const RosterIndex& roster,
                                 const ActionLexicon& lexicon,
                                 const Lexicons& lexicons) {
  std::vector<TaggedToken> out;
  out.reserve(tokens.size());
  bool sentence_start = true;
  for (const auto& tok : tokens) {
    TaggedToken tt;
    tt.token = tok;
    if (!tok.is_word) {
      tt.tag = Tag::kOther;
      out.push_back(std::move(tt));
      if (is_sentence_end(tok)) sentence_start = true;
      continue;
    }
    const std::string& norm = tok.norm;
    if (lexicons.pronouns.count(norm)) {
      tt.tag = Tag::kPronoun;
    } else if (roster.has_token(norm)) {
      tt.tag = Tag::kProperNoun;
    } else if (lemmatize(norm, lexicon) != norm || lexicon.lemma_known(norm)) {
      tt.tag = Tag::kVerb;
    } else if (starts_upper(tok.surface) && !sentence_start) {
      tt.tag = Tag::kProperNoun;
    } else if (lexicons.stopwords.count(norm)) {
      tt.tag = Tag::kOther;
    } else if (std::all_of(norm.begin(), norm.end(), [](unsigned char c) {
                 return std::isdigit(c) != 0;
               })) {
      tt.tag = Tag::kOther;
    } else {
      tt.tag = Tag::kNoun;
    }
    out.push_back(std::move(tt));
    sentence_start = false;
  }
  return out;
}

NameMatches match_player_names(const std::vector<TaggedToken>& tagged,
                               const RosterIndex& roster,
                               bool full_name_only) {
  NameMatches result;
  if (roster.empty()) return result;

  std::vector<std::string> word_norms;  // all word tokens, in order
  std::set<std::string> noun_norms;     // ProperNoun/Noun tokens only
  for (const auto& tt : tagged) {
    if (!tt.token.is_word) continue;
    word_norms.push_back(tt.token.norm);
    if (tt.tag == Tag::kProperNoun || tt.tag == Tag::kNoun) {
      noun_norms.insert(tt.token.norm);
    }
  }

  // Full-name sequences match over consecutive word tokens.
  for (const auto& [name, seq] : roster.sequences()) {
    if (seq.size() > word_norms.size()) continue;
    for (std::size_t i = 0; i + seq.size() <= word_norms.size(); ++i) {
      if (std::equal(seq.begin(), seq.end(), word_norms.begin() + i)) {
        result.names.insert(name);
        break;
      }
    }
  }
  if (full_name_only) return result;

  for (const auto& norm : noun_norms) {
    const auto* names = roster.names_for_surname(norm);
    if (!names) continue;
    for (const auto& n : *names) result.names.insert(n);
    if (names->size() > 1) result.ambiguous_surnames.insert(norm);
  }
  return result;
}

std::set<std::string> match_actions(const std::vector<TaggedToken>& tagged,
                                    const ActionLexicon& lexicon,
                                    const std::set<std::string>& detected,
                                    ActionMatchMode mode) {
  std::set<std::string> verb_lemmas;
  for (const auto& tt : tagged) {
    if (tt.tag == Tag::kVerb) {
      verb_lemmas.insert(lemmatize(tt.token.norm, lexicon));
    }
  }
  std::set<std::string> matched;
  for (const auto& [label, lemmas] : lexicon.entries()) {
    for (const auto& lemma : lemmas) {
      if (verb_lemmas.count(lemma)) {
        matched.insert(label);
        break;
      }
    }
  }
  if (mode == ActionMatchMode::kStrict && !detected.empty()) {
    std::set<std::string> restricted;
    for (const auto& label : matched) {
      if (detected.count(label)) restricted.insert(label);
    }
    return restricted;
  }
  return matched;
}

std::size_t lcs_length(const std::vector<std::string>& a,
                       const std::vector<std::string>& b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = (a[i - 1] == b[j - 1]) ? prev[j - 1] + 1
                                      : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

namespace {

std::size_t lcs_length_cps(const std::vector<uni::Codepoint>& a,
                           const std::vector<uni::Codepoint>& b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = (a[i - 1].cp == b[j - 1].cp) ? prev[j - 1] + 1
                                            : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

double levenshtein_ratio(std::string_view a, std::string_view b) {
  const std::string fa = uni::fold(a);
  const std::string fb = uni::fold(b);
  const auto ca = uni::decode_utf8(fa);
  const auto cb = uni::decode_utf8(fb);
  const std::size_t total = ca.size() + cb.size();
  if (total == 0) return 1.0;
  // With insert/delete at cost 1 and substitution at 2, the distance is
  // |a|+|b|-2*LCS, so the normalized similarity reduces to 2*LCS/(|a|+|b|).
  const std::size_t lcs = lcs_length_cps(ca, cb);
  return static_cast<double>(2 * lcs) / static_cast<double>(total);
}

}  // namespace adeval::text
