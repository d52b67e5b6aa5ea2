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
// Reference-free AD scoring (ARGE-AD). Five per-clip checks, each 0 or 1
// under the default configuration:
//   z_p  players correctly identified (roster match)
//   z_a  a lexicon action verb is used (optionally restricted to detected
//        actions)
//   z_l  the AD fits within the clip duration
//   z_pr players are not referred to only by pronouns
//   z_o  the AD is not a near-copy of the commentary (indel ratio < 0.5)
// The clip score averages the five; the corpus score averages the clips,
// so it also equals the mean of the per-component means.

#ifndef ADEVAL_ARGE_AD_HPP_
#define ADEVAL_ARGE_AD_HPP_

#include <array>
#include <string>
#include <vector>

#include "adeval/duration.hpp"
#include "adeval/store.hpp"
#include "adeval/text_analysis.hpp"
#include "adeval/types.hpp"

namespace adeval {

struct ScoringConfig {
  // Lenient: any lexicon action verb scores; strict: the verb must name a
  // detected action when detections exist.
  text::ActionMatchMode action_mode = text::ActionMatchMode::kLenient;
  // Literal reading of the player check: every Noun/ProperNoun token must
  // be a roster token, not just one.
  bool all_nouns = false;
  // Require full name sequences instead of surname tokens.
  bool full_name_only = false;
  // Graded z_p/z_a: fraction of context players mentioned and of detected
  // actions covered, instead of binary hits.
  bool graded = false;
  // Abort instead of skipping candidates whose clip_id is unknown.
  bool unknown_clip_fatal = false;
  // Component weights (z_p, z_a, z_l, z_pr, z_o); normalized by their sum.
  std::array<double, 5> weights = {1.0, 1.0, 1.0, 1.0, 1.0};
  text::Lexicons lexicons = text::Lexicons::defaults();
};

struct ComponentScores {
  double z_p = 0.0;
  double z_a = 0.0;
  double z_l = 0.0;
  double z_pr = 0.0;
  double z_o = 0.0;
};

struct ClipDiagnostics {
  std::vector<std::string> matched_players;
  std::vector<std::string> ambiguous_surnames;
  std::vector<std::string> matched_actions;
  double estimated_duration_s = 0.0;
  bool measured_duration_used = false;
  double clip_duration_s = 0.0;
  double commentary_ratio = 0.0;
};

struct ClipEvaluation {
  std::string clip_id;
  std::string source;
  ComponentScores z;
  double score = 0.0;
  ClipDiagnostics diag;
};

struct SkippedCandidate {
  std::string clip_id;
  std::string reason;
};

struct CorpusReport {
  std::size_t clip_count = 0;
  double corpus_score = 0.0;  // undefined when clip_count == 0
  ComponentScores component_means;
  std::vector<ClipEvaluation> clips;  // sorted by (clip_id, ad text)
  std::vector<SkippedCandidate> skipped;
};

struct PlayerScore {
  double z_p = 0.0;
  text::NameMatches matches;
};

// z_p: any roster match by default; all_nouns additionally requires every
// Noun/ProperNoun token to be a roster token. Empty AD scores 0.
PlayerScore score_players(const std::vector<text::TaggedToken>& tagged,
                          const text::RosterIndex& roster,
                          const ScoringConfig& config);

struct ActionScore {
  double z_a = 0.0;
  std::set<std::string> matched;
};

ActionScore score_actions(const std::vector<text::TaggedToken>& tagged,
                          const ActionLexicon& lexicon,
                          const std::set<std::string>& detected,
                          const ScoringConfig& config);

struct LengthScore {
  double z_l = 0.0;
  double estimated_s = 0.0;
  bool measured_used = false;
};

// z_l == 1 iff the spoken-duration estimate fits the clip. The clip
// duration must be positive.
LengthScore score_length(const std::string& ad_text, const Clip& clip,
                         const DurationProvider& provider);

// z_pr == 0 iff a pronoun token occurs and no roster name is matched.
double score_pronouns(const std::vector<text::TaggedToken>& tagged,
                      const text::NameMatches& matches);

struct OriginalityScore {
  double z_o = 0.0;
  double ratio = 0.0;
};

// z_o == 1 iff the indel ratio against the commentary is below 0.5; an
// empty commentary cannot be plagiarized, so it always scores 1.
OriginalityScore score_originality(const std::string& ad_text,
                                   const std::string& commentary);

ClipEvaluation evaluate_clip(const Candidate& candidate, const Clip& clip,
                             const ClipContext& context,
                             const text::RosterIndex& roster,
                             const ActionLexicon& lexicon,
                             const ScoringConfig& config,
                             const DurationProvider& provider);

// Scores every candidate with a known clip. Unknown clip_ids are skipped
// with a reason (or abort when configured fatal). The result is sorted and
// independent of candidate order.
CorpusReport evaluate_corpus(const std::vector<Candidate>& candidates,
                             const Store& store, const ScoringConfig& config,
                             const DurationProvider& provider);

}  // namespace adeval

#endif  // ADEVAL_ARGE_AD_HPP_
