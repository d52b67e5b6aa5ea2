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

#include "adeval/arge_ad.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "adeval/error.hpp"

namespace adeval {
namespace {

constexpr double kOriginalityThreshold = 0.5;

double binary(bool b) { return b ? 1.0 : 0.0; }

}  // namespace

PlayerScore score_players(const std::vector<text::TaggedToken>& tagged,
                          const text::RosterIndex& roster,
                          const ScoringConfig& config) {
  PlayerScore out;
  out.matches = text::match_player_names(tagged, roster, config.full_name_only);
  if (config.all_nouns) {
    bool all_match = true;
    for (const auto& tt : tagged) {
      if (tt.tag != text::Tag::kProperNoun && tt.tag != text::Tag::kNoun)
        continue;
      if (!roster.has_token(tt.token.norm)) {
        all_match = false;
        break;
      }
    }
    out.z_p = binary(all_match && !out.matches.empty());
    return out;
  }
  out.z_p = binary(!out.matches.empty());
  return out;
}

ActionScore score_actions(const std::vector<text::TaggedToken>& tagged,
                          const ActionLexicon& lexicon,
                          const std::set<std::string>& detected,
                          const ScoringConfig& config) {
  ActionScore out;
  out.matched = text::match_actions(tagged, lexicon, detected,
                                    config.action_mode);
  out.z_a = binary(!out.matched.empty());
  return out;
}

LengthScore score_length(const std::string& ad_text, const Clip& clip,
                         const DurationProvider& provider) {
  if (!(clip.duration_s() > 0.0)) {
    throw DataError("clip '" + clip.clip_id + "' has non-positive duration");
  }
  LengthScore out;
  out.estimated_s = provider.duration_for(clip.clip_id, ad_text);
  out.measured_used = provider.has_measured(clip.clip_id);
  out.z_l = binary(out.estimated_s <= clip.duration_s());
  return out;
}

double score_pronouns(const std::vector<text::TaggedToken>& tagged,
                      const text::NameMatches& matches) {
  bool has_pronoun = false;
  for (const auto& tt : tagged) {
    if (tt.tag == text::Tag::kPronoun) {
      has_pronoun = true;
      break;
    }
  }
  return binary(!(has_pronoun && matches.empty()));
}

OriginalityScore score_originality(const std::string& ad_text,
                                   const std::string& commentary) {
  OriginalityScore out;
  out.ratio = text::levenshtein_ratio(ad_text, commentary);
  out.z_o = commentary.empty()
                ? 1.0
                : binary(out.ratio < kOriginalityThreshold);
  return out;
}

ClipEvaluation evaluate_clip(const Candidate& candidate, const Clip& clip,
                             const ClipContext& context,
                             const text::RosterIndex& roster,
                             const ActionLexicon& lexicon,
                             const ScoringConfig& config,
                             const DurationProvider& provider) {
  ClipEvaluation ev;
  ev.clip_id = candidate.clip_id;
  ev.source = candidate.source;

  const auto tokens = text::tokenize(candidate.ad_text);
  const auto tagged = text::pos_tag(tokens, roster, lexicon, config.lexicons);

  const PlayerScore players = score_players(tagged, roster, config);
  std::set<std::string> detected;
  for (const auto& evn : context.actions) detected.insert(evn.label);
  const ActionScore actions = score_actions(tagged, lexicon, detected, config);
  const LengthScore length = score_length(candidate.ad_text, clip, provider);
  const double z_pr = score_pronouns(tagged, players.matches);
  const OriginalityScore originality =
      score_originality(candidate.ad_text, context.commentary);

  ev.z.z_p = players.z_p;
  ev.z.z_a = actions.z_a;
  if (config.graded) {
    if (!context.players.empty()) {
      std::size_t mentioned = 0;
      for (const auto& name : context.players) {
        if (players.matches.names.count(name)) ++mentioned;
      }
      ev.z.z_p = static_cast<double>(mentioned) /
                 static_cast<double>(context.players.size());
    }
    if (!detected.empty()) {
      std::size_t covered = 0;
      for (const auto& label : detected) {
        if (actions.matched.count(label)) ++covered;
      }
      ev.z.z_a = static_cast<double>(covered) /
                 static_cast<double>(detected.size());
    }
  }
  ev.z.z_l = length.z_l;
  ev.z.z_pr = z_pr;
  ev.z.z_o = originality.z_o;

  double weight_sum = 0.0;
  for (double w : config.weights) {
    if (w < 0.0) throw UsageError("component weights must be non-negative");
    weight_sum += w;
  }
  if (weight_sum <= 0.0) {
    throw UsageError("component weights must not all be zero");
  }
  const std::array<double, 5> zs = {ev.z.z_p, ev.z.z_a, ev.z.z_l, ev.z.z_pr,
                                    ev.z.z_o};
  double acc = 0.0;
  for (std::size_t i = 0; i < zs.size(); ++i) acc += config.weights[i] * zs[i];
  ev.score = acc / weight_sum;

  ev.diag.matched_players.assign(players.matches.names.begin(),
                                 players.matches.names.end());
  ev.diag.ambiguous_surnames.assign(players.matches.ambiguous_surnames.begin(),
                                    players.matches.ambiguous_surnames.end());
  ev.diag.matched_actions.assign(actions.matched.begin(),
                                 actions.matched.end());
  ev.diag.estimated_duration_s = length.estimated_s;
  ev.diag.measured_duration_used = length.measured_used;
  ev.diag.clip_duration_s = clip.duration_s();
  ev.diag.commentary_ratio = originality.ratio;
  return ev;
}

CorpusReport evaluate_corpus(const std::vector<Candidate>& candidates,
                             const Store& store, const ScoringConfig& config,
                             const DurationProvider& provider) {
  CorpusReport report;
  std::map<std::string, text::RosterIndex> roster_cache;
  static const ClipContext kEmptyContext{};

  // Sort a copy so the result never depends on candidate order.
  std::vector<Candidate> ordered = candidates;
  std::sort(ordered.begin(), ordered.end(),
            [](const Candidate& a, const Candidate& b) {
              return std::tie(a.clip_id, a.ad_text) <
                     std::tie(b.clip_id, b.ad_text);
            });

  for (const auto& cand : ordered) {
    const Clip* clip = store.find_clip(cand.clip_id);
    if (!clip) {
      if (config.unknown_clip_fatal) {
        throw DataError("candidate references unknown clip_id '" +
                        cand.clip_id + "'");
      }
      report.skipped.push_back({cand.clip_id, "unknown clip_id"});
      continue;
    }
    auto rit = roster_cache.find(clip->game_id);
    if (rit == roster_cache.end()) {
      rit = roster_cache
                .emplace(clip->game_id,
                         text::RosterIndex(store.roster_names(clip->game_id)))
                .first;
    }
    const ClipContext* ctx = store.context_for(cand.clip_id);
    report.clips.push_back(evaluate_clip(cand, *clip,
                                         ctx ? *ctx : kEmptyContext,
                                         rit->second, store.lexicon(), config,
                                         provider));
  }

  report.clip_count = report.clips.size();
  if (report.clip_count > 0) {
    double score_sum = 0.0;
    ComponentScores sums;
    for (const auto& ev : report.clips) {
      score_sum += ev.score;
      sums.z_p += ev.z.z_p;
      sums.z_a += ev.z.z_a;
      sums.z_l += ev.z.z_l;
      sums.z_pr += ev.z.z_pr;
      sums.z_o += ev.z.z_o;
    }
    const double n = static_cast<double>(report.clip_count);
    report.corpus_score = score_sum / n;
    report.component_means = {sums.z_p / n, sums.z_a / n, sums.z_l / n,
                              sums.z_pr / n, sums.z_o / n};
  }
  return report;
}

}  // namespace adeval
