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

#include "adeval/reference_metrics.hpp"

#include <cmath>
#include <set>

#include "adeval/error.hpp"

namespace adeval::metrics {
namespace {

// n-gram key: tokens joined with an unlikely separator byte.
std::string ngram_key(const std::vector<std::string>& toks, std::size_t i,
                      std::size_t n) {
  std::string key;
  for (std::size_t k = 0; k < n; ++k) {
    if (k) key.push_back('\x1f');
    key += toks[i + k];
  }
  return key;
}

using Counts = std::map<std::string, double>;

Counts ngram_counts(const std::vector<std::string>& toks, std::size_t n) {
  Counts counts;
  if (toks.size() >= n) {
    for (std::size_t i = 0; i + n <= toks.size(); ++i) {
      counts[ngram_key(toks, i, n)] += 1.0;
    }
  }
  return counts;
}

}  // namespace

std::vector<std::string> word_norms(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& tok : text::tokenize(text)) {
    if (tok.is_word) out.push_back(tok.norm);
  }
  return out;
}

RougeScore rouge_l(const std::vector<std::string>& candidate,
                   const std::vector<std::string>& reference, double beta) {
  if (reference.empty()) {
    throw DataError("rouge_l: empty reference");
  }
  RougeScore score;
  const std::size_t lcs = text::lcs_length(candidate, reference);
  if (lcs == 0) return score;
  score.precision =
      static_cast<double>(lcs) / static_cast<double>(candidate.size());
  score.recall =
      static_cast<double>(lcs) / static_cast<double>(reference.size());
  const double b2 = beta * beta;
  score.f = (1.0 + b2) * score.precision * score.recall /
            (score.recall + b2 * score.precision);
  return score;
}

CiderScorer::CiderScorer(const ReferenceCorpus& corpus, int max_n, double scale)
    : max_n_(max_n), scale_(scale) {
  if (corpus.empty()) {
    throw DataError("cider: empty reference corpus");
  }
  std::map<std::string, std::size_t> df;
  for (const auto& [clip_id, refs] : corpus) {
    std::set<std::string> present;  // each clip counts once per n-gram
    for (const auto& ref : refs) {
      for (int n = 1; n <= max_n_; ++n) {
        for (const auto& [key, cnt] : ngram_counts(ref, n)) present.insert(key);
      }
    }
    for (const auto& key : present) ++df[key];
  }
  const double num_docs = static_cast<double>(corpus.size());
  for (const auto& [key, count] : df) {
    idf_[key] = std::log(num_docs / static_cast<double>(count));
  }
  // n-grams never seen in the corpus get the maximal weight.
  unseen_idf_ = std::log(num_docs);
}

double CiderScorer::score(
    const std::vector<std::string>& candidate,
    const std::vector<std::vector<std::string>>& references) const {
  if (references.empty()) {
    throw DataError("cider: candidate has no references");
  }
  auto idf_of = [this](const std::string& key) {
    auto it = idf_.find(key);
    return it == idf_.end() ? unseen_idf_ : it->second;
  };
  auto weighted = [&](const std::vector<std::string>& toks, int n) {
    Counts vec = ngram_counts(toks, static_cast<std::size_t>(n));
    for (auto& [key, value] : vec) value *= idf_of(key);
    return vec;
  };

  double total = 0.0;
  for (int n = 1; n <= max_n_; ++n) {
    const Counts cand_vec = weighted(candidate, n);
    double cand_norm = 0.0;
    for (const auto& [key, v] : cand_vec) cand_norm += v * v;
    cand_norm = std::sqrt(cand_norm);

    double ref_avg = 0.0;
    for (const auto& ref : references) {
      const Counts ref_vec = weighted(ref, n);
      double ref_norm = 0.0;
      for (const auto& [key, v] : ref_vec) ref_norm += v * v;
      ref_norm = std::sqrt(ref_norm);
      if (cand_norm == 0.0 || ref_norm == 0.0) continue;
      double dot = 0.0;
      for (const auto& [key, v] : cand_vec) {
        auto it = ref_vec.find(key);
        if (it != ref_vec.end()) dot += v * it->second;
      }
      ref_avg += dot / (cand_norm * ref_norm);
    }
    total += ref_avg / static_cast<double>(references.size());
  }
  return total * scale_ / static_cast<double>(max_n_);
}

CiderResult cider(
    const std::map<std::string, std::vector<std::string>>& candidates,
    const ReferenceCorpus& references, const ReferenceCorpus& corpus) {
  CiderScorer scorer(corpus);
  CiderResult result;
  double sum = 0.0;
  for (const auto& [clip_id, cand] : candidates) {
    auto it = references.find(clip_id);
    if (it == references.end()) {
      throw DataError("cider: no references for clip '" + clip_id + "'");
    }
    const double s = scorer.score(cand, it->second);
    result.per_clip.emplace(clip_id, s);
    sum += s;
  }
  if (!result.per_clip.empty()) {
    result.corpus_mean = sum / static_cast<double>(result.per_clip.size());
  }
  return result;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw DataError("pearson: series length mismatch");
  }
  const std::size_t n = x.size();
  if (n < 2) throw DataError("pearson: need at least 2 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw DataError("pearson: zero-variance input");
  }
  return sxy / std::sqrt(sxx * syy);
}

double kendall_tau(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw DataError("kendall_tau: series length mismatch");
  }
  const std::size_t n = x.size();
  if (n < 2) throw DataError("kendall_tau: need at least 2 points");
  // tau-b: sum of sign products over pairs, normalized by the untied pair
  // counts on each side; equivalent to (C - D)/sqrt((n0-n1)(n0-n2)).
  long long num = 0;
  long long untied_x = 0, untied_y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      const int sx = (dx > 0) - (dx < 0);
      const int sy = (dy > 0) - (dy < 0);
      num += sx * sy;
      untied_x += sx != 0;
      untied_y += sy != 0;
    }
  }
  if (untied_x == 0 || untied_y == 0) {
    throw DataError("kendall_tau: all pairs tied on one side");
  }
  return static_cast<double>(num) /
         std::sqrt(static_cast<double>(untied_x) *
                   static_cast<double>(untied_y));
}

double token_set_iou(std::string_view a, std::string_view b,
                     const text::Lexicons& lexicons) {
  auto content_set = [&lexicons](std::string_view text) {
    std::set<std::string> s;
    for (const auto& tok : text::tokenize(text)) {
      if (tok.is_word && !lexicons.stopwords.count(tok.norm)) {
        s.insert(tok.norm);
      }
    }
    return s;
  };
  const auto sa = content_set(a);
  const auto sb = content_set(b);
  if (sa.empty() && sb.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& t : sa) inter += sb.count(t);
  const std::size_t uni = sa.size() + sb.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace adeval::metrics
