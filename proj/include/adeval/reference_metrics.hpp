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
// Reference-based baselines and correlation statistics used to compare the
// reference-free scores against ground-truth ADs.

#ifndef ADEVAL_REFERENCE_METRICS_HPP_
#define ADEVAL_REFERENCE_METRICS_HPP_

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adeval/text_analysis.hpp"

namespace adeval::metrics {

// Folded word tokens (punctuation dropped); the token form every metric in
// this header operates on.
std::vector<std::string> word_norms(std::string_view text);

struct RougeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;
};

// LCS-based F-measure: P = LCS/|cand|, R = LCS/|ref|,
// F = (1+b^2)PR / (R + b^2 P); 0 whenever the LCS is empty. The reference
// must be non-empty.
RougeScore rouge_l(const std::vector<std::string>& candidate,
                   const std::vector<std::string>& reference,
                   double beta = 1.0);

// Per clip: a list of reference token sequences.
using ReferenceCorpus = std::map<std::string, std::vector<std::vector<std::string>>>;

// Consensus TF-IDF n-gram similarity, n = 1..4, scaled by 10: for each n the
// cosine between the candidate's and each reference's TF-IDF n-gram vectors
// is averaged over references, then averaged over n. Document frequencies
// come from the reference corpus (one document per clip). No length
// penalty is applied.
class CiderScorer {
 public:
  explicit CiderScorer(const ReferenceCorpus& corpus, int max_n = 4,
                       double scale = 10.0);

  double score(const std::vector<std::string>& candidate,
               const std::vector<std::vector<std::string>>& references) const;

 private:
  std::map<std::string, double> idf_;
  double unseen_idf_ = 0.0;
  int max_n_;
  double scale_;
};

struct CiderResult {
  std::map<std::string, double> per_clip;
  double corpus_mean = 0.0;
};

// Scores each candidate against its own references; IDF statistics come
// from `corpus` (pass `references` again for the usual self-corpus setup).
CiderResult cider(const std::map<std::string, std::vector<std::string>>& candidates,
                  const ReferenceCorpus& references,
                  const ReferenceCorpus& corpus);

// Sample Pearson correlation. Requires equal lengths, n >= 2 and non-zero
// variance on both sides.
double pearson(std::span<const double> x, std::span<const double> y);

// Kendall tau-b with tie correction. Requires equal lengths, n >= 2 and at
// least one untied pair on each side.
double kendall_tau(std::span<const double> x, std::span<const double> y);

// IoU of content-word sets (stopwords removed, fold-normalized). Two empty
// sets count as identical: 1.0.
double token_set_iou(std::string_view a, std::string_view b,
                     const text::Lexicons& lexicons = text::Lexicons::defaults());

}  // namespace adeval::metrics

#endif  // ADEVAL_REFERENCE_METRICS_HPP_
