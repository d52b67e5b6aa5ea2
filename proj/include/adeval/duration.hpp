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

#ifndef ADEVAL_DURATION_HPP_
#define ADEVAL_DURATION_HPP_

#include <map>
#include <string>
#include <string_view>

namespace adeval {

// Speaking-time estimate: words at a constant rate plus a fixed pause per
// sentence-ending mark (. ! ?). Deterministic and monotone in the text.
struct SpeechRateModel {
  double words_per_minute = 160.0;
  double pause_per_sentence_s = 0.3;
};

// estimate_duration("", model) == 0. Appending text never decreases the
// estimate.
double estimate_duration(std::string_view text, const SpeechRateModel& model);

// Clip-duration source used by length scoring: measured values win over the
// model estimate.
class DurationProvider {
 public:
  explicit DurationProvider(SpeechRateModel model = {}) : model_(model) {}

  void set_measured(std::map<std::string, double> measured) {
    measured_ = std::move(measured);
  }
  bool has_measured(const std::string& clip_id) const {
    return measured_.count(clip_id) > 0;
  }

  // Measured duration for the clip when one was supplied, else the model
  // estimate for `text`.
  double duration_for(const std::string& clip_id, std::string_view text) const;

  const SpeechRateModel& model() const { return model_; }

 private:
  SpeechRateModel model_;
  std::map<std::string, double> measured_;
};

}  // namespace adeval

#endif  // ADEVAL_DURATION_HPP_
