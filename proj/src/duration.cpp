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

#include "adeval/duration.hpp"

#include "adeval/text_analysis.hpp"

namespace adeval {

double estimate_duration(std::string_view text, const SpeechRateModel& model) {
  std::size_t words = 0;
  std::size_t sentence_marks = 0;
  for (const auto& tok : text::tokenize(text)) {
    if (tok.is_word) {
      ++words;
    } else if (tok.surface == "." || tok.surface == "!" ||
               tok.surface == "?") {
      ++sentence_marks;
    }
  }
  return static_cast<double>(words) / model.words_per_minute * 60.0 +
         static_cast<double>(sentence_marks) * model.pause_per_sentence_s;
}

double DurationProvider::duration_for(const std::string& clip_id,
                                      std::string_view text) const {
  auto it = measured_.find(clip_id);
  if (it != measured_.end()) return it->second;
  return estimate_duration(text, model_);
}

}  // namespace adeval
