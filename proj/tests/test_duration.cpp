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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "adeval/duration.hpp"

using namespace adeval;

TEST_CASE("eight words and a period at default rate") {
  // 8 words at 160 wpm is 3.0 s, plus one 0.3 s sentence pause.
  const SpeechRateModel model;
  CHECK(estimate_duration("The keeper tips the shot onto the bar.", model) ==
        doctest::Approx(3.3).epsilon(1e-12));
}

TEST_CASE("empty and whitespace-only text take no time") {
  const SpeechRateModel model;
  CHECK(estimate_duration("", model) == 0.0);
  CHECK(estimate_duration("   \t  ", model) == 0.0);
}

TEST_CASE("every sentence terminator adds a pause") {
  const SpeechRateModel model;
  // 3 words, 3 terminators: 3/160*60 + 3*0.3.
  CHECK(estimate_duration("Goal! Again? Yes.", model) ==
        doctest::Approx(3.0 / 160.0 * 60.0 + 0.9).epsilon(1e-12));
  // "..." is three separate pause tokens.
  CHECK(estimate_duration("Wait...", model) ==
        doctest::Approx(1.0 / 160.0 * 60.0 + 0.9).epsilon(1e-12));
}

TEST_CASE("commas and other punctuation add nothing") {
  const SpeechRateModel model;
  CHECK(estimate_duration("one, two; three", model) ==
        doctest::Approx(3.0 / 160.0 * 60.0).epsilon(1e-12));
}

TEST_CASE("hyphenated compounds count as one word") {
  const SpeechRateModel model;
  CHECK(estimate_duration("free-kick", model) ==
        doctest::Approx(1.0 / 160.0 * 60.0).epsilon(1e-12));
}

TEST_CASE("speech rate scales linearly") {
  SpeechRateModel slow;
  slow.words_per_minute = 80.0;
  slow.pause_per_sentence_s = 0.0;
  CHECK(estimate_duration("two words", slow) ==
        doctest::Approx(1.5).epsilon(1e-12));
  SpeechRateModel fast;
  fast.words_per_minute = 240.0;
  fast.pause_per_sentence_s = 0.0;
  CHECK(estimate_duration("two words", fast) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("provider prefers measured durations") {
  DurationProvider provider;
  provider.set_measured({{"clip-1", 7.25}});
  CHECK(provider.has_measured("clip-1"));
  CHECK_FALSE(provider.has_measured("clip-2"));
  CHECK(provider.duration_for("clip-1", "some very long text here") == 7.25);
  // Unmeasured clips fall back to the model estimate.
  CHECK(provider.duration_for("clip-2", "The keeper tips the shot onto the bar.") ==
        doctest::Approx(3.3).epsilon(1e-12));
}

TEST_CASE("longer text never estimates shorter") {
  const SpeechRateModel model;
  std::string text;
  double prev = 0.0;
  for (int i = 0; i < 30; ++i) {
    text += "word ";
    const double est = estimate_duration(text, model);
    CHECK(est >= prev);
    prev = est;
  }
}
