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
// Small Unicode helpers sized for this toolkit: roster names and AD text are
// Latin-script, so composition and case folding cover ASCII, Latin-1
// Supplement and Latin Extended-A. Codepoints outside those ranges pass
// through unchanged.

#ifndef ADEVAL_UNICODE_HPP_
#define ADEVAL_UNICODE_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace adeval::uni {

struct Codepoint {
  char32_t cp;
  std::size_t begin;  // byte offset into the source string
  std::size_t end;    // one past the last byte
};

// Decodes UTF-8; invalid sequences become U+FFFD, one per bad byte.
std::vector<Codepoint> decode_utf8(std::string_view s);

void append_utf8(std::string& out, char32_t cp);

// True for combining diacritical marks (U+0300..U+036F).
bool is_combining_mark(char32_t cp);

// Uppercase test over the covered ranges (ASCII, Latin-1, Latin Extended-A).
bool is_upper_letter(char32_t cp);

// Canonical composition for Latin letters: "u" + U+0308 becomes the single
// codepoint for u-diaeresis. Marks with no composition are kept as-is.
std::string nfc(std::string_view s);

// Case fold for matching: lowercases, strips diacritics (precomposed or
// combining), expands ligatures (ae, oe, ss) and maps curly quotes and
// dashes to their ASCII forms. fold("Müller") == "muller".
std::string fold(std::string_view s);

}  // namespace adeval::uni

#endif  // ADEVAL_UNICODE_HPP_
