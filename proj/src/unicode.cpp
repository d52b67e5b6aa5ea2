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

#include "adeval/unicode.hpp"

#include <cctype>
#include <unordered_map>

namespace adeval::uni {
namespace {

struct LetterRow {
  char32_t cp;        // precomposed codepoint
  char32_t base;      // decomposition base, 0 if none
  char32_t mark;      // combining mark, 0 if none
  const char* folded; // lowercase diacritic-free form
};

// Latin-1 Supplement and Latin Extended-A. base/mark give the canonical
// decomposition used for composition; folded is the match form.
constexpr LetterRow kLetters[] = {
    {0x00C0, U'A', 0x0300, "a"}, {0x00C1, U'A', 0x0301, "a"},
    {0x00C2, U'A', 0x0302, "a"}, {0x00C3, U'A', 0x0303, "a"},
    {0x00C4, U'A', 0x0308, "a"}, {0x00C5, U'A', 0x030A, "a"},
    {0x00C6, 0, 0, "ae"},        {0x00C7, U'C', 0x0327, "c"},
    {0x00C8, U'E', 0x0300, "e"}, {0x00C9, U'E', 0x0301, "e"},
    {0x00CA, U'E', 0x0302, "e"}, {0x00CB, U'E', 0x0308, "e"},
    {0x00CC, U'I', 0x0300, "i"}, {0x00CD, U'I', 0x0301, "i"},
    {0x00CE, U'I', 0x0302, "i"}, {0x00CF, U'I', 0x0308, "i"},
    {0x00D0, 0, 0, "d"},         {0x00D1, U'N', 0x0303, "n"},
    {0x00D2, U'O', 0x0300, "o"}, {0x00D3, U'O', 0x0301, "o"},
    {0x00D4, U'O', 0x0302, "o"}, {0x00D5, U'O', 0x0303, "o"},
    {0x00D6, U'O', 0x0308, "o"}, {0x00D8, 0, 0, "o"},
    {0x00D9, U'U', 0x0300, "u"}, {0x00DA, U'U', 0x0301, "u"},
    {0x00DB, U'U', 0x0302, "u"}, {0x00DC, U'U', 0x0308, "u"},
    {0x00DD, U'Y', 0x0301, "y"}, {0x00DE, 0, 0, "th"},
    {0x00DF, 0, 0, "ss"},
    {0x00E0, U'a', 0x0300, "a"}, {0x00E1, U'a', 0x0301, "a"},
    {0x00E2, U'a', 0x0302, "a"}, {0x00E3, U'a', 0x0303, "a"},
    {0x00E4, U'a', 0x0308, "a"}, {0x00E5, U'a', 0x030A, "a"},
    {0x00E6, 0, 0, "ae"},        {0x00E7, U'c', 0x0327, "c"},
    {0x00E8, U'e', 0x0300, "e"}, {0x00E9, U'e', 0x0301, "e"},
    {0x00EA, U'e', 0x0302, "e"}, {0x00EB, U'e', 0x0308, "e"},
    {0x00EC, U'i', 0x0300, "i"}, {0x00ED, U'i', 0x0301, "i"},
    {0x00EE, U'i', 0x0302, "i"}, {0x00EF, U'i', 0x0308, "i"},
    {0x00F0, 0, 0, "d"},         {0x00F1, U'n', 0x0303, "n"},
    {0x00F2, U'o', 0x0300, "o"}, {0x00F3, U'o', 0x0301, "o"},
    {0x00F4, U'o', 0x0302, "o"}, {0x00F5, U'o', 0x0303, "o"},
    {0x00F6, U'o', 0x0308, "o"}, {0x00F8, 0, 0, "o"},
    {0x00F9, U'u', 0x0300, "u"}, {0x00FA, U'u', 0x0301, "u"},
    {0x00FB, U'u', 0x0302, "u"}, {0x00FC, U'u', 0x0308, "u"},
    {0x00FD, U'y', 0x0301, "y"}, {0x00FE, 0, 0, "th"},
    {0x00FF, U'y', 0x0308, "y"},
    {0x0100, U'A', 0x0304, "a"}, {0x0101, U'a', 0x0304, "a"},
    {0x0102, U'A', 0x0306, "a"}, {0x0103, U'a', 0x0306, "a"},
    {0x0104, U'A', 0x0328, "a"}, {0x0105, U'a', 0x0328, "a"},
    {0x0106, U'C', 0x0301, "c"}, {0x0107, U'c', 0x0301, "c"},
    {0x0108, U'C', 0x0302, "c"}, {0x0109, U'c', 0x0302, "c"},
    {0x010A, U'C', 0x0307, "c"}, {0x010B, U'c', 0x0307, "c"},
    {0x010C, U'C', 0x030C, "c"}, {0x010D, U'c', 0x030C, "c"},
    {0x010E, U'D', 0x030C, "d"}, {0x010F, U'd', 0x030C, "d"},
    {0x0110, 0, 0, "d"},         {0x0111, 0, 0, "d"},
    {0x0112, U'E', 0x0304, "e"}, {0x0113, U'e', 0x0304, "e"},
    {0x0114, U'E', 0x0306, "e"}, {0x0115, U'e', 0x0306, "e"},
    {0x0116, U'E', 0x0307, "e"}, {0x0117, U'e', 0x0307, "e"},
    {0x0118, U'E', 0x0328, "e"}, {0x0119, U'e', 0x0328, "e"},
    {0x011A, U'E', 0x030C, "e"}, {0x011B, U'e', 0x030C, "e"},
    {0x011C, U'G', 0x0302, "g"}, {0x011D, U'g', 0x0302, "g"},
    {0x011E, U'G', 0x0306, "g"}, {0x011F, U'g', 0x0306, "g"},
    {0x0120, U'G', 0x0307, "g"}, {0x0121, U'g', 0x0307, "g"},
    {0x0122, U'G', 0x0327, "g"}, {0x0123, U'g', 0x0327, "g"},
    {0x0124, U'H', 0x0302, "h"}, {0x0125, U'h', 0x0302, "h"},
    {0x0126, 0, 0, "h"},         {0x0127, 0, 0, "h"},
    {0x0128, U'I', 0x0303, "i"}, {0x0129, U'i', 0x0303, "i"},
    {0x012A, U'I', 0x0304, "i"}, {0x012B, U'i', 0x0304, "i"},
    {0x012C, U'I', 0x0306, "i"}, {0x012D, U'i', 0x0306, "i"},
    {0x012E, U'I', 0x0328, "i"}, {0x012F, U'i', 0x0328, "i"},
    {0x0130, U'I', 0x0307, "i"}, {0x0131, 0, 0, "i"},
    {0x0132, 0, 0, "ij"},        {0x0133, 0, 0, "ij"},
    {0x0134, U'J', 0x0302, "j"}, {0x0135, U'j', 0x0302, "j"},
    {0x0136, U'K', 0x0327, "k"}, {0x0137, U'k', 0x0327, "k"},
    {0x0138, 0, 0, "k"},
    {0x0139, U'L', 0x0301, "l"}, {0x013A, U'l', 0x0301, "l"},
    {0x013B, U'L', 0x0327, "l"}, {0x013C, U'l', 0x0327, "l"},
    {0x013D, U'L', 0x030C, "l"}, {0x013E, U'l', 0x030C, "l"},
    {0x013F, 0, 0, "l"},         {0x0140, 0, 0, "l"},
    {0x0141, 0, 0, "l"},         {0x0142, 0, 0, "l"},
    {0x0143, U'N', 0x0301, "n"}, {0x0144, U'n', 0x0301, "n"},
    {0x0145, U'N', 0x0327, "n"}, {0x0146, U'n', 0x0327, "n"},
    {0x0147, U'N', 0x030C, "n"}, {0x0148, U'n', 0x030C, "n"},
    {0x0149, 0, 0, "n"},         {0x014A, 0, 0, "n"},
    {0x014B, 0, 0, "n"},
    {0x014C, U'O', 0x0304, "o"}, {0x014D, U'o', 0x0304, "o"},
    {0x014E, U'O', 0x0306, "o"}, {0x014F, U'o', 0x0306, "o"},
    {0x0150, U'O', 0x030B, "o"}, {0x0151, U'o', 0x030B, "o"},
    {0x0152, 0, 0, "oe"},        {0x0153, 0, 0, "oe"},
    {0x0154, U'R', 0x0301, "r"}, {0x0155, U'r', 0x0301, "r"},
    {0x0156, U'R', 0x0327, "r"}, {0x0157, U'r', 0x0327, "r"},
    {0x0158, U'R', 0x030C, "r"}, {0x0159, U'r', 0x030C, "r"},
    {0x015A, U'S', 0x0301, "s"}, {0x015B, U's', 0x0301, "s"},
    {0x015C, U'S', 0x0302, "s"}, {0x015D, U's', 0x0302, "s"},
    {0x015E, U'S', 0x0327, "s"}, {0x015F, U's', 0x0327, "s"},
    {0x0160, U'S', 0x030C, "s"}, {0x0161, U's', 0x030C, "s"},
    {0x0162, U'T', 0x0327, "t"}, {0x0163, U't', 0x0327, "t"},
    {0x0164, U'T', 0x030C, "t"}, {0x0165, U't', 0x030C, "t"},
    {0x0166, 0, 0, "t"},         {0x0167, 0, 0, "t"},
    {0x0168, U'U', 0x0303, "u"}, {0x0169, U'u', 0x0303, "u"},
    {0x016A, U'U', 0x0304, "u"}, {0x016B, U'u', 0x0304, "u"},
    {0x016C, U'U', 0x0306, "u"}, {0x016D, U'u', 0x0306, "u"},
    {0x016E, U'U', 0x030A, "u"}, {0x016F, U'u', 0x030A, "u"},
    {0x0170, U'U', 0x030B, "u"}, {0x0171, U'u', 0x030B, "u"},
    {0x0172, U'U', 0x0328, "u"}, {0x0173, U'u', 0x0328, "u"},
    {0x0174, U'W', 0x0302, "w"}, {0x0175, U'w', 0x0302, "w"},
    {0x0176, U'Y', 0x0302, "y"}, {0x0177, U'y', 0x0302, "y"},
    {0x0178, U'Y', 0x0308, "y"},
    {0x0179, U'Z', 0x0301, "z"}, {0x017A, U'z', 0x0301, "z"},
    {0x017B, U'Z', 0x0307, "z"}, {0x017C, U'z', 0x0307, "z"},
    {0x017D, U'Z', 0x030C, "z"}, {0x017E, U'z', 0x030C, "z"},
    {0x017F, 0, 0, "s"},
};

const LetterRow* find_letter(char32_t cp) {
  static const std::unordered_map<char32_t, const LetterRow*> index = [] {
    std::unordered_map<char32_t, const LetterRow*> m;
    for (const auto& row : kLetters) m.emplace(row.cp, &row);
    return m;
  }();
  auto it = index.find(cp);
  return it == index.end() ? nullptr : it->second;
}

char32_t compose_pair(char32_t base, char32_t mark) {
  static const std::unordered_map<std::uint64_t, char32_t> index = [] {
    std::unordered_map<std::uint64_t, char32_t> m;
    for (const auto& row : kLetters) {
      if (row.base != 0)
        m.emplace((std::uint64_t{row.base} << 21) | row.mark, row.cp);
    }
    return m;
  }();
  auto it = index.find((std::uint64_t{base} << 21) | mark);
  return it == index.end() ? 0 : it->second;
}

constexpr char32_t kReplacement = 0xFFFD;

}  // namespace

std::vector<Codepoint> decode_utf8(std::string_view s) {
  std::vector<Codepoint> out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const unsigned char b0 = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      len = 1;
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      out.push_back({kReplacement, i, i + 1});
      ++i;
      continue;
    }
    if (i + len > s.size()) {
      out.push_back({kReplacement, i, i + 1});
      ++i;
      continue;
    }
    bool ok = true;
    for (std::size_t k = 1; k < len; ++k) {
      const unsigned char bk = static_cast<unsigned char>(s[i + k]);
      if ((bk & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (bk & 0x3F);
    }
    if (!ok || cp > 0x10FFFF) {
      out.push_back({kReplacement, i, i + 1});
      ++i;
      continue;
    }
    out.push_back({cp, i, i + len});
    i += len;
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

bool is_combining_mark(char32_t cp) { return cp >= 0x0300 && cp <= 0x036F; }

bool is_upper_letter(char32_t cp) {
  if (cp <= 0x7F) return cp >= U'A' && cp <= U'Z';
  if (cp >= 0x00C0 && cp <= 0x00DE) return cp != 0x00D7;
  // Latin Extended-A alternates case in pairs; the ranges below hold the
  // uppercase member on the even or odd codepoint as noted.
  if (cp >= 0x0100 && cp <= 0x0137) return (cp & 1) == 0;
  if (cp >= 0x0139 && cp <= 0x0148) return (cp & 1) == 1;
  if (cp >= 0x014A && cp <= 0x0177) return (cp & 1) == 0;
  if (cp == 0x0178 || cp == 0x0179 || cp == 0x017B || cp == 0x017D) return true;
  return false;
}

std::string nfc(std::string_view s) {
  const auto cps = decode_utf8(s);
  std::vector<char32_t> out;
  out.reserve(cps.size());
  for (const auto& c : cps) {
    if (is_combining_mark(c.cp) && !out.empty()) {
      if (char32_t composed = compose_pair(out.back(), c.cp)) {
        out.back() = composed;
        continue;
      }
    }
    out.push_back(c.cp);
  }
  std::string res;
  res.reserve(s.size());
  for (char32_t cp : out) append_utf8(res, cp);
  return res;
}

std::string fold(std::string_view s) {
  const auto cps = decode_utf8(s);
  std::string res;
  res.reserve(s.size());
  for (const auto& c : cps) {
    const char32_t cp = c.cp;
    if (cp < 0x80) {
      res.push_back(
          static_cast<char>(std::tolower(static_cast<unsigned char>(cp))));
    } else if (is_combining_mark(cp)) {
      // dropped
    } else if (const LetterRow* row = find_letter(cp)) {
      res.append(row->folded);
    } else if (cp == 0x2018 || cp == 0x2019) {
      res.push_back('\'');
    } else if (cp == 0x201C || cp == 0x201D) {
      res.push_back('"');
    } else if (cp == 0x2013 || cp == 0x2014) {
      res.push_back('-');
    } else {
      append_utf8(res, cp);
    }
  }
  return res;
}

}  // namespace adeval::uni
