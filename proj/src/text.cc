// Copyright 2026 The hybridir Authors.
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

#include "hybridir/text.h"

#include <cctype>

namespace hybridir::text {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

bool InRange(char32_t cp, char32_t lo, char32_t hi) {
  return cp >= lo && cp <= hi;
}

}  // namespace

std::u32string DecodeUtf8(std::string_view input) {
  std::u32string out;
  out.reserve(input.size());
  size_t i = 0;
  while (i < input.size()) {
    const auto c = static_cast<unsigned char>(input[i]);
    int extra = 0;
    char32_t cp = 0;
    if (c < 0x80) {
      cp = c;
    } else if ((c & 0xE0) == 0xC0) {
      cp = c & 0x1F;
      extra = 1;
    } else if ((c & 0xF0) == 0xE0) {
      cp = c & 0x0F;
      extra = 2;
    } else if ((c & 0xF8) == 0xF0) {
      cp = c & 0x07;
      extra = 3;
    } else {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    if (i + extra >= input.size()) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    bool ok = true;
    for (int k = 1; k <= extra; ++k) {
      const auto cc = static_cast<unsigned char>(input[i + k]);
      if ((cc & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (!ok) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

void AppendUtf8(std::string& out, char32_t cp) {
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

std::string EncodeUtf8(std::u32string_view input) {
  std::string out;
  out.reserve(input.size());
  for (char32_t cp : input) AppendUtf8(out, cp);
  return out;
}

bool IsWhitespace(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' ||
         cp == '\v' || cp == 0x85 || cp == 0xA0 || cp == 0x1680 ||
         InRange(cp, 0x2000, 0x200A) || cp == 0x2028 || cp == 0x2029 ||
         cp == 0x202F || cp == 0x205F || cp == 0x3000 || cp == 0xFEFF;
}

bool IsPunctuation(char32_t cp) {
  if (cp < 0x80) {
    return std::ispunct(static_cast<int>(cp)) != 0;
  }
  if (InRange(cp, 0xA1, 0xBF)) {
    // Feminine/masculine ordinals, micro sign and superscript digits are
    // letter-like.
    return cp != 0xAA && cp != 0xB2 && cp != 0xB3 && cp != 0xB5 &&
           cp != 0xB9 && cp != 0xBA;
  }
  if (cp == 0xD7 || cp == 0xF7) return true;
  if (InRange(cp, 0x2010, 0x2027) || InRange(cp, 0x2030, 0x205E)) return true;
  // CJK symbols and punctuation, minus the iteration and closing marks that
  // behave like ideographs.
  if (InRange(cp, 0x3001, 0x303F)) {
    return cp != 0x3005 && cp != 0x3006 && cp != 0x3007 &&
           !InRange(cp, 0x3021, 0x3029) && !InRange(cp, 0x3031, 0x3035);
  }
  if (InRange(cp, 0xFF01, 0xFF0F) || InRange(cp, 0xFF1A, 0xFF20) ||
      InRange(cp, 0xFF3B, 0xFF40) || InRange(cp, 0xFF5B, 0xFF65)) {
    return true;
  }
  // Arabic comma, semicolon, question mark, percent and full stop.
  if (cp == 0x060C || cp == 0x061B || cp == 0x061F ||
      InRange(cp, 0x066A, 0x066D) || cp == 0x06D4) {
    return true;
  }
  // Devanagari danda, double danda, abbreviation sign.
  if (cp == 0x0964 || cp == 0x0965 || cp == 0x0970) return true;
  return false;
}

bool IsCjk(char32_t cp) {
  return InRange(cp, 0x4E00, 0x9FFF) || InRange(cp, 0x3400, 0x4DBF) ||
         InRange(cp, 0x20000, 0x2A6DF) || InRange(cp, 0xF900, 0xFAFF) ||
         InRange(cp, 0x3040, 0x309F) || InRange(cp, 0x30A0, 0x30FF) ||
         InRange(cp, 0xAC00, 0xD7AF) || InRange(cp, 0x1100, 0x11FF) ||
         InRange(cp, 0x3130, 0x318F) || cp == 0x3005 || cp == 0x3007;
}

char32_t ToLower(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 'A' && cp <= 'Z') ? cp + 0x20 : cp;
  }
  if (InRange(cp, 0xC0, 0xDE) && cp != 0xD7) return cp + 0x20;
  if (InRange(cp, 0x100, 0x17F)) {
    if (cp == 0x130) return 'i';
    if (cp == 0x178) return 0xFF;
    if (InRange(cp, 0x100, 0x137) || InRange(cp, 0x14A, 0x177)) {
      return (cp % 2 == 0) ? cp + 1 : cp;
    }
    if (InRange(cp, 0x139, 0x148) || InRange(cp, 0x179, 0x17E)) {
      return (cp % 2 == 1) ? cp + 1 : cp;
    }
    return cp;
  }
  if (InRange(cp, 0x391, 0x3A9) && cp != 0x3A2) return cp + 0x20;
  if (InRange(cp, 0x410, 0x42F)) return cp + 0x20;
  if (InRange(cp, 0x400, 0x40F)) return cp + 0x50;
  return cp;
}

std::string NormalizeWhitespace(std::string_view input) {
  std::string out;
  out.reserve(input.size());
  bool pending_space = false;
  for (char32_t cp : DecodeUtf8(input)) {
    if (IsWhitespace(cp)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    AppendUtf8(out, cp);
  }
  return out;
}

std::string PrimaryLanguage(std::string_view tag) {
  std::string out;
  for (char c : tag) {
    if (c == '-' || c == '_') break;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

}  // namespace hybridir::text
