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

#ifndef HYBRIDIR_TEXT_H_
#define HYBRIDIR_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

// Minimal Unicode helpers for the analyzers. Only the scripts the engine is
// expected to see (Latin, Greek, Cyrillic, Arabic, Devanagari, Bengali, CJK)
// are classified with any care; everything else is treated as a word
// character unless it is whitespace.

namespace hybridir::text {

// Decodes UTF-8. Invalid sequences decode to U+FFFD, one per bad byte.
std::u32string DecodeUtf8(std::string_view input);

void AppendUtf8(std::string& out, char32_t cp);
std::string EncodeUtf8(std::u32string_view input);

bool IsWhitespace(char32_t cp);
bool IsPunctuation(char32_t cp);

// Han ideographs, kana and Hangul.
bool IsCjk(char32_t cp);

// Simple one-to-one lowercase mapping for Latin, Greek and Cyrillic.
char32_t ToLower(char32_t cp);

// Collapses every whitespace run to one ASCII space and trims both ends.
std::string NormalizeWhitespace(std::string_view input);

// Primary subtag of a BCP-47 style tag, lowercased ("zh-Hans" -> "zh").
std::string PrimaryLanguage(std::string_view tag);

}  // namespace hybridir::text

#endif  // HYBRIDIR_TEXT_H_
