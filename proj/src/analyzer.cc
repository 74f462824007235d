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

#include "hybridir/analyzer.h"

#include <algorithm>
#include <array>

#include "hybridir/error.h"
#include "hybridir/text.h"

namespace hybridir {

namespace {

bool IsLatinScriptLanguage(std::string_view language) {
  static constexpr std::array<std::string_view, 9> kLatin = {
      "en", "fr", "es", "de", "it", "pt", "nl", "ca", "und"};
  const std::string primary = text::PrimaryLanguage(language);
  return std::find(kLatin.begin(), kLatin.end(), primary) != kLatin.end();
}

bool EndsWith(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Harman (1991): ies -> y, es -> e, s -> "" with the usual exceptions.
std::string PluralStem(std::string word) {
  if (word.size() <= 3) return word;
  if (EndsWith(word, "ies") && !EndsWith(word, "eies") &&
      !EndsWith(word, "aies")) {
    word.resize(word.size() - 3);
    word.push_back('y');
  } else if (EndsWith(word, "es") && !EndsWith(word, "aes") &&
             !EndsWith(word, "ees") && !EndsWith(word, "oes")) {
    word.pop_back();
  } else if (EndsWith(word, "s") && !EndsWith(word, "us") &&
             !EndsWith(word, "ss")) {
    word.pop_back();
  }
  return word;
}

class TokenSink {
 public:
  TokenSink(const AnalyzerConfig& config, bool stem)
      : config_(config), stem_(stem) {}

  void Emit(std::string token) {
    if (stem_) token = PluralStem(std::move(token));
    if (!config_.stopwords.empty() &&
        std::find(config_.stopwords.begin(), config_.stopwords.end(), token) !=
            config_.stopwords.end()) {
      return;
    }
    tokens_.push_back(std::move(token));
  }

  void EmitCjk(std::string token) { tokens_.push_back(std::move(token)); }

  std::vector<std::string> Take() { return std::move(tokens_); }

 private:
  const AnalyzerConfig& config_;
  bool stem_;
  std::vector<std::string> tokens_;
};

}  // namespace

std::vector<std::string> Tokenize(std::string_view input,
                                  std::string_view language,
                                  const AnalyzerConfig& config) {
  const bool stem =
      config.stemmer == Stemmer::kPlural && IsLatinScriptLanguage(language);
  TokenSink sink(config, stem);

  std::string word;
  std::u32string cjk_run;

  auto flush_word = [&] {
    if (!word.empty()) sink.Emit(std::move(word));
    word.clear();
  };
  auto flush_cjk = [&] {
    if (cjk_run.size() == 1) {
      sink.EmitCjk(text::EncodeUtf8(cjk_run));
    } else {
      for (size_t i = 0; i + 1 < cjk_run.size(); ++i) {
        sink.EmitCjk(text::EncodeUtf8(cjk_run.substr(i, 2)));
      }
    }
    cjk_run.clear();
  };

  for (char32_t cp : text::DecodeUtf8(input)) {
    if (text::IsWhitespace(cp) || text::IsPunctuation(cp)) {
      flush_word();
      flush_cjk();
    } else if (text::IsCjk(cp)) {
      flush_word();
      cjk_run.push_back(cp);
    } else {
      flush_cjk();
      text::AppendUtf8(word, config.lowercase ? text::ToLower(cp) : cp);
    }
  }
  flush_word();
  flush_cjk();
  return sink.Take();
}

std::string_view StemmerName(Stemmer stemmer) {
  switch (stemmer) {
    case Stemmer::kNone:
      return "none";
    case Stemmer::kPlural:
      return "plural";
  }
  return "none";
}

Stemmer ParseStemmer(std::string_view name) {
  if (name == "none") return Stemmer::kNone;
  if (name == "plural") return Stemmer::kPlural;
  throw InvalidArgument("unknown stemmer '" + std::string(name) + "'");
}

}  // namespace hybridir
