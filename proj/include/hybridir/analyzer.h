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

#ifndef HYBRIDIR_ANALYZER_H_
#define HYBRIDIR_ANALYZER_H_

#include <string>
#include <string_view>
#include <vector>

namespace hybridir {

enum class Stemmer {
  kNone,
  // Harman's "S" plural stemmer. Applied only to Latin-script languages.
  kPlural,
};

struct AnalyzerConfig {
  bool lowercase = true;
  Stemmer stemmer = Stemmer::kNone;
  // Sorted, deduplicated on use. Compared after lowercasing and stemming.
  std::vector<std::string> stopwords;

  bool operator==(const AnalyzerConfig&) const = default;
};

// Splits text into index terms.
//
// Non-CJK text is cut at whitespace and punctuation and lowercased. Runs of
// CJK characters produce overlapping character bigrams; a run of a single
// character produces that character. Script decides the rule, so mixed text
// ("GPU加速") tokenizes sensibly whatever the tag says. The language tag only
// gates the stemmer.
std::vector<std::string> Tokenize(std::string_view text,
                                  std::string_view language,
                                  const AnalyzerConfig& config = {});

std::string_view StemmerName(Stemmer stemmer);
Stemmer ParseStemmer(std::string_view name);

}  // namespace hybridir

#endif  // HYBRIDIR_ANALYZER_H_
