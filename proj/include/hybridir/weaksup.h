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

#ifndef HYBRIDIR_WEAKSUP_H_
#define HYBRIDIR_WEAKSUP_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "hybridir/corpus.h"
#include "hybridir/sparse_index.h"

// Training data from an encyclopedia dump: each article title is a query,
// its article the positive, and the other BM25 hits negatives. Queries
// whose article BM25 does not retrieve in the top k are dropped.

namespace hybridir {

enum class NegativeSampling {
  kTop,     // highest-ranked non-positive hits
  kRandom,  // seeded uniform sample of the non-positive hits, in rank order
};

std::string_view NegativeSamplingName(NegativeSampling sampling);
NegativeSampling ParseNegativeSampling(std::string_view name);

struct SynthesisConfig {
  int k = 1000;
  int negatives_per_example = 10;
  NegativeSampling sampling = NegativeSampling::kTop;
  uint64_t seed = 0;
  int min_title_tokens = 1;
  int min_body_tokens = 20;
  Bm25Params bm25;
  int threads = 1;

  void Validate() const;
};

struct PassageRef {
  std::string doc_id;
  std::string title;
  std::string text;

  bool operator==(const PassageRef&) const = default;
};

struct TrainingExample {
  std::string query;
  PassageRef positive;
  std::vector<PassageRef> negatives;
  int positive_rank = 0;

  bool operator==(const TrainingExample&) const = default;
};

struct SynthesisStats {
  size_t articles = 0;
  size_t filtered_title = 0;         // too few title tokens
  size_t filtered_body = 0;          // too few body tokens
  size_t dropped_not_retrieved = 0;  // article not in its title's top k
  size_t emitted = 0;
};

struct SynthesisResult {
  std::vector<TrainingExample> examples;  // in article order
  SynthesisStats stats;
};

// Whitespace-normalized title with disambiguation suffixes such as
// " (disambiguation)" removed.
std::string CleanTitle(std::string_view title);

// Article-level BM25 ranking for `query`. With `segment_parents`, the index
// holds segments: the top k segments are retrieved and each article takes
// the rank of its best segment.
std::vector<ScoredHit> RetrieveArticles(const InvertedIndex& index,
                                        const std::string& query, int k,
                                        const Bm25Params& bm25,
                                        const ParentMap* segment_parents);

// `index` must be built over exactly `articles` (body only, so a title does
// not trivially match its own article), or over their segments when
// `segment_parents` is given. Throws NotFound when an article is unknown to
// the index or a hit is not among the articles.
SynthesisResult Synthesize(const std::vector<Document>& articles,
                           const InvertedIndex& index,
                           const SynthesisConfig& config,
                           const ParentMap* segment_parents = nullptr);

// One JSON object per line with keys in the fixed order
// query, positive{id,title,text}, negatives[{id,title,text}], positive_rank.
size_t WriteTrainingExamples(const std::vector<TrainingExample>& examples,
                             std::ostream& out);
size_t ExportTrainingFile(const std::vector<TrainingExample>& examples,
                          const std::filesystem::path& path);
std::vector<TrainingExample> ParseTrainingExamples(std::istream& in);
std::vector<TrainingExample> LoadTrainingFile(
    const std::filesystem::path& path);

}  // namespace hybridir

#endif  // HYBRIDIR_WEAKSUP_H_
