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

#ifndef HYBRIDIR_SPARSE_INDEX_H_
#define HYBRIDIR_SPARSE_INDEX_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hybridir/analyzer.h"
#include "hybridir/corpus.h"

namespace hybridir {

using DocOrdinal = uint32_t;
using TermId = uint32_t;

struct Posting {
  DocOrdinal doc = 0;
  uint32_t tf = 0;

  bool operator==(const Posting&) const = default;
};

// One entry of a document's term vector.
struct TermCount {
  TermId term = 0;
  uint32_t tf = 0;
};

struct Bm25Params {
  double k1 = 0.9;
  double b = 0.4;
};

// A ranked result. Within a list: scores non-increasing, equal scores ordered
// by ascending doc_id, ranks 1..n.
struct ScoredHit {
  std::string doc_id;
  double score = 0.0;
  int rank = 0;

  bool operator==(const ScoredHit&) const = default;
};

// Term weights plus a scale factor applied to every term. A query built from
// text carries count/length weights and scale = length, which makes the
// weighted BM25 sum equal to the classic sum over query-token occurrences.
// Expanded queries carry a probability distribution and scale = 1.
struct WeightedQuery {
  std::map<std::string, double> weights;
  double scale = 1.0;

  bool operator==(const WeightedQuery&) const = default;
};

WeightedQuery QueryFromTokens(const std::vector<std::string>& tokens);

struct IndexOptions {
  AnalyzerConfig analyzer;
  // Index title + body; off means body only.
  bool include_title = true;
  // Tag used to analyze queries. Empty: most frequent document language.
  std::string language;
  int threads = 1;
};

class InvertedIndex {
 public:
  static InvertedIndex Build(const std::vector<Document>& docs,
                             const IndexOptions& options = {});

  // Reads <dir>/sparse.idx. Throws FormatError on a bad magic or version.
  static InvertedIndex Load(const std::filesystem::path& dir);
  void Save(const std::filesystem::path& dir) const;

  size_t num_docs() const { return doc_ids_.size(); }
  size_t num_terms() const { return terms_.size(); }
  uint64_t total_length() const { return total_length_; }
  double avgdl() const { return avgdl_; }

  const std::string& doc_id(DocOrdinal doc) const { return doc_ids_[doc]; }
  std::optional<DocOrdinal> ordinal(std::string_view doc_id) const;
  uint32_t doc_length(DocOrdinal doc) const { return doc_lengths_[doc]; }

  // Sorted term dictionary; TermId indexes into it.
  const std::vector<std::string>& terms() const { return terms_; }
  std::optional<TermId> term_id(std::string_view term) const;
  std::span<const Posting> postings(TermId term) const {
    return postings_[term];
  }
  // Empty for unknown terms.
  std::span<const Posting> postings(std::string_view term) const;
  uint32_t df(std::string_view term) const {
    return static_cast<uint32_t>(postings(term).size());
  }
  uint32_t tf(std::string_view term, DocOrdinal doc) const;

  // Term vector of `doc`, sorted by TermId.
  std::span<const TermCount> doc_terms(DocOrdinal doc) const {
    return doc_terms_[doc];
  }

  const IndexOptions& options() const { return options_; }

  std::vector<std::string> Analyze(std::string_view text) const;
  WeightedQuery ParseQuery(std::string_view text) const;

 private:
  InvertedIndex() = default;
  void Finalize();

  IndexOptions options_;
  std::vector<std::string> doc_ids_;
  std::vector<uint32_t> doc_lengths_;
  std::vector<std::string> terms_;
  std::vector<std::vector<Posting>> postings_;

  // Derived on build/load.
  std::unordered_map<std::string, DocOrdinal> doc_lookup_;
  std::unordered_map<std::string, TermId> term_lookup_;
  std::vector<std::vector<TermCount>> doc_terms_;
  uint64_t total_length_ = 0;
  double avgdl_ = 0.0;
};

// ln(1 + (N - df + 0.5) / (df + 0.5)); positive for every 0 <= df <= N.
double Bm25Idf(uint64_t df, uint64_t num_docs);

// tf / (tf + k1 * (1 - b + b * dl / avgdl)).
double Bm25Saturation(uint32_t tf, uint32_t doc_length, double avgdl,
                      const Bm25Params& params);

double Bm25Score(const WeightedQuery& query, DocOrdinal doc,
                 const InvertedIndex& index, const Bm25Params& params = {});

// Top-k documents containing at least one positively weighted query term.
std::vector<ScoredHit> SearchWeighted(const InvertedIndex& index,
                                      const WeightedQuery& query, int k,
                                      const Bm25Params& params = {});

std::vector<ScoredHit> SearchBm25(const InvertedIndex& index,
                                  const Topic& topic, int k = 1000,
                                  const Bm25Params& params = {});

// Sorts by score descending, doc_id ascending, and renumbers ranks.
void SortHits(std::vector<ScoredHit>& hits);

}  // namespace hybridir

#endif  // HYBRIDIR_SPARSE_INDEX_H_
