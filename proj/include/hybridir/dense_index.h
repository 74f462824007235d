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

#ifndef HYBRIDIR_DENSE_INDEX_H_
#define HYBRIDIR_DENSE_INDEX_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hybridir/corpus.h"
#include "hybridir/embedding.h"
#include "hybridir/sparse_index.h"

namespace hybridir {

// Parent map from the "<doc_id>#<n>" segment id convention.
ParentMap ParentsFromSegmentIds(const std::vector<EmbeddingVector>& vectors);

// Row-major float matrix of segment vectors with id and parent maps.
// Immutable once built.
class DenseIndex {
 public:
  // Throws FormatError on dimension mismatch (naming the id), non-finite
  // components or duplicate ids; NotFound when an id has no parent.
  static DenseIndex Build(std::vector<EmbeddingVector> vectors,
                          const ParentMap& parents);

  // <dir>/dense.idx:
  //   magic[8] "HYIRDNSE", u32 version, u32 dimension, u64 rows,
  //   rows x (string segment_id, string parent_doc_id, dimension x f32)
  static DenseIndex Load(const std::filesystem::path& dir);
  void Save(const std::filesystem::path& dir) const;

  size_t dimension() const { return dimension_; }
  size_t size() const { return segment_ids_.size(); }

  std::span<const float> row(size_t i) const {
    return {matrix_.data() + i * dimension_, dimension_};
  }
  const std::string& segment_id(size_t i) const { return segment_ids_[i]; }
  const std::string& parent_doc_id(size_t i) const { return parent_ids_[i]; }

  // nullptr for unknown segments.
  const std::string* ParentOf(std::string_view segment_id) const;

 private:
  DenseIndex() = default;
  void Finalize();

  size_t dimension_ = 0;
  std::vector<float> matrix_;
  std::vector<std::string> segment_ids_;
  std::vector<std::string> parent_ids_;
  std::unordered_map<std::string, size_t> lookup_;
};

// Inner product, accumulated in double.
double InnerProduct(std::span<const float> a, std::span<const float> b);

// Exact top-k segments by inner product; ties by ascending segment id.
// The scan may be split across `threads`; the result does not depend on it.
std::vector<ScoredHit> SearchDense(const DenseIndex& index,
                                   const EmbeddingVector& query, int k = 100,
                                   int threads = 1);

// Document score = mean of its min(m, count) best retrieved segment scores.
// Throws NotFound for a segment without a parent.
std::vector<ScoredHit> AggregateSegments(
    const std::vector<ScoredHit>& segment_hits, const DenseIndex& index,
    int m = 3);
std::vector<ScoredHit> AggregateSegments(
    const std::vector<ScoredHit>& segment_hits, const ParentMap& parents,
    int m = 3);

}  // namespace hybridir

#endif  // HYBRIDIR_DENSE_INDEX_H_
