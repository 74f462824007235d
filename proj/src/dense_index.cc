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

#include "hybridir/dense_index.h"

#include <algorithm>
#include <fstream>
#include <functional>

#include "hybridir/binary_io.h"
#include "hybridir/error.h"
#include "hybridir/parallel.h"

namespace hybridir {

namespace {

constexpr char kMagic[] = "HYIRDNSE";
constexpr uint32_t kVersion = 1;
constexpr char kFileName[] = "dense.idx";

std::vector<ScoredHit> Aggregate(
    const std::vector<ScoredHit>& segment_hits, int m,
    const std::function<const std::string*(const std::string&)>& parent_of) {
  if (m < 1) throw InvalidArgument("aggregation depth m must be >= 1");
  std::map<std::string, std::vector<double>> per_doc;
  for (const ScoredHit& hit : segment_hits) {
    const std::string* parent = parent_of(hit.doc_id);
    if (parent == nullptr) {
      throw NotFound("segment '" + hit.doc_id + "' has no parent document");
    }
    per_doc[*parent].push_back(hit.score);
  }
  std::vector<ScoredHit> docs;
  docs.reserve(per_doc.size());
  for (auto& [doc_id, scores] : per_doc) {
    std::sort(scores.begin(), scores.end(), std::greater<>());
    const size_t take = std::min(scores.size(), static_cast<size_t>(m));
    double sum = 0.0;
    for (size_t i = 0; i < take; ++i) sum += scores[i];
    docs.push_back({doc_id, sum / static_cast<double>(take), 0});
  }
  SortHits(docs);
  return docs;
}

}  // namespace

ParentMap ParentsFromSegmentIds(const std::vector<EmbeddingVector>& vectors) {
  ParentMap parents;
  for (const EmbeddingVector& v : vectors) {
    const size_t hash = v.id.rfind('#');
    if (hash == std::string::npos || hash == 0) {
      throw FormatError("segment id '" + v.id + "' lacks a '<doc>#<n>' form");
    }
    parents.emplace(v.id, v.id.substr(0, hash));
  }
  return parents;
}

DenseIndex DenseIndex::Build(std::vector<EmbeddingVector> vectors,
                             const ParentMap& parents) {
  DenseIndex index;
  if (!vectors.empty()) index.dimension_ = vectors.front().dimension();
  index.matrix_.reserve(vectors.size() * index.dimension_);
  for (EmbeddingVector& v : vectors) {
    if (v.dimension() != index.dimension_) {
      throw FormatError("vector '" + v.id + "' has dimension " +
                        std::to_string(v.dimension()) + ", expected " +
                        std::to_string(index.dimension_));
    }
    CheckFinite(v);
    auto parent = parents.find(v.id);
    if (parent == parents.end()) {
      throw NotFound("segment '" + v.id + "' has no parent document");
    }
    index.matrix_.insert(index.matrix_.end(), v.values.begin(), v.values.end());
    index.segment_ids_.push_back(std::move(v.id));
    index.parent_ids_.push_back(parent->second);
  }
  index.Finalize();
  return index;
}

void DenseIndex::Finalize() {
  lookup_.clear();
  lookup_.reserve(segment_ids_.size());
  for (size_t i = 0; i < segment_ids_.size(); ++i) {
    if (!lookup_.emplace(segment_ids_[i], i).second) {
      throw FormatError("duplicate segment id '" + segment_ids_[i] + "'");
    }
  }
}

const std::string* DenseIndex::ParentOf(std::string_view segment_id) const {
  auto it = lookup_.find(std::string(segment_id));
  return it == lookup_.end() ? nullptr : &parent_ids_[it->second];
}

void DenseIndex::Save(const std::filesystem::path& dir) const {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const std::filesystem::path path = dir / kFileName;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  BinaryWriter w(out);
  w.Raw(std::string_view(kMagic, 8));
  w.U32(kVersion);
  w.U32(static_cast<uint32_t>(dimension_));
  w.U64(segment_ids_.size());
  for (size_t i = 0; i < segment_ids_.size(); ++i) {
    w.String(segment_ids_[i]);
    w.String(parent_ids_[i]);
    for (float x : row(i)) w.F32(x);
  }
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

DenseIndex DenseIndex::Load(const std::filesystem::path& dir) {
  const std::filesystem::path path = dir / kFileName;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("cannot open " + path.string());
  BinaryReader r(in, path.string());
  if (r.Raw(8) != std::string_view(kMagic, 8)) {
    throw FormatError(path.string() + ": not a dense index");
  }
  const uint32_t version = r.U32();
  if (version != kVersion) {
    throw FormatError(path.string() + ": unsupported index version " +
                      std::to_string(version));
  }
  DenseIndex index;
  index.dimension_ = r.U32();
  const uint64_t rows = r.U64();
  index.matrix_.reserve(rows * index.dimension_);
  for (uint64_t i = 0; i < rows; ++i) {
    index.segment_ids_.push_back(r.String());
    index.parent_ids_.push_back(r.String());
    for (size_t j = 0; j < index.dimension_; ++j) {
      index.matrix_.push_back(r.F32());
    }
  }
  r.ExpectEnd();
  index.Finalize();
  return index;
}

double InnerProduct(std::span<const float> a, std::span<const float> b) {
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    sum += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return sum;
}

std::vector<ScoredHit> SearchDense(const DenseIndex& index,
                                   const EmbeddingVector& query, int k,
                                   int threads) {
  if (k < 1) throw InvalidArgument("k must be >= 1");
  if (query.dimension() != index.dimension() && index.size() > 0) {
    throw InvalidArgument("query '" + query.id + "' has dimension " +
                          std::to_string(query.dimension()) +
                          ", index has " + std::to_string(index.dimension()));
  }
  std::vector<double> scores(index.size());
  ParallelFor(index.size(), threads, [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      scores[i] = InnerProduct(query.values, index.row(i));
    }
  });
  std::vector<size_t> order(index.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  const size_t keep = std::min(order.size(), static_cast<size_t>(k));
  std::partial_sort(order.begin(), order.begin() + keep, order.end(),
                    [&](size_t a, size_t b) {
                      if (scores[a] != scores[b]) return scores[a] > scores[b];
                      return index.segment_id(a) < index.segment_id(b);
                    });
  std::vector<ScoredHit> hits;
  hits.reserve(keep);
  for (size_t i = 0; i < keep; ++i) {
    hits.push_back({index.segment_id(order[i]), scores[order[i]],
                    static_cast<int>(i + 1)});
  }
  return hits;
}

std::vector<ScoredHit> AggregateSegments(
    const std::vector<ScoredHit>& segment_hits, const DenseIndex& index,
    int m) {
  return Aggregate(segment_hits, m, [&](const std::string& id) {
    return index.ParentOf(id);
  });
}

std::vector<ScoredHit> AggregateSegments(
    const std::vector<ScoredHit>& segment_hits, const ParentMap& parents,
    int m) {
  return Aggregate(segment_hits, m,
                   [&](const std::string& id) -> const std::string* {
                     auto it = parents.find(id);
                     return it == parents.end() ? nullptr : &it->second;
                   });
}

}  // namespace hybridir
