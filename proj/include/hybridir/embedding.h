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

#ifndef HYBRIDIR_EMBEDDING_H_
#define HYBRIDIR_EMBEDDING_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hybridir/analyzer.h"

namespace hybridir {

struct EmbeddingVector {
  std::string id;
  std::vector<float> values;

  size_t dimension() const { return values.size(); }
  bool operator==(const EmbeddingVector&) const = default;
};

// Source of query and passage vectors. Implementations are deterministic and
// have a fixed output dimension. `id` is the topic or segment id; `text` the
// content to encode. A provider may use either.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual size_t dimension() const = 0;
  virtual EmbeddingVector EmbedQuery(std::string_view id,
                                     std::string_view text) const = 0;
  virtual EmbeddingVector EmbedPassage(std::string_view id,
                                       std::string_view text) const = 0;
};

// Signed feature hashing of analyzer tokens into `buckets` dimensions,
// L2-normalized. Text without tokens maps to the zero vector.
class HashingEncoder : public EmbeddingProvider {
 public:
  explicit HashingEncoder(size_t buckets = 256, AnalyzerConfig analyzer = {},
                          std::string language = "und");

  size_t dimension() const override { return buckets_; }
  EmbeddingVector EmbedQuery(std::string_view id,
                             std::string_view text) const override;
  EmbeddingVector EmbedPassage(std::string_view id,
                               std::string_view text) const override;

  std::vector<float> Encode(std::string_view text) const;

 private:
  size_t buckets_;
  AnalyzerConfig analyzer_;
  std::string language_;
};

// Vectors produced elsewhere (e.g. a neural bi-encoder), looked up by id.
class PrecomputedEmbeddings : public EmbeddingProvider {
 public:
  PrecomputedEmbeddings(std::vector<EmbeddingVector> queries,
                        std::vector<EmbeddingVector> passages);
  static PrecomputedEmbeddings FromFiles(
      const std::filesystem::path& query_vectors,
      const std::filesystem::path& passage_vectors);

  size_t dimension() const override { return dimension_; }
  // Throw NotFound for unknown ids.
  EmbeddingVector EmbedQuery(std::string_view id,
                             std::string_view text) const override;
  EmbeddingVector EmbedPassage(std::string_view id,
                               std::string_view text) const override;

 private:
  size_t dimension_ = 0;
  std::unordered_map<std::string, std::vector<float>> queries_;
  std::unordered_map<std::string, std::vector<float>> passages_;
};

// 64-bit FNV-1a.
uint64_t Fnv1a64(std::string_view data);

// Throws FormatError naming the id for a non-finite component.
void CheckFinite(const EmbeddingVector& v);

enum class VectorFileFormat { kBinary, kText };

// Binary layout (little-endian):
//   magic[8] "HYIRVECS", u32 version, u32 dimension, u64 count,
//   count x (u32 id length, id bytes, dimension x f32)
// Text layout: one vector per line, "<id>\t<v1> <v2> ...", floats printed
// with 9 significant digits so they parse back to the same bits.
void WriteVectors(const std::vector<EmbeddingVector>& vectors,
                  const std::filesystem::path& path, VectorFileFormat format);

// Detects the format from the magic bytes. All vectors must share one
// dimension.
std::vector<EmbeddingVector> ReadVectors(const std::filesystem::path& path);

}  // namespace hybridir

#endif  // HYBRIDIR_EMBEDDING_H_
