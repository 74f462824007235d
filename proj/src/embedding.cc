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

#include "hybridir/embedding.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hybridir/binary_io.h"
#include "hybridir/error.h"

namespace hybridir {

namespace {

constexpr char kMagic[] = "HYIRVECS";
constexpr uint32_t kVersion = 1;

std::vector<float> Lookup(
    const std::unordered_map<std::string, std::vector<float>>& table,
    std::string_view id, const char* kind) {
  auto it = table.find(std::string(id));
  if (it == table.end()) {
    throw NotFound(std::string("no precomputed ") + kind + " vector for '" +
                   std::string(id) + "'");
  }
  return it->second;
}

std::unordered_map<std::string, std::vector<float>> ToTable(
    std::vector<EmbeddingVector> vectors, size_t& dimension) {
  std::unordered_map<std::string, std::vector<float>> table;
  for (EmbeddingVector& v : vectors) {
    CheckFinite(v);
    if (dimension == 0) dimension = v.dimension();
    if (v.dimension() != dimension) {
      throw FormatError("vector '" + v.id + "' has dimension " +
                        std::to_string(v.dimension()) + ", expected " +
                        std::to_string(dimension));
    }
    if (!table.emplace(v.id, std::move(v.values)).second) {
      throw FormatError("duplicate vector id '" + v.id + "'");
    }
  }
  return table;
}

std::vector<EmbeddingVector> ReadTextVectors(std::istream& in,
                                             const std::string& source) {
  std::vector<EmbeddingVector> vectors;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw FormatError(source + ":" + std::to_string(line_number) +
                        ": expected '<id>\\t<values>'");
    }
    EmbeddingVector v;
    v.id = line.substr(0, tab);
    const char* p = line.data() + tab + 1;
    const char* end = line.data() + line.size();
    while (p < end) {
      while (p < end && *p == ' ') ++p;
      if (p == end) break;
      float value;
      auto [next, ec] = std::from_chars(p, end, value);
      if (ec != std::errc()) {
        throw FormatError(source + ":" + std::to_string(line_number) +
                          ": bad vector component");
      }
      v.values.push_back(value);
      p = next;
    }
    vectors.push_back(std::move(v));
  }
  return vectors;
}

}  // namespace

uint64_t Fnv1a64(std::string_view data) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : data) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

void CheckFinite(const EmbeddingVector& v) {
  for (float x : v.values) {
    if (!std::isfinite(x)) {
      throw FormatError("vector '" + v.id + "' has a non-finite component");
    }
  }
}

HashingEncoder::HashingEncoder(size_t buckets, AnalyzerConfig analyzer,
                               std::string language)
    : buckets_(buckets),
      analyzer_(std::move(analyzer)),
      language_(std::move(language)) {
  if (buckets_ == 0) throw InvalidArgument("encoder needs >= 1 bucket");
}

std::vector<float> HashingEncoder::Encode(std::string_view text) const {
  std::vector<double> acc(buckets_, 0.0);
  for (const std::string& token : Tokenize(text, language_, analyzer_)) {
    const uint64_t h = Fnv1a64(token);
    const double sign = ((h >> 63) & 1) ? -1.0 : 1.0;
    acc[h % buckets_] += sign;
  }
  double norm = 0.0;
  for (double x : acc) norm += x * x;
  norm = std::sqrt(norm);
  std::vector<float> out(buckets_, 0.0f);
  if (norm > 0.0) {
    for (size_t i = 0; i < buckets_; ++i) {
      out[i] = static_cast<float>(acc[i] / norm);
    }
  }
  return out;
}

EmbeddingVector HashingEncoder::EmbedQuery(std::string_view id,
                                           std::string_view text) const {
  return {std::string(id), Encode(text)};
}

EmbeddingVector HashingEncoder::EmbedPassage(std::string_view id,
                                             std::string_view text) const {
  return {std::string(id), Encode(text)};
}

PrecomputedEmbeddings::PrecomputedEmbeddings(
    std::vector<EmbeddingVector> queries,
    std::vector<EmbeddingVector> passages) {
  queries_ = ToTable(std::move(queries), dimension_);
  passages_ = ToTable(std::move(passages), dimension_);
}

PrecomputedEmbeddings PrecomputedEmbeddings::FromFiles(
    const std::filesystem::path& query_vectors,
    const std::filesystem::path& passage_vectors) {
  return PrecomputedEmbeddings(ReadVectors(query_vectors),
                               ReadVectors(passage_vectors));
}

EmbeddingVector PrecomputedEmbeddings::EmbedQuery(
    std::string_view id, std::string_view /*text*/) const {
  return {std::string(id), Lookup(queries_, id, "query")};
}

EmbeddingVector PrecomputedEmbeddings::EmbedPassage(
    std::string_view id, std::string_view /*text*/) const {
  return {std::string(id), Lookup(passages_, id, "passage")};
}

void WriteVectors(const std::vector<EmbeddingVector>& vectors,
                  const std::filesystem::path& path, VectorFileFormat format) {
  const size_t dimension = vectors.empty() ? 0 : vectors.front().dimension();
  for (const EmbeddingVector& v : vectors) {
    if (v.dimension() != dimension) {
      throw InvalidArgument("vector '" + v.id + "' has dimension " +
                            std::to_string(v.dimension()) + ", expected " +
                            std::to_string(dimension));
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  if (format == VectorFileFormat::kBinary) {
    BinaryWriter w(out);
    w.Raw(std::string_view(kMagic, 8));
    w.U32(kVersion);
    w.U32(static_cast<uint32_t>(dimension));
    w.U64(vectors.size());
    for (const EmbeddingVector& v : vectors) {
      w.String(v.id);
      for (float x : v.values) w.F32(x);
    }
  } else {
    char buf[32];
    for (const EmbeddingVector& v : vectors) {
      if (v.id.find_first_of("\t\n") != std::string::npos) {
        throw InvalidArgument("vector id '" + v.id + "' contains a tab or newline");
      }
      out << v.id << '\t';
      for (size_t i = 0; i < v.values.size(); ++i) {
        if (i > 0) out << ' ';
        std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(v.values[i]));
        out << buf;
      }
      out << '\n';
    }
  }
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<EmbeddingVector> ReadVectors(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("cannot open " + path.string());
  char magic[8] = {};
  in.read(magic, 8);
  std::vector<EmbeddingVector> vectors;
  if (in.gcount() == 8 && std::string_view(magic, 8) == std::string_view(kMagic, 8)) {
    BinaryReader r(in, path.string());
    const uint32_t version = r.U32();
    if (version != kVersion) {
      throw FormatError(path.string() + ": unsupported vector file version " +
                        std::to_string(version));
    }
    const uint32_t dimension = r.U32();
    const uint64_t count = r.U64();
    for (uint64_t i = 0; i < count; ++i) {
      EmbeddingVector v;
      v.id = r.String();
      v.values.resize(dimension);
      for (uint32_t j = 0; j < dimension; ++j) v.values[j] = r.F32();
      vectors.push_back(std::move(v));
    }
    r.ExpectEnd();
  } else {
    in.clear();
    in.seekg(0);
    vectors = ReadTextVectors(in, path.string());
  }
  for (const EmbeddingVector& v : vectors) {
    CheckFinite(v);
    if (v.dimension() != vectors.front().dimension()) {
      throw FormatError(path.string() + ": vector '" + v.id +
                        "' has dimension " + std::to_string(v.dimension()) +
                        ", expected " +
                        std::to_string(vectors.front().dimension()));
    }
  }
  return vectors;
}

}  // namespace hybridir
