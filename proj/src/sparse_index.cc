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

#include "hybridir/sparse_index.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "hybridir/binary_io.h"
#include "hybridir/error.h"
#include "hybridir/parallel.h"

namespace hybridir {

namespace {

constexpr char kMagic[] = "HYIRSPRS";
constexpr uint32_t kVersion = 1;
constexpr char kFileName[] = "sparse.idx";

std::string MostFrequentLanguage(const std::vector<Document>& docs) {
  std::map<std::string, size_t> counts;
  for (const Document& doc : docs) ++counts[doc.language];
  std::string best = "und";
  size_t best_count = 0;
  for (const auto& [language, count] : counts) {
    if (count > best_count) {
      best = language;
      best_count = count;
    }
  }
  return best;
}

bool HitBefore(double score_a, std::string_view id_a, double score_b,
               std::string_view id_b) {
  if (score_a != score_b) return score_a > score_b;
  return id_a < id_b;
}

}  // namespace

WeightedQuery QueryFromTokens(const std::vector<std::string>& tokens) {
  WeightedQuery query;
  if (tokens.empty()) return query;
  for (const std::string& token : tokens) query.weights[token] += 1.0;
  const auto length = static_cast<double>(tokens.size());
  for (auto& [term, weight] : query.weights) weight /= length;
  query.scale = length;
  return query;
}

InvertedIndex InvertedIndex::Build(const std::vector<Document>& docs,
                                   const IndexOptions& options) {
  if (docs.empty()) throw InvalidArgument("cannot index an empty corpus");
  InvertedIndex index;
  index.options_ = options;
  std::sort(index.options_.analyzer.stopwords.begin(),
            index.options_.analyzer.stopwords.end());
  index.options_.analyzer.stopwords.erase(
      std::unique(index.options_.analyzer.stopwords.begin(),
                  index.options_.analyzer.stopwords.end()),
      index.options_.analyzer.stopwords.end());
  if (index.options_.language.empty()) {
    index.options_.language = MostFrequentLanguage(docs);
  }

  // Tokenize per document in parallel; merge in document order.
  std::vector<std::vector<std::pair<std::string, uint32_t>>> doc_counts(
      docs.size());
  index.doc_lengths_.assign(docs.size(), 0);
  ParallelFor(docs.size(), options.threads, [&](size_t begin, size_t end) {
    for (size_t d = begin; d < end; ++d) {
      const std::vector<std::string> tokens =
          Tokenize(IndexableText(docs[d], options.include_title),
                   docs[d].language, index.options_.analyzer);
      std::map<std::string, uint32_t> counts;
      for (const std::string& t : tokens) ++counts[t];
      doc_counts[d].assign(counts.begin(), counts.end());
      index.doc_lengths_[d] = static_cast<uint32_t>(tokens.size());
    }
  });

  std::map<std::string, std::vector<Posting>> postings;
  index.doc_ids_.reserve(docs.size());
  for (size_t d = 0; d < docs.size(); ++d) {
    index.doc_ids_.push_back(docs[d].doc_id);
    for (auto& [term, tf] : doc_counts[d]) {
      postings[term].push_back({static_cast<DocOrdinal>(d), tf});
    }
  }
  index.terms_.reserve(postings.size());
  index.postings_.reserve(postings.size());
  for (auto& [term, list] : postings) {
    index.terms_.push_back(term);
    index.postings_.push_back(std::move(list));
  }
  index.Finalize();
  return index;
}

void InvertedIndex::Finalize() {
  doc_lookup_.clear();
  doc_lookup_.reserve(doc_ids_.size());
  for (size_t d = 0; d < doc_ids_.size(); ++d) {
    if (!doc_lookup_.emplace(doc_ids_[d], static_cast<DocOrdinal>(d)).second) {
      throw InvalidArgument("duplicate doc id '" + doc_ids_[d] + "'");
    }
  }
  term_lookup_.clear();
  term_lookup_.reserve(terms_.size());
  doc_terms_.assign(doc_ids_.size(), {});
  for (size_t t = 0; t < terms_.size(); ++t) {
    term_lookup_.emplace(terms_[t], static_cast<TermId>(t));
    for (const Posting& p : postings_[t]) {
      doc_terms_[p.doc].push_back({static_cast<TermId>(t), p.tf});
    }
  }
  total_length_ = 0;
  for (uint32_t len : doc_lengths_) total_length_ += len;
  avgdl_ = doc_ids_.empty() ? 0.0
                            : static_cast<double>(total_length_) /
                                  static_cast<double>(doc_ids_.size());
}

std::optional<DocOrdinal> InvertedIndex::ordinal(
    std::string_view doc_id) const {
  auto it = doc_lookup_.find(std::string(doc_id));
  if (it == doc_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<TermId> InvertedIndex::term_id(std::string_view term) const {
  auto it = term_lookup_.find(std::string(term));
  if (it == term_lookup_.end()) return std::nullopt;
  return it->second;
}

std::span<const Posting> InvertedIndex::postings(std::string_view term) const {
  const auto id = term_id(term);
  if (!id) return {};
  return postings_[*id];
}

uint32_t InvertedIndex::tf(std::string_view term, DocOrdinal doc) const {
  const std::span<const Posting> list = postings(term);
  auto it = std::lower_bound(
      list.begin(), list.end(), doc,
      [](const Posting& p, DocOrdinal d) { return p.doc < d; });
  return (it != list.end() && it->doc == doc) ? it->tf : 0;
}

std::vector<std::string> InvertedIndex::Analyze(std::string_view text) const {
  return Tokenize(text, options_.language, options_.analyzer);
}

WeightedQuery InvertedIndex::ParseQuery(std::string_view text) const {
  return QueryFromTokens(Analyze(text));
}

// Layout (all integers little-endian):
//   magic[8] "HYIRSPRS", u32 version
//   analyzer: u8 lowercase, u8 stemmer, u32 n, n x string stopword
//   u8 include_title, string language
//   u32 N, N x (string doc_id, u32 length)
//   u32 T, T x (string term, u32 df, df x (varint doc_gap, varint tf))
// where string = u32 byte length + bytes and doc_gap is the difference from
// the previous posting's ordinal (the first gap is the ordinal itself).
void InvertedIndex::Save(const std::filesystem::path& dir) const {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const std::filesystem::path path = dir / kFileName;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  BinaryWriter w(out);
  w.Raw(std::string_view(kMagic, 8));
  w.U32(kVersion);
  w.U8(options_.analyzer.lowercase ? 1 : 0);
  w.U8(static_cast<uint8_t>(options_.analyzer.stemmer));
  w.U32(static_cast<uint32_t>(options_.analyzer.stopwords.size()));
  for (const std::string& s : options_.analyzer.stopwords) w.String(s);
  w.U8(options_.include_title ? 1 : 0);
  w.String(options_.language);
  w.U32(static_cast<uint32_t>(doc_ids_.size()));
  for (size_t d = 0; d < doc_ids_.size(); ++d) {
    w.String(doc_ids_[d]);
    w.U32(doc_lengths_[d]);
  }
  w.U32(static_cast<uint32_t>(terms_.size()));
  for (size_t t = 0; t < terms_.size(); ++t) {
    w.String(terms_[t]);
    w.U32(static_cast<uint32_t>(postings_[t].size()));
    DocOrdinal prev = 0;
    for (const Posting& p : postings_[t]) {
      w.Varint(p.doc - prev);
      w.Varint(p.tf);
      prev = p.doc;
    }
  }
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

InvertedIndex InvertedIndex::Load(const std::filesystem::path& dir) {
  const std::filesystem::path path = dir / kFileName;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("cannot open " + path.string());
  BinaryReader r(in, path.string());
  if (r.Raw(8) != std::string_view(kMagic, 8)) {
    throw FormatError(path.string() + ": not a sparse index");
  }
  const uint32_t version = r.U32();
  if (version != kVersion) {
    throw FormatError(path.string() + ": unsupported index version " +
                      std::to_string(version));
  }
  InvertedIndex index;
  index.options_.analyzer.lowercase = r.U8() != 0;
  const uint8_t stemmer = r.U8();
  if (stemmer > static_cast<uint8_t>(Stemmer::kPlural)) {
    throw FormatError(path.string() + ": unknown stemmer id");
  }
  index.options_.analyzer.stemmer = static_cast<Stemmer>(stemmer);
  const uint32_t num_stop = r.U32();
  for (uint32_t i = 0; i < num_stop; ++i) {
    index.options_.analyzer.stopwords.push_back(r.String());
  }
  index.options_.include_title = r.U8() != 0;
  index.options_.language = r.String();
  const uint32_t num_docs = r.U32();
  index.doc_ids_.reserve(num_docs);
  index.doc_lengths_.reserve(num_docs);
  for (uint32_t d = 0; d < num_docs; ++d) {
    index.doc_ids_.push_back(r.String());
    index.doc_lengths_.push_back(r.U32());
  }
  const uint32_t num_terms = r.U32();
  index.terms_.reserve(num_terms);
  index.postings_.reserve(num_terms);
  for (uint32_t t = 0; t < num_terms; ++t) {
    std::string term = r.String();
    if (!index.terms_.empty() && term <= index.terms_.back()) {
      throw FormatError(path.string() + ": term dictionary not sorted");
    }
    const uint32_t df = r.U32();
    std::vector<Posting> list;
    list.reserve(df);
    uint64_t doc = 0;
    for (uint32_t i = 0; i < df; ++i) {
      const uint64_t gap = r.Varint();
      if (i > 0 && gap == 0) {
        throw FormatError(path.string() + ": postings not strictly increasing");
      }
      doc += gap;
      const uint64_t tf = r.Varint();
      if (doc >= num_docs || tf == 0 || tf > UINT32_MAX) {
        throw FormatError(path.string() + ": corrupt posting");
      }
      list.push_back({static_cast<DocOrdinal>(doc), static_cast<uint32_t>(tf)});
    }
    index.terms_.push_back(std::move(term));
    index.postings_.push_back(std::move(list));
  }
  r.ExpectEnd();
  index.Finalize();
  return index;
}

double Bm25Idf(uint64_t df, uint64_t num_docs) {
  const double n = static_cast<double>(num_docs);
  const double f = static_cast<double>(df);
  return std::log1p((n - f + 0.5) / (f + 0.5));
}

double Bm25Saturation(uint32_t tf, uint32_t doc_length, double avgdl,
                      const Bm25Params& params) {
  const double f = static_cast<double>(tf);
  const double norm = 1.0 - params.b +
                      params.b * static_cast<double>(doc_length) / avgdl;
  return f / (f + params.k1 * norm);
}

double Bm25Score(const WeightedQuery& query, DocOrdinal doc,
                 const InvertedIndex& index, const Bm25Params& params) {
  double score = 0.0;
  for (const auto& [term, weight] : query.weights) {
    if (weight <= 0.0) continue;
    const uint32_t tf = index.tf(term, doc);
    if (tf == 0) continue;
    const double idf = Bm25Idf(index.df(term), index.num_docs());
    score += weight * query.scale * idf *
             Bm25Saturation(tf, index.doc_length(doc), index.avgdl(), params);
  }
  return score;
}

std::vector<ScoredHit> SearchWeighted(const InvertedIndex& index,
                                      const WeightedQuery& query, int k,
                                      const Bm25Params& params) {
  if (k < 1) throw InvalidArgument("k must be >= 1");
  std::vector<double> accumulators(index.num_docs(), 0.0);
  std::vector<char> matched(index.num_docs(), 0);
  std::vector<DocOrdinal> candidates;
  // Terms in lexicographic order, the same order Bm25Score sums in.
  for (const auto& [term, weight] : query.weights) {
    if (weight <= 0.0) continue;
    const std::span<const Posting> list = index.postings(term);
    if (list.empty()) continue;
    const double idf = Bm25Idf(list.size(), index.num_docs());
    for (const Posting& p : list) {
      accumulators[p.doc] +=
          weight * query.scale * idf *
          Bm25Saturation(p.tf, index.doc_length(p.doc), index.avgdl(), params);
      if (!matched[p.doc]) {
        matched[p.doc] = 1;
        candidates.push_back(p.doc);
      }
    }
  }
  auto before = [&](DocOrdinal a, DocOrdinal b) {
    return HitBefore(accumulators[a], index.doc_id(a), accumulators[b],
                     index.doc_id(b));
  };
  const size_t keep = std::min(candidates.size(), static_cast<size_t>(k));
  std::partial_sort(candidates.begin(), candidates.begin() + keep,
                    candidates.end(), before);
  std::vector<ScoredHit> hits;
  hits.reserve(keep);
  for (size_t i = 0; i < keep; ++i) {
    hits.push_back({index.doc_id(candidates[i]), accumulators[candidates[i]],
                    static_cast<int>(i + 1)});
  }
  return hits;
}

std::vector<ScoredHit> SearchBm25(const InvertedIndex& index,
                                  const Topic& topic, int k,
                                  const Bm25Params& params) {
  return SearchWeighted(index, index.ParseQuery(topic.text), k, params);
}

void SortHits(std::vector<ScoredHit>& hits) {
  std::sort(hits.begin(), hits.end(),
            [](const ScoredHit& a, const ScoredHit& b) {
              return HitBefore(a.score, a.doc_id, b.score, b.doc_id);
            });
  for (size_t i = 0; i < hits.size(); ++i) hits[i].rank = static_cast<int>(i + 1);
}

}  // namespace hybridir
