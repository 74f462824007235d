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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.h"
#include "hybridir/embedding.h"
#include "hybridir/error.h"

namespace hybridir {
namespace {

std::vector<std::string> Ids(const std::vector<ScoredHit>& hits) {
  std::vector<std::string> ids;
  for (const auto& h : hits) ids.push_back(h.doc_id);
  return ids;
}

std::vector<EmbeddingVector> Basis(size_t d) {
  std::vector<EmbeddingVector> out;
  for (size_t i = 0; i < d; ++i) {
    EmbeddingVector v{"e" + std::to_string(i + 1) + "#0", std::vector<float>(d, 0.f)};
    v.values[i] = 1.f;
    out.push_back(v);
  }
  return out;
}

// Scores every row, sorts everything, keeps k.
std::vector<ScoredHit> FullSort(const std::vector<EmbeddingVector>& rows,
                                const EmbeddingVector& q, size_t k) {
  std::vector<ScoredHit> all;
  for (const auto& r : rows) {
    double s = 0;
    for (size_t i = 0; i < r.values.size(); ++i) {
      s += static_cast<double>(r.values[i]) * static_cast<double>(q.values[i]);
    }
    all.push_back({r.id, s, 0});
  }
  std::stable_sort(all.begin(), all.end(), [](const ScoredHit& a, const ScoredHit& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  });
  all.resize(std::min(k, all.size()));
  return all;
}

TEST(BuildDense, Basic) {
  std::vector<EmbeddingVector> v = {{"a#0", {1, 2, 3, 4}}, {"b#0", {0, 0, 0, 1}}};
  const auto index = DenseIndex::Build(v, ParentsFromSegmentIds(v));
  EXPECT_EQ(index.dimension(), 4u);
  EXPECT_EQ(index.size(), 2u);
  EXPECT_EQ(index.parent_doc_id(0), "a");
  EXPECT_EQ(*index.ParentOf("b#0"), "b");
  EXPECT_EQ(index.ParentOf("zzz"), nullptr);
}

TEST(BuildDense, DimensionMismatchNamesId) {
  std::vector<EmbeddingVector> v = {{"a#0", {1, 2, 3, 4}}, {"odd#3", {1, 2, 3, 4, 5}}};
  try {
    DenseIndex::Build(v, ParentsFromSegmentIds(v));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("odd#3"), std::string::npos);
  }
}

TEST(BuildDense, RejectsNonFiniteDuplicatesAndOrphans) {
  std::vector<EmbeddingVector> nan = {{"a#0", {1, NAN}}};
  EXPECT_THROW(DenseIndex::Build(nan, ParentsFromSegmentIds(nan)), Error);
  std::vector<EmbeddingVector> inf = {{"a#0", {1, INFINITY}}};
  EXPECT_THROW(DenseIndex::Build(inf, ParentsFromSegmentIds(inf)), Error);
  std::vector<EmbeddingVector> dup = {{"a#0", {1, 0}}, {"a#0", {0, 1}}};
  EXPECT_THROW(DenseIndex::Build(dup, ParentsFromSegmentIds(dup)), Error);
  std::vector<EmbeddingVector> orphan = {{"a#0", {1, 0}}};
  EXPECT_THROW(DenseIndex::Build(orphan, ParentMap{}), Error);
  EXPECT_THROW(ParentsFromSegmentIds({{"nohash", {1}}}), Error);
}

TEST(SearchDense, OrthonormalBasis) {
  const auto v = Basis(5);
  const auto index = DenseIndex::Build(v, ParentsFromSegmentIds(v));
  const auto hits = SearchDense(index, {"q", {0, 0, 1, 0, 0}}, 1);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].doc_id, "e3#0");
  EXPECT_EQ(hits[0].score, 1.0);
}

TEST(SearchDense, KLargerThanIndex) {
  const auto v = Basis(5);
  const auto index = DenseIndex::Build(v, ParentsFromSegmentIds(v));
  const auto hits = SearchDense(index, {"q", {0, 0.5, 1, 0, 0}}, 100);
  EXPECT_EQ(Ids(hits),
            (std::vector<std::string>{"e3#0", "e2#0", "e1#0", "e4#0", "e5#0"}));
  for (size_t i = 0; i < hits.size(); ++i) EXPECT_EQ(hits[i].rank, static_cast<int>(i + 1));
}

TEST(SearchDense, Errors) {
  const auto v = Basis(3);
  const auto index = DenseIndex::Build(v, ParentsFromSegmentIds(v));
  EXPECT_THROW(SearchDense(index, {"q", {1, 0}}), Error);
  EXPECT_THROW(SearchDense(index, {"q", {1, 0, 0}}, 0), Error);
}

TEST(SearchDense, MatchesFullSortOracle) {
  SplitMix64 rng(99);
  auto rows = testing::RandomVectors(rng, 1000, 32, "s");
  for (auto& r : rows) r.id = "d" + r.id.substr(1) + "#0";
  const auto index = DenseIndex::Build(rows, ParentsFromSegmentIds(rows));
  const auto queries = testing::RandomVectors(rng, 20, 32, "q");
  for (const auto& q : queries) {
    for (int threads : {1, 3}) {
      const auto got = SearchDense(index, q, 100, threads);
      const auto want = FullSort(rows, q, 100);
      ASSERT_EQ(Ids(got), Ids(want));
      for (size_t i = 0; i < got.size(); ++i) EXPECT_EQ(got[i].score, want[i].score);
    }
  }
}

TEST(SearchDense, TiesBySegmentId) {
  std::vector<EmbeddingVector> v = {{"c#0", {1, 0}}, {"a#0", {1, 0}}, {"b#0", {1, 0}}};
  const auto index = DenseIndex::Build(v, ParentsFromSegmentIds(v));
  EXPECT_EQ(Ids(SearchDense(index, {"q", {2, 0}})),
            (std::vector<std::string>{"a#0", "b#0", "c#0"}));
}

TEST(SearchDense, ScalingQueryKeepsRanking) {
  SplitMix64 rng(5);
  auto rows = testing::RandomVectors(rng, 300, 16, "x");
  for (auto& r : rows) r.id += "#0";
  const auto index = DenseIndex::Build(rows, ParentsFromSegmentIds(rows));
  for (const auto& q : testing::RandomVectors(rng, 10, 16, "q")) {
    EmbeddingVector scaled = q;
    for (float& f : scaled.values) f *= 4.0f;
    EXPECT_EQ(Ids(SearchDense(index, q, 50)), Ids(SearchDense(index, scaled, 50)));
  }
}

TEST(Aggregate, Singleton) {
  const ParentMap parents = {{"d#0", "d"}};
  const auto docs = AggregateSegments({{"d#0", 2.5, 1}}, parents);
  ASSERT_EQ(docs.size(), 1u);
  EXPECT_EQ(docs[0].doc_id, "d");
  EXPECT_EQ(docs[0].score, 2.5);
}

TEST(Aggregate, TopThreeMean) {
  const ParentMap parents = {{"d#0", "d"}, {"d#1", "d"}, {"d#2", "d"}, {"d#3", "d"}};
  const auto docs = AggregateSegments(
      {{"d#2", 6, 1}, {"d#0", 4, 2}, {"d#1", 2, 3}, {"d#3", 1, 4}}, parents, 3);
  ASSERT_EQ(docs.size(), 1u);
  EXPECT_EQ(docs[0].score, 4.0);
}

TEST(Aggregate, TieByDocId) {
  const ParentMap parents = {{"b#0", "b"}, {"a#0", "a"}};
  EXPECT_EQ(Ids(AggregateSegments({{"b#0", 5, 1}, {"a#0", 5, 2}}, parents)),
            (std::vector<std::string>{"a", "b"}));
}

TEST(Aggregate, UnknownSegmentIsError) {
  EXPECT_THROW(AggregateSegments({{"x#0", 1, 1}}, ParentMap{}), Error);
}

TEST(Aggregate, BoundsAndMaxPooling) {
  SplitMix64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    ParentMap parents;
    std::vector<ScoredHit> hits;
    const size_t n = 1 + rng.Below(30);
    for (size_t i = 0; i < n; ++i) {
      const std::string doc = "d" + std::to_string(rng.Below(6));
      const std::string seg = doc + "#" + std::to_string(i);
      parents[seg] = doc;
      hits.push_back({seg, rng.Normal(), 0});
    }
    const auto mean3 = AggregateSegments(hits, parents, 3);
    const auto max1 = AggregateSegments(hits, parents, 1);
    for (const auto& doc : mean3) {
      std::vector<double> scores;
      for (const auto& h : hits) {
        if (parents[h.doc_id] == doc.doc_id) scores.push_back(h.score);
      }
      std::sort(scores.rbegin(), scores.rend());
      EXPECT_LE(scores[std::min<size_t>(3, scores.size()) - 1], doc.score + 1e-12);
      EXPECT_LE(doc.score, scores[0] + 1e-12);
      const auto it = std::find_if(max1.begin(), max1.end(),
                                   [&](const ScoredHit& h) { return h.doc_id == doc.doc_id; });
      ASSERT_NE(it, max1.end());
      EXPECT_EQ(it->score, scores[0]);
    }
  }
}

TEST(DensePersistence, RoundTrip) {
  testing::TempDir dir;
  SplitMix64 rng(31);
  auto rows = testing::RandomVectors(rng, 200, 24, "doc");
  for (size_t i = 0; i < rows.size(); ++i) rows[i].id += "#" + std::to_string(i % 3);
  const auto index = DenseIndex::Build(rows, ParentsFromSegmentIds(rows));
  index.Save(dir.path());
  const auto loaded = DenseIndex::Load(dir.path());
  for (const auto& q : testing::RandomVectors(rng, 20, 24, "q")) {
    EXPECT_EQ(SearchDense(index, q, 10), SearchDense(loaded, q, 10));
  }
  testing::TempDir again;
  loaded.Save(again.path());
  EXPECT_EQ(testing::ReadFile(dir / "dense.idx"), testing::ReadFile(again / "dense.idx"));

  std::string bytes = testing::ReadFile(dir / "dense.idx");
  bytes[8] = 42;
  testing::WriteFile(dir / "dense.idx", bytes);
  EXPECT_THROW(DenseIndex::Load(dir.path()), Error);
}

TEST(HashingEncoder, DeterministicAndNormalized) {
  const HashingEncoder encoder;
  const auto a = encoder.EmbedPassage("p", "Dense retrieval with hashed features");
  const auto b = encoder.EmbedPassage("p", "Dense retrieval with hashed features");
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.dimension(), 256u);
  double norm = 0;
  for (float f : a.values) norm += static_cast<double>(f) * f;
  EXPECT_NEAR(norm, 1.0, 1e-6);
  EXPECT_EQ(encoder.EmbedQuery("q", "").values, std::vector<float>(256, 0.f));
}

TEST(HashingEncoder, BucketAndSign) {
  const HashingEncoder encoder(64);
  const std::vector<float> v = encoder.Encode("token");
  const uint64_t h = Fnv1a64("token");
  std::vector<float> want(64, 0.f);
  want[h % 64] = (h >> 63) ? -1.f : 1.f;
  EXPECT_EQ(v, want);
}

TEST(Fnv1a, KnownValues) {
  EXPECT_EQ(Fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(Fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(Fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(HashingEncoder, TopicalSimilarity) {
  const HashingEncoder encoder;
  const auto q = encoder.EmbedQuery("q", "solar panel energy");
  const auto near = encoder.EmbedPassage("p", "solar energy from panel arrays");
  const auto far = encoder.EmbedPassage("p", "medieval castle architecture");
  EXPECT_GT(InnerProduct(q.values, near.values), InnerProduct(q.values, far.values));
}

TEST(VectorFiles, RoundTripBothFormats) {
  testing::TempDir dir;
  SplitMix64 rng(1);
  const auto v = testing::RandomVectors(rng, 50, 7, "seg#");
  WriteVectors(v, dir / "v.bin", VectorFileFormat::kBinary);
  WriteVectors(v, dir / "v.txt", VectorFileFormat::kText);
  EXPECT_EQ(ReadVectors(dir / "v.bin"), v);
  EXPECT_EQ(ReadVectors(dir / "v.txt"), v);
}

TEST(VectorFiles, RejectsMixedDimensionsAndGarbage) {
  testing::TempDir dir;
  testing::WriteFile(dir / "bad.txt", "a\t1 2\nb\t1 2 3\n");
  EXPECT_THROW(ReadVectors(dir / "bad.txt"), Error);
  testing::WriteFile(dir / "nan.txt", "a\t1 x\n");
  EXPECT_THROW(ReadVectors(dir / "nan.txt"), Error);
  EXPECT_THROW(ReadVectors(dir / "missing.vec"), Error);
}

TEST(Precomputed, LooksUpById) {
  const PrecomputedEmbeddings store({{"q1", {1, 0}}}, {{"p1#0", {0, 1}}});
  EXPECT_EQ(store.dimension(), 2u);
  EXPECT_EQ(store.EmbedQuery("q1", "ignored").values, (std::vector<float>{1, 0}));
  EXPECT_EQ(store.EmbedPassage("p1#0", "").values, (std::vector<float>{0, 1}));
  EXPECT_THROW(store.EmbedQuery("q2", ""), Error);
}

}  // namespace
}  // namespace hybridir
