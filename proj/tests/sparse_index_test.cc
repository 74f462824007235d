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

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "fixtures.h"
#include "hybridir/error.h"

namespace hybridir {
namespace {

constexpr double kK1 = 0.9;
constexpr double kB = 0.4;

std::vector<Document> ThreeDocs() {
  return {{"d1", "", "a b", "en"}, {"d2", "", "a a b", "en"}, {"d3", "", "c", "en"}};
}

std::vector<std::string> Ids(const std::vector<ScoredHit>& hits) {
  std::vector<std::string> ids;
  for (const auto& h : hits) ids.push_back(h.doc_id);
  return ids;
}

TEST(BuildIndex, SharedTermDf) {
  const auto index = InvertedIndex::Build(
      {{"x", "", "t u", "en"}, {"y", "", "t", "en"}, {"z", "", "v t", "en"}});
  EXPECT_EQ(index.df("t"), 3u);
  EXPECT_EQ(index.df("u"), 1u);
  EXPECT_EQ(index.df("missing"), 0u);
}

TEST(BuildIndex, RepeatedToken) {
  const auto index = InvertedIndex::Build({{"x", "", "a a a", "en"}});
  EXPECT_EQ(index.tf("a", 0), 3u);
  EXPECT_EQ(index.doc_length(0), 3u);
}

TEST(BuildIndex, EmptyCorpusIsError) {
  EXPECT_THROW(InvertedIndex::Build({}), Error);
}

TEST(BuildIndex, DuplicateIdIsError) {
  EXPECT_THROW(InvertedIndex::Build({{"x", "", "a", "en"}, {"x", "", "b", "en"}}),
               Error);
}

TEST(BuildIndex, TitleSwitch) {
  const std::vector<Document> docs = {{"x", "Zebra", "a", "en"}};
  IndexOptions with;
  IndexOptions without;
  without.include_title = false;
  EXPECT_EQ(InvertedIndex::Build(docs, with).df("zebra"), 1u);
  EXPECT_EQ(InvertedIndex::Build(docs, without).df("zebra"), 0u);
}

TEST(BuildIndex, InvariantsOnRandomCorpora) {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto docs = testing::RandomCorpus(rng, 1 + rng.Below(80), 40, 30);
    IndexOptions options;
    options.threads = 1 + static_cast<int>(trial % 4);
    const auto index = InvertedIndex::Build(docs, options);
    uint64_t total = 0;
    for (DocOrdinal d = 0; d < index.num_docs(); ++d) total += index.doc_length(d);
    EXPECT_EQ(total, index.total_length());
    EXPECT_NEAR(index.avgdl(), static_cast<double>(total) / index.num_docs(),
                1e-9 * index.avgdl());
    for (const std::string& term : index.terms()) {
      const auto list = index.postings(term);
      EXPECT_EQ(index.df(term), list.size());
      for (size_t i = 1; i < list.size(); ++i) EXPECT_LT(list[i - 1].doc, list[i].doc);
    }
    // Thread count does not change the index.
    EXPECT_EQ(index.terms(), InvertedIndex::Build(docs).terms());
  }
}

TEST(Bm25, HandComputedFixture) {
  const auto index = InvertedIndex::Build(ThreeDocs());
  ASSERT_DOUBLE_EQ(index.avgdl(), 2.0);
  const double idf = std::log(1.6);  // ln(1 + (3 - 2 + 0.5) / (2 + 0.5))
  const double d1 = idf * 1.0 / (1.0 + kK1 * (1 - kB + kB * 2.0 / 2.0));
  const double d2 = idf * 2.0 / (2.0 + kK1 * (1 - kB + kB * 3.0 / 2.0));
  const WeightedQuery q = index.ParseQuery("a");
  EXPECT_NEAR(Bm25Score(q, 0, index), d1, 1e-12);
  EXPECT_NEAR(Bm25Score(q, 1, index), d2, 1e-12);
  EXPECT_EQ(Bm25Score(q, 2, index), 0.0);
  EXPECT_GT(d2, d1);

  const auto hits = SearchBm25(index, {"q", "a"}, 2);
  EXPECT_EQ(Ids(hits), (std::vector<std::string>{"d2", "d1"}));
  EXPECT_NEAR(hits[0].score, d2, 1e-12);
  EXPECT_EQ(hits[0].rank, 1);
  EXPECT_EQ(hits[1].rank, 2);
}

TEST(Bm25, AbsentTermContributesZero) {
  const auto index = InvertedIndex::Build(ThreeDocs());
  EXPECT_EQ(Bm25Score(index.ParseQuery("c"), 0, index), 0.0);
  EXPECT_EQ(Bm25Score(index.ParseQuery("nothing"), 1, index), 0.0);
}

TEST(Bm25, TermInEveryDocumentStillScores) {
  const auto index = InvertedIndex::Build({{"x", "", "a", "en"}, {"y", "", "a b", "en"}});
  EXPECT_GT(Bm25Score(index.ParseQuery("a"), 0, index), 0.0);
}

TEST(Bm25, IdfPositive) {
  for (uint64_t n = 1; n <= 200; ++n) {
    for (uint64_t df = 1; df <= n; ++df) ASSERT_GT(Bm25Idf(df, n), 0.0);
  }
}

TEST(Bm25, MonotoneInTf) {
  const Bm25Params p;
  for (uint32_t dl : {1u, 5u, 50u}) {
    double prev = 0.0;
    for (uint32_t tf = 1; tf <= 40; ++tf) {
      const double s = Bm25Saturation(tf, dl, 7.5, p);
      EXPECT_GT(s, prev);
      prev = s;
    }
  }
}

TEST(Bm25, DuplicatedTextStaysBelowAsymptote) {
  const Bm25Params p;
  for (uint32_t tf = 1; tf <= 20; ++tf) {
    for (uint32_t dl = tf; dl <= 60; dl += 7) {
      const double once = Bm25Saturation(tf, dl, 10.0, p);
      const double twice = Bm25Saturation(2 * tf, 2 * dl, 10.0, p);
      EXPECT_LT(once, 1.0);
      EXPECT_LT(twice, 1.0);
      EXPECT_GE(twice, once);
    }
  }
}

TEST(SearchBm25, NoIndexedTerms) {
  const auto index = InvertedIndex::Build(ThreeDocs());
  EXPECT_TRUE(SearchBm25(index, {"q", "zzz yyy"}).empty());
  EXPECT_TRUE(SearchBm25(index, {"q", ""}).empty());
}

TEST(SearchBm25, LargeKReturnsAllMatches) {
  const auto index = InvertedIndex::Build(ThreeDocs());
  EXPECT_EQ(SearchBm25(index, {"q", "b"}, 1000).size(), 2u);
}

TEST(SearchBm25, RejectsNonPositiveK) {
  const auto index = InvertedIndex::Build(ThreeDocs());
  EXPECT_THROW(SearchBm25(index, {"q", "a"}, 0), Error);
}

TEST(SearchBm25, TiesByDocId) {
  const auto index = InvertedIndex::Build(
      {{"b", "", "x y", "en"}, {"c", "", "x y", "en"}, {"a", "", "x y", "en"}});
  EXPECT_EQ(Ids(SearchBm25(index, {"q", "x"})),
            (std::vector<std::string>{"a", "b", "c"}));
}

// Scores every document by a direct scan of its own token counts.
std::vector<ScoredHit> BruteForce(const std::vector<Document>& docs,
                                  const std::string& query) {
  std::vector<std::map<std::string, uint32_t>> counts(docs.size());
  std::vector<uint32_t> lengths(docs.size());
  std::map<std::string, uint32_t> df;
  double total = 0;
  for (size_t d = 0; d < docs.size(); ++d) {
    std::istringstream in(docs[d].text);
    std::string w;
    while (in >> w) {
      ++counts[d][w];
      ++lengths[d];
    }
    total += lengths[d];
    for (const auto& [term, c] : counts[d]) ++df[term];
  }
  const double avgdl = total / docs.size();
  std::map<std::string, double> q;
  std::istringstream in(query);
  std::string w;
  double len = 0;
  while (in >> w) {
    q[w] += 1;
    ++len;
  }
  std::vector<ScoredHit> hits;
  for (size_t d = 0; d < docs.size(); ++d) {
    double score = 0;
    bool matched = false;
    for (const auto& [term, count] : q) {
      const auto it = counts[d].find(term);
      if (it == counts[d].end()) continue;
      matched = true;
      const double n = docs.size();
      const double f = df[term];
      const double idf = std::log(1.0 + (n - f + 0.5) / (f + 0.5));
      const double tf = it->second;
      score += (count / len) * len * idf *
               (tf / (tf + kK1 * (1.0 - kB + kB * lengths[d] / avgdl)));
    }
    if (matched) hits.push_back({docs[d].doc_id, score, 0});
  }
  std::sort(hits.begin(), hits.end(), [](const ScoredHit& a, const ScoredHit& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  });
  return hits;
}

TEST(SearchBm25, MatchesBruteForceScan) {
  SplitMix64 rng(2024);
  for (int corpus = 0; corpus < 10; ++corpus) {
    const auto docs = testing::RandomCorpus(rng, 1 + rng.Below(100), 60, 25);
    const auto index = InvertedIndex::Build(docs);
    for (int q = 0; q < 10; ++q) {
      const std::string query = testing::RandomQuery(rng, 60, 5);
      const auto got = SearchBm25(index, {"q", query}, static_cast<int>(docs.size()));
      const auto want = BruteForce(docs, query);
      ASSERT_EQ(Ids(got), Ids(want)) << query;
      for (size_t i = 0; i < got.size(); ++i) {
        EXPECT_NEAR(got[i].score, want[i].score, 1e-9 * std::abs(want[i].score));
        EXPECT_EQ(got[i].rank, static_cast<int>(i + 1));
      }
    }
  }
}

TEST(SearchBm25, Deterministic) {
  SplitMix64 rng(9);
  const auto docs = testing::RandomCorpus(rng, 80, 30, 20);
  const auto a = InvertedIndex::Build(docs);
  IndexOptions threaded;
  threaded.threads = 4;
  const auto b = InvertedIndex::Build(docs, threaded);
  for (int q = 0; q < 20; ++q) {
    const Topic topic{"q", testing::RandomQuery(rng, 30, 4)};
    EXPECT_EQ(SearchBm25(a, topic), SearchBm25(b, topic));
    EXPECT_EQ(SearchBm25(a, topic), SearchBm25(a, topic));
  }
}

TEST(Persistence, SaveLoadIdenticalResultsAndBytes) {
  testing::TempDir dir;
  SplitMix64 rng(77);
  const auto docs = testing::RandomCorpus(rng, 100, 50, 30);
  const auto index = InvertedIndex::Build(docs);
  index.Save(dir.path());
  const auto loaded = InvertedIndex::Load(dir.path());
  for (int q = 0; q < 20; ++q) {
    const Topic topic{"q", testing::RandomQuery(rng, 50, 4)};
    EXPECT_EQ(SearchBm25(index, topic), SearchBm25(loaded, topic));
  }
  testing::TempDir again;
  loaded.Save(again.path());
  EXPECT_EQ(testing::ReadFile(dir / "sparse.idx"), testing::ReadFile(again / "sparse.idx"));
  EXPECT_EQ(loaded.options().analyzer, index.options().analyzer);
}

TEST(Persistence, RejectsCorruptFiles) {
  testing::TempDir dir;
  InvertedIndex::Build(ThreeDocs()).Save(dir.path());
  std::string bytes = testing::ReadFile(dir / "sparse.idx");

  testing::WriteFile(dir / "sparse.idx", "NOTANIDX" + bytes.substr(8));
  EXPECT_THROW(InvertedIndex::Load(dir.path()), Error);

  std::string bumped = bytes;
  bumped[8] = 99;
  testing::WriteFile(dir / "sparse.idx", bumped);
  EXPECT_THROW(InvertedIndex::Load(dir.path()), Error);

  testing::WriteFile(dir / "sparse.idx", bytes.substr(0, bytes.size() - 3));
  EXPECT_THROW(InvertedIndex::Load(dir.path()), Error);

  testing::TempDir empty;
  try {
    InvertedIndex::Load(empty.path());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
}

TEST(Query, UniformWeights) {
  const auto q = QueryFromTokens({"a", "b", "a"});
  EXPECT_DOUBLE_EQ(q.weights.at("a"), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(q.weights.at("b"), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(q.scale, 3.0);
}

}  // namespace
}  // namespace hybridir
