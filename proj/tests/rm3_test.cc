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


#include "hybridir/rm3.h"

#include <gtest/gtest.h>

#include "fixtures.h"
#include "hybridir/error.h"

namespace hybridir {
namespace {

std::vector<std::string> Ids(const std::vector<ScoredHit>& hits) {
  std::vector<std::string> ids;
  for (const auto& h : hits) ids.push_back(h.doc_id);
  return ids;
}

double Sum(const WeightedQuery& q) {
  double s = 0;
  for (const auto& [t, w] : q.weights) s += w;
  return s;
}

TEST(Rm3, OrigWeightOneKeepsOriginalDistribution) {
  const auto index = InvertedIndex::Build(
      {{"d1", "", "a b c", "en"}, {"d2", "", "a d", "en"}, {"d3", "", "e", "en"}});
  const Topic topic{"q", "a b a"};
  const auto hits = SearchBm25(index, topic);
  Rm3Params params;
  params.orig_weight = 1.0;
  const WeightedQuery expanded = Rm3Expand(index, topic, hits, params);
  const WeightedQuery original = index.ParseQuery(topic.text);
  EXPECT_EQ(expanded.weights, original.weights);
}

TEST(Rm3, EmptyFeedbackReturnsOriginal) {
  const auto index = InvertedIndex::Build({{"d1", "", "a", "en"}});
  const WeightedQuery original = index.ParseQuery("a z");
  EXPECT_EQ(Rm3Expand(index, original, {}), original);
}

TEST(Rm3, SingleFeedbackDocument) {
  const auto index = InvertedIndex::Build(
      {{"fb", "", "x x y", "en"}, {"other", "", "z", "en"}});
  const auto hits = SearchBm25(index, {"q", "y"});
  ASSERT_EQ(Ids(hits), std::vector<std::string>{"fb"});
  const auto model = EstimateRelevanceModel(index, hits, 10);
  EXPECT_NEAR(model.at("x"), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(model.at("y"), 1.0 / 3.0, 1e-12);

  Rm3Params params;
  params.fb_terms = 1;
  const WeightedQuery expanded = Rm3Expand(index, {"q", "y"}, hits, params);
  ASSERT_EQ(expanded.weights.size(), 2u);
  EXPECT_NEAR(expanded.weights.at("x"), 0.5, 1e-12);
  EXPECT_NEAR(expanded.weights.at("y"), 0.5, 1e-12);
}

TEST(Rm3, FeedbackPullsInUnmatchedRelevantDocument) {
  const auto index = InvertedIndex::Build({{"d1", "", "apple banana", "en"},
                                           {"d2", "", "banana cherry cherry", "en"},
                                           {"d3", "", "cherry date", "en"},
                                           {"d4", "", "elder fig", "en"}});
  const Topic topic{"q", "apple"};
  EXPECT_EQ(Ids(SearchBm25(index, topic)), std::vector<std::string>{"d1"});
  const auto expanded = SearchBm25Rm3(index, topic);
  EXPECT_EQ(Ids(expanded), (std::vector<std::string>{"d1", "d2"}));
}

TEST(Rm3, FbDocsZeroMatchesBm25) {
  SplitMix64 rng(4);
  const auto docs = testing::RandomCorpus(rng, 60, 30, 20);
  const auto index = InvertedIndex::Build(docs);
  Rm3Params params;
  params.fb_docs = 0;
  for (int q = 0; q < 20; ++q) {
    const Topic topic{"q", testing::RandomQuery(rng, 30, 4)};
    EXPECT_EQ(SearchBm25Rm3(index, topic, 50, params), SearchBm25(index, topic, 50));
  }
}

TEST(Rm3, OrigWeightOneMatchesBm25Ranking) {
  SplitMix64 rng(8);
  const auto docs = testing::RandomCorpus(rng, 60, 30, 20);
  const auto index = InvertedIndex::Build(docs);
  Rm3Params params;
  params.orig_weight = 1.0;
  for (int q = 0; q < 20; ++q) {
    const Topic topic{"q", testing::RandomQuery(rng, 30, 4)};
    EXPECT_EQ(Ids(SearchBm25Rm3(index, topic, 50, params)),
              Ids(SearchBm25(index, topic, 50)));
  }
}

TEST(Rm3, OutputIsDistribution) {
  SplitMix64 rng(12);
  for (int corpus = 0; corpus < 10; ++corpus) {
    const auto docs = testing::RandomCorpus(rng, 20 + rng.Below(60), 40, 25);
    const auto index = InvertedIndex::Build(docs);
    for (int q = 0; q < 10; ++q) {
      const Topic topic{"q", testing::RandomQuery(rng, 40, 4)};
      const auto hits = SearchBm25(index, topic);
      Rm3Params params;
      params.fb_docs = 1 + static_cast<int>(rng.Below(12));
      params.fb_terms = 1 + static_cast<int>(rng.Below(12));
      params.orig_weight = rng.Uniform();
      const WeightedQuery expanded = Rm3Expand(index, topic, hits, params);
      if (hits.empty()) continue;
      for (const auto& [t, w] : expanded.weights) EXPECT_GE(w, 0.0);
      EXPECT_NEAR(Sum(expanded), 1.0, 1e-9);
      EXPECT_EQ(expanded.scale, 1.0);
    }
  }
}

TEST(Rm3, RejectsBadParameters) {
  const auto index = InvertedIndex::Build({{"d1", "", "a", "en"}});
  Rm3Params params;
  params.orig_weight = 1.5;
  EXPECT_THROW(Rm3Expand(index, {"q", "a"}, SearchBm25(index, {"q", "a"}), params),
               Error);
}

}  // namespace
}  // namespace hybridir
