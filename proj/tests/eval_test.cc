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


#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fixtures.h"
#include "hybridir/error.h"
#include "hybridir/metrics.h"
#include "hybridir/run.h"
#include "hybridir/significance.h"

namespace hybridir {
namespace {

RankedList List(const std::vector<std::string>& ids) {
  RankedList out;
  double s = static_cast<double>(ids.size());
  for (const auto& id : ids) out.push_back({id, s--});
  return out;
}

TEST(ParseRun, SingleLine) {
  std::istringstream in("42 Q0 doc7 1 13.370000 tagA\n");
  const hybridir::Run run = ParseRun(in);
  EXPECT_EQ(run.tag, "tagA");
  ASSERT_EQ(run.topics.count("42"), 1u);
  ASSERT_EQ(run.topics.at("42").size(), 1u);
  EXPECT_EQ(run.topics.at("42")[0].doc_id, "doc7");
  EXPECT_DOUBLE_EQ(run.topics.at("42")[0].score, 13.37);
}

TEST(ParseRun, DuplicateDocIsError) {
  std::istringstream in("1 Q0 a 1 2.0 t\n1 Q0 b 2 1.0 t\n1 Q0 a 3 0.5 t\n");
  try {
    ParseRun(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFormat);
    EXPECT_NE(std::string(e.what()).find("3"), std::string::npos);
  }
}

TEST(ParseRun, MalformedLineNamesLine) {
  std::istringstream in("1 Q0 a 1 2.0 t\n1 Q0 b two 1.0 t\n");
  try {
    ParseRun(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("2"), std::string::npos) << e.what();
  }
  std::istringstream short_line("1 Q0 a 1\n");
  EXPECT_THROW(ParseRun(short_line), Error);
}

TEST(ParseRun, HundredEntryRoundTripIsByteIdentical) {
  SplitMix64 rng(8);
  hybridir::Run run;
  run.tag = "sys";
  for (int t = 0; t < 4; ++t) {
    RankedList list;
    double score = 50.0;
    for (int d = 0; d < 25; ++d) {
      score -= rng.Uniform();
      list.push_back({"doc" + std::to_string(rng.Below(100000)) + "_" + std::to_string(d),
                      std::round(score * 1e6) / 1e6});
    }
    run.topics[std::to_string(300 + t)] = list;
  }
  std::ostringstream first;
  WriteRun(run, first);
  std::istringstream in(first.str());
  const hybridir::Run parsed = ParseRun(in);
  EXPECT_EQ(parsed, run);
  std::ostringstream second;
  WriteRun(parsed, second);
  EXPECT_EQ(first.str(), second.str());
  const std::string text = first.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 100);
}

TEST(Qrels, ParseAndErrors) {
  std::istringstream in("1 0 a 2\n1 0 b 0\n2 0 c 1\n");
  const Qrels q = ParseQrels(in);
  EXPECT_EQ(q.at("1").at("a"), 2);
  EXPECT_EQ(CountRelevant(q.at("1")), 1);
  std::istringstream neg("1 0 a -1\n");
  EXPECT_THROW(ParseQrels(neg), Error);
  std::istringstream dup("1 0 a 1\n1 0 a 0\n");
  EXPECT_THROW(ParseQrels(dup), Error);
  std::ostringstream out;
  WriteQrels(q, out);
  std::istringstream back(out.str());
  EXPECT_EQ(ParseQrels(back), q);
}

TEST(Ap, PerfectRanking) {
  const Judgments j = {{"a", 1}, {"b", 1}, {"c", 2}};
  EXPECT_DOUBLE_EQ(*AveragePrecision(List({"c", "a", "b", "x"}), j), 1.0);
}

TEST(Ap, RelevantAtRankTwo) {
  EXPECT_DOUBLE_EQ(*AveragePrecision(List({"x", "a"}), {{"a", 1}}), 0.5);
}

TEST(Ap, NothingRetrievedWithinCutoff) {
  EXPECT_DOUBLE_EQ(*AveragePrecision(List({"x", "y", "a"}), {{"a", 1}}, 2), 0.0);
}

TEST(Ap, NoRelevantDocsIsExcluded) {
  EXPECT_FALSE(AveragePrecision(List({"a"}), {{"a", 0}}).has_value());
}

TEST(Ap, RIsUncapped) {
  // One of two relevant docs retrieved at rank 1.
  EXPECT_DOUBLE_EQ(*AveragePrecision(List({"a"}), {{"a", 1}, {"b", 1}}), 0.5);
}

TEST(Precision, Examples) {
  std::vector<std::string> ids;
  Judgments j;
  for (int i = 0; i < 20; ++i) {
    ids.push_back("d" + std::to_string(i));
    if (i % 2 == 0) j[ids.back()] = 1;
  }
  EXPECT_DOUBLE_EQ(PrecisionAt(List(ids), j), 0.5);
  EXPECT_DOUBLE_EQ(PrecisionAt({}, j), 0.0);
  EXPECT_DOUBLE_EQ(PrecisionAt(List({"d0", "d2", "d4", "d6", "d8"}), j), 0.25);
}

TEST(Ndcg, IdealOrdering) {
  const Judgments j = {{"a", 3}, {"b", 2}, {"c", 1}, {"z", 0}};
  EXPECT_DOUBLE_EQ(*NdcgAt(List({"a", "b", "c", "z"}), j), 1.0);
}

TEST(Ndcg, WorkedExample) {
  const Judgments j = {{"a", 1}, {"c", 1}};
  const double dcg = 1.0 + 1.0 / std::log2(4.0);
  const double idcg = 1.0 + 1.0 / std::log2(3.0);
  EXPECT_NEAR(*NdcgAt(List({"a", "b", "c"}), j), dcg / idcg, 1e-12);
  EXPECT_NEAR(*NdcgAt(List({"a", "b", "c"}), j), 0.9197, 5e-5);
}

TEST(Ndcg, ShortRunSumsAvailableRanks) {
  EXPECT_NEAR(*NdcgAt(List({"x", "a"}), {{"a", 1}}), 1.0 / std::log2(3.0), 1e-12);
  EXPECT_FALSE(NdcgAt(List({"x"}), {{"a", 0}}).has_value());
}

TEST(Metrics, RangeAndRankOnlyDependence) {
  SplitMix64 rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    Judgments j;
    RankedList list;
    const size_t n = rng.Below(40);
    for (size_t i = 0; i < n; ++i) {
      const std::string id = "d" + std::to_string(i);
      list.push_back({id, 100.0 - static_cast<double>(i) - rng.Uniform() * 0.5});
      if (rng.Uniform() < 0.4) j[id] = static_cast<int>(rng.Below(4));
    }
    j["unretrieved"] = 1;
    const auto ap = AveragePrecision(list, j);
    const auto nd = NdcgAt(list, j);
    const double p = PrecisionAt(list, j);
    ASSERT_TRUE(ap && nd);
    for (double v : {*ap, *nd, p}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    RankedList transformed = list;
    for (auto& e : transformed) e.score = std::exp(e.score / 10.0);
    EXPECT_EQ(*AveragePrecision(transformed, j), *ap);
    EXPECT_EQ(*NdcgAt(transformed, j), *nd);

    // Swap a relevant doc above a non-relevant one.
    auto grade = [&](const std::string& id) {
      const auto it = j.find(id);
      return it == j.end() ? 0 : it->second;
    };
    for (size_t i = 1; i < list.size(); ++i) {
      if (grade(list[i].doc_id) <= 0 || grade(list[i - 1].doc_id) > 0) continue;
      RankedList swapped = list;
      std::swap(swapped[i - 1].doc_id, swapped[i].doc_id);
      EXPECT_GE(*AveragePrecision(swapped, j) + 1e-12, *ap);
      EXPECT_GE(*NdcgAt(swapped, j) + 1e-12, *nd);
      break;
    }
  }
}

TEST(Evaluate, ExcludesUnjudgedAndMissingTopics) {
  hybridir::Run run;
  run.tag = "r";
  run.topics["1"] = List({"a", "b"});
  run.topics["2"] = List({"c"});
  run.topics["3"] = List({"d"});
  Qrels qrels;
  qrels["1"] = {{"b", 1}};
  qrels["2"] = {{"c", 0}};
  qrels["4"] = {{"z", 1}};
  const MetricReport report = Evaluate(run, qrels);
  ASSERT_EQ(report.topics.size(), 1u);
  EXPECT_DOUBLE_EQ(report.map, 0.5);
  const MetricReport with_missing = Evaluate(run, qrels, {true});
  ASSERT_EQ(with_missing.topics.size(), 2u);
  EXPECT_DOUBLE_EQ(with_missing.map, 0.25);
}

TEST(PickBaseline, Rules) {
  MetricReport bm25, rm3;
  bm25.tag = "bm25";
  rm3.tag = "bm25rm3";
  bm25.p20 = 0.36;
  rm3.p20 = 0.35;
  EXPECT_EQ(PickTermBaseline(bm25, rm3), "bm25");
  rm3.p20 = 0.36;
  EXPECT_EQ(PickTermBaseline(bm25, rm3), "bm25");
  rm3.p20 = 0.37;
  EXPECT_EQ(PickTermBaseline(bm25, rm3), "bm25rm3");
}

TEST(MetricNames, RoundTrip) {
  for (Metric m : {Metric::kAp, Metric::kP20, Metric::kNdcg20}) {
    EXPECT_EQ(ParseMetric(MetricName(m)), m);
  }
  EXPECT_EQ(ParseMetric("map"), Metric::kAp);
  EXPECT_THROW(ParseMetric("mrr"), Error);
}

// Counts sign assignments whose |mean| reaches the observed one.
double ExhaustiveOracle(const std::vector<double>& a, const std::vector<double>& b) {
  const size_t n = a.size();
  double observed = 0;
  for (size_t i = 0; i < n; ++i) observed += a[i] - b[i];
  observed = std::abs(observed / n);
  size_t count = 0;
  for (uint64_t mask = 0; mask < (uint64_t{1} << n); ++mask) {
    double s = 0;
    for (size_t i = 0; i < n; ++i) s += ((mask >> i) & 1) ? -(a[i] - b[i]) : (a[i] - b[i]);
    if (std::abs(s / n) >= observed - 1e-12) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(uint64_t{1} << n);
}

TEST(Randomization, IdenticalInputs) {
  const std::vector<double> a = {0.1, 0.5, 0.3};
  EXPECT_EQ(RandomizationTest(a, a).p_value, 1.0);
  std::vector<double> big(40, 0.2);
  EXPECT_EQ(RandomizationTest(big, big).p_value, 1.0);
}

TEST(Randomization, SingleTopic) {
  const std::vector<double> a = {0.9}, b = {0.1};
  EXPECT_EQ(RandomizationTest(a, b).p_value, 1.0);
}

TEST(Randomization, Errors) {
  const std::vector<double> a = {0.1, 0.2}, b = {0.1};
  EXPECT_THROW(RandomizationTest(a, b), Error);
  EXPECT_THROW(RandomizationTest(std::vector<double>{}, std::vector<double>{}), Error);
}

TEST(Randomization, ExhaustiveMatchesEnumeration) {
  SplitMix64 rng(50);
  for (int trial = 0; trial < 30; ++trial) {
    const size_t n = 1 + rng.Below(14);
    std::vector<double> a(n), b(n);
    for (size_t i = 0; i < n; ++i) {
      a[i] = rng.Uniform();
      b[i] = rng.Uniform() < 0.2 ? a[i] : rng.Uniform();
    }
    const auto result = RandomizationTest(a, b);
    EXPECT_TRUE(result.exhaustive);
    EXPECT_NEAR(result.p_value, ExhaustiveOracle(a, b), 1e-12);
    EXPECT_EQ(RandomizationTest(b, a).p_value, result.p_value);
  }
}

TEST(Randomization, MonteCarloIsThreadIndependent) {
  SplitMix64 rng(51);
  std::vector<double> a(30), b(30);
  for (size_t i = 0; i < 30; ++i) {
    a[i] = rng.Uniform();
    b[i] = rng.Uniform();
  }
  RandomizationOptions one;
  one.iterations = 20000;
  one.seed = 3;
  RandomizationOptions four = one;
  four.threads = 4;
  const auto r1 = RandomizationTest(a, b, one);
  const auto r4 = RandomizationTest(a, b, four);
  EXPECT_FALSE(r1.exhaustive);
  EXPECT_EQ(r1.p_value, r4.p_value);
  EXPECT_GT(r1.p_value, 0.0);
  EXPECT_LE(r1.p_value, 1.0);
  EXPECT_EQ(RandomizationTest(b, a, one).p_value, r1.p_value);
}

}  // namespace
}  // namespace hybridir
