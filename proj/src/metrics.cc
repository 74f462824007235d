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

#include "hybridir/metrics.h"

#include <algorithm>
#include <cmath>
#include <functional>

#include "hybridir/error.h"

namespace hybridir {

namespace {

int GradeOf(const Judgments& judgments, const std::string& doc) {
  auto it = judgments.find(doc);
  return it == judgments.end() ? 0 : it->second;
}

double Discount(size_t rank) {
  return std::log2(static_cast<double>(rank) + 1.0);
}

}  // namespace

std::optional<double> AveragePrecision(std::span<const RunEntry> ranking,
                                       const Judgments& judgments,
                                       int cutoff) {
  const int relevant = CountRelevant(judgments);
  if (relevant == 0) return std::nullopt;
  const size_t depth = std::min(ranking.size(), static_cast<size_t>(std::max(cutoff, 0)));
  double sum = 0.0;
  int found = 0;
  for (size_t i = 0; i < depth; ++i) {
    if (GradeOf(judgments, ranking[i].doc_id) > 0) {
      ++found;
      sum += static_cast<double>(found) / static_cast<double>(i + 1);
    }
  }
  return sum / relevant;
}

double PrecisionAt(std::span<const RunEntry> ranking,
                   const Judgments& judgments, int k) {
  if (k < 1) throw InvalidArgument("precision cutoff must be >= 1");
  const size_t depth = std::min(ranking.size(), static_cast<size_t>(k));
  int found = 0;
  for (size_t i = 0; i < depth; ++i) {
    if (GradeOf(judgments, ranking[i].doc_id) > 0) ++found;
  }
  return static_cast<double>(found) / k;
}

std::optional<double> NdcgAt(std::span<const RunEntry> ranking,
                             const Judgments& judgments, int k) {
  if (k < 1) throw InvalidArgument("nDCG cutoff must be >= 1");
  std::vector<int> ideal;
  for (const auto& [doc, grade] : judgments) {
    if (grade > 0) ideal.push_back(grade);
  }
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  double idcg = 0.0;
  for (size_t i = 0; i < ideal.size() && i < static_cast<size_t>(k); ++i) {
    idcg += ideal[i] / Discount(i + 1);
  }
  if (idcg <= 0.0) return std::nullopt;
  double dcg = 0.0;
  const size_t depth = std::min(ranking.size(), static_cast<size_t>(k));
  for (size_t i = 0; i < depth; ++i) {
    const int grade = GradeOf(judgments, ranking[i].doc_id);
    if (grade > 0) dcg += grade / Discount(i + 1);
  }
  return dcg / idcg;
}

std::string_view MetricName(Metric metric) {
  switch (metric) {
    case Metric::kAp:
      return "ap";
    case Metric::kP20:
      return "p20";
    case Metric::kNdcg20:
      return "ndcg20";
  }
  return "ap";
}

Metric ParseMetric(std::string_view name) {
  if (name == "ap" || name == "map" || name == "AP") return Metric::kAp;
  if (name == "p20" || name == "P@20" || name == "P_20") return Metric::kP20;
  if (name == "ndcg20" || name == "nDCG@20" || name == "ndcg_cut_20") {
    return Metric::kNdcg20;
  }
  throw InvalidArgument("unknown metric '" + std::string(name) + "'");
}

double TopicMetrics::value(Metric metric) const {
  switch (metric) {
    case Metric::kAp:
      return ap;
    case Metric::kP20:
      return p20;
    case Metric::kNdcg20:
      return ndcg20;
  }
  return ap;
}

std::optional<TopicMetrics> EvaluateTopic(const std::string& topic_id,
                                          std::span<const RunEntry> ranking,
                                          const Judgments& judgments) {
  const std::optional<double> ap = AveragePrecision(ranking, judgments, 1000);
  if (!ap) return std::nullopt;
  TopicMetrics m;
  m.topic_id = topic_id;
  m.ap = *ap;
  m.p20 = PrecisionAt(ranking, judgments, 20);
  m.ndcg20 = NdcgAt(ranking, judgments, 20).value_or(0.0);
  return m;
}

double MetricReport::mean(Metric metric) const {
  switch (metric) {
    case Metric::kAp:
      return map;
    case Metric::kP20:
      return p20;
    case Metric::kNdcg20:
      return ndcg20;
  }
  return map;
}

std::vector<double> MetricReport::values(Metric metric) const {
  std::vector<double> out;
  out.reserve(topics.size());
  for (const TopicMetrics& t : topics) out.push_back(t.value(metric));
  return out;
}

MetricReport Evaluate(const Run& run, const Qrels& qrels,
                      const EvalOptions& options) {
  MetricReport report;
  report.tag = run.tag;
  static const RankedList kEmpty;
  static const Judgments kNoJudgments;

  std::map<std::string, const RankedList*> topics;
  for (const auto& [topic, list] : run.topics) topics[topic] = &list;
  if (options.include_missing_topics) {
    for (const auto& [topic, judgments] : qrels) topics.try_emplace(topic, &kEmpty);
  }
  for (const auto& [topic, list] : topics) {
    auto judged = qrels.find(topic);
    const Judgments& judgments =
        judged == qrels.end() ? kNoJudgments : judged->second;
    std::optional<TopicMetrics> m = EvaluateTopic(topic, *list, judgments);
    if (!m) {
      ++report.unjudged_topics;
      continue;
    }
    report.topics.push_back(std::move(*m));
  }
  if (!report.topics.empty()) {
    for (const TopicMetrics& t : report.topics) {
      report.map += t.ap;
      report.p20 += t.p20;
      report.ndcg20 += t.ndcg20;
    }
    const auto n = static_cast<double>(report.topics.size());
    report.map /= n;
    report.p20 /= n;
    report.ndcg20 /= n;
  }
  return report;
}

std::string PickTermBaseline(const MetricReport& bm25,
                             const MetricReport& rm3) {
  return rm3.p20 > bm25.p20 ? rm3.tag : bm25.tag;
}

}  // namespace hybridir
