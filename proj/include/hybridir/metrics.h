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

#ifndef HYBRIDIR_METRICS_H_
#define HYBRIDIR_METRICS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hybridir/run.h"

// trec_eval-compatible effectiveness measures. Rankings are taken in list
// order; a document is relevant when its grade is > 0.

namespace hybridir {

// (1/R) * sum of precision at each relevant rank <= cutoff, R = all judged
// relevant documents. nullopt when R = 0.
std::optional<double> AveragePrecision(std::span<const RunEntry> ranking,
                                       const Judgments& judgments,
                                       int cutoff = 1000);

// Relevant documents in the top k divided by k, even if fewer than k
// documents were retrieved.
double PrecisionAt(std::span<const RunEntry> ranking,
                   const Judgments& judgments, int k = 20);

// trec_eval ndcg_cut: gain = grade, discount log2(rank + 1), ideal ranking
// from the judged grades. nullopt when the ideal DCG is 0.
std::optional<double> NdcgAt(std::span<const RunEntry> ranking,
                             const Judgments& judgments, int k = 20);

enum class Metric { kAp, kP20, kNdcg20 };

std::string_view MetricName(Metric metric);
Metric ParseMetric(std::string_view name);

struct TopicMetrics {
  std::string topic_id;
  double ap = 0.0;
  double p20 = 0.0;
  double ndcg20 = 0.0;

  double value(Metric metric) const;
};

// Metrics for one topic's ranking; nullopt when the topic has no relevant
// judgments.
std::optional<TopicMetrics> EvaluateTopic(const std::string& topic_id,
                                          std::span<const RunEntry> ranking,
                                          const Judgments& judgments);

struct MetricReport {
  std::string tag;
  std::vector<TopicMetrics> topics;  // sorted by topic id
  double map = 0.0;
  double p20 = 0.0;
  double ndcg20 = 0.0;
  // Topics in the run that were skipped for lack of relevant judgments.
  size_t unjudged_topics = 0;

  double mean(Metric metric) const;
  // Per-topic values in topic order.
  std::vector<double> values(Metric metric) const;
};

struct EvalOptions {
  // Like trec_eval -c: judged topics the run lacks count as zeros.
  bool include_missing_topics = false;
};

// Means are over topics that are in the run (or in qrels, with
// include_missing_topics) and have at least one relevant judgment.
MetricReport Evaluate(const Run& run, const Qrels& qrels,
                      const EvalOptions& options = {});

// Tag of the report with the higher mean P@20; ties go to `bm25`.
std::string PickTermBaseline(const MetricReport& bm25,
                             const MetricReport& rm3);

}  // namespace hybridir

#endif  // HYBRIDIR_METRICS_H_
