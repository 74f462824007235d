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

#include "hybridir/fusion.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "hybridir/error.h"
#include "hybridir/random.h"

namespace hybridir {

namespace {

std::span<const RunEntry> Head(std::span<const RunEntry> list, int depth) {
  if (depth > 0 && list.size() > static_cast<size_t>(depth)) {
    return list.first(static_cast<size_t>(depth));
  }
  return list;
}

MetricReport Summarize(std::vector<TopicMetrics> topics, const std::string& tag) {
  MetricReport report;
  report.tag = tag;
  std::sort(topics.begin(), topics.end(),
            [](const TopicMetrics& a, const TopicMetrics& b) {
              return a.topic_id < b.topic_id;
            });
  report.topics = std::move(topics);
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

}  // namespace

std::string_view NormalizationName(Normalization n) {
  return n == Normalization::kMinMax ? "minmax" : "none";
}

Normalization ParseNormalization(std::string_view name) {
  if (name == "none") return Normalization::kNone;
  if (name == "minmax") return Normalization::kMinMax;
  throw InvalidArgument("unknown normalization '" + std::string(name) + "'");
}

std::vector<double> DefaultAlphaGrid() {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
  return grid;
}

void FusionConfig::Validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw InvalidArgument("alpha must lie in [0, 1]");
  }
  if (sparse_depth < 1 || dense_depth < 1) {
    throw InvalidArgument("retrieval depths must be >= 1");
  }
  if (alpha_grid.empty()) throw InvalidArgument("alpha grid is empty");
  for (size_t i = 0; i < alpha_grid.size(); ++i) {
    if (!(alpha_grid[i] >= 0.0 && alpha_grid[i] <= 1.0)) {
      throw InvalidArgument("alpha grid values must lie in [0, 1]");
    }
    if (i > 0 && alpha_grid[i] <= alpha_grid[i - 1]) {
      throw InvalidArgument("alpha grid must be strictly increasing");
    }
  }
  if (folds < 2) throw InvalidArgument("cross-validation needs >= 2 folds");
  if (output_depth < 0) throw InvalidArgument("output depth must be >= 0");
}

RankedList MinMaxNormalize(std::span<const RunEntry> list) {
  RankedList out(list.begin(), list.end());
  if (out.empty()) return out;
  double lo = out.front().score;
  double hi = out.front().score;
  for (const RunEntry& e : out) {
    lo = std::min(lo, e.score);
    hi = std::max(hi, e.score);
  }
  for (RunEntry& e : out) {
    e.score = hi > lo ? (e.score - lo) / (hi - lo) : 1.0;
  }
  return out;
}

RankedList FuseLists(std::span<const RunEntry> sparse,
                     std::span<const RunEntry> dense, double alpha,
                     const FusionConfig& config) {
  RankedList s(Head(sparse, config.sparse_depth).begin(),
               Head(sparse, config.sparse_depth).end());
  RankedList d(Head(dense, config.dense_depth).begin(),
               Head(dense, config.dense_depth).end());
  if (config.normalization == Normalization::kMinMax) {
    s = MinMaxNormalize(s);
    d = MinMaxNormalize(d);
  }
  std::map<std::string, std::pair<double, double>> scores;
  for (const RunEntry& e : s) scores[e.doc_id].first = e.score;
  for (const RunEntry& e : d) scores[e.doc_id].second = e.score;

  RankedList fused;
  fused.reserve(scores.size());
  for (const auto& [doc, pair] : scores) {
    fused.push_back({doc, alpha * pair.first + (1.0 - alpha) * pair.second});
  }
  // `scores` iterates in doc-id order, so a stable sort on score alone keeps
  // ascending doc ids among ties.
  std::stable_sort(fused.begin(), fused.end(),
                   [](const RunEntry& a, const RunEntry& b) {
                     return a.score > b.score;
                   });
  if (config.output_depth > 0 &&
      fused.size() > static_cast<size_t>(config.output_depth)) {
    fused.resize(static_cast<size_t>(config.output_depth));
  }
  return fused;
}

Run Fuse(const Run& sparse, const Run& dense, const FusionConfig& config) {
  config.Validate();
  Run fused;
  fused.tag = "fused";
  static const RankedList kEmpty;
  std::map<std::string, std::pair<const RankedList*, const RankedList*>> topics;
  for (const auto& [topic, list] : sparse.topics) {
    topics[topic] = {&list, &kEmpty};
  }
  for (const auto& [topic, list] : dense.topics) {
    topics.try_emplace(topic, &kEmpty, &kEmpty).first->second.second = &list;
  }
  for (const auto& [topic, lists] : topics) {
    fused.topics[topic] =
        FuseLists(*lists.first, *lists.second, config.alpha, config);
  }
  return fused;
}

std::vector<std::vector<std::string>> AssignFolds(
    std::vector<std::string> topic_ids, int folds, uint64_t seed) {
  if (folds < 1) throw InvalidArgument("folds must be >= 1");
  std::sort(topic_ids.begin(), topic_ids.end());
  SplitMix64 rng(seed);
  SeededShuffle(topic_ids, rng);
  std::vector<std::vector<std::string>> out(static_cast<size_t>(folds));
  for (size_t i = 0; i < topic_ids.size(); ++i) {
    out[i % out.size()].push_back(topic_ids[i]);
  }
  for (auto& fold : out) std::sort(fold.begin(), fold.end());
  return out;
}

CrossValidationReport CrossValidateAlpha(
    const std::vector<std::string>& topic_ids, const Qrels& qrels,
    const Run& sparse, const Run& dense, const FusionConfig& config,
    const CvObserver& observer) {
  config.Validate();
  std::vector<std::string> judged;
  if (topic_ids.empty()) {
    for (const auto& [topic, judgments] : qrels) {
      if (CountRelevant(judgments) > 0) judged.push_back(topic);
    }
  } else {
    for (const std::string& topic : topic_ids) {
      auto it = qrels.find(topic);
      if (it != qrels.end() && CountRelevant(it->second) > 0) {
        judged.push_back(topic);
      }
    }
    std::sort(judged.begin(), judged.end());
    judged.erase(std::unique(judged.begin(), judged.end()), judged.end());
  }
  if (judged.size() < static_cast<size_t>(config.folds)) {
    throw InvalidArgument("cross-validation needs at least " +
                          std::to_string(config.folds) +
                          " judged topics, have " +
                          std::to_string(judged.size()));
  }

  static const RankedList kEmpty;
  auto list_of = [](const Run& run, const std::string& topic) -> const RankedList& {
    auto it = run.topics.find(topic);
    return it == run.topics.end() ? kEmpty : it->second;
  };

  // metrics[topic][g] = topic metrics of the run fused at grid point g.
  const size_t grid = config.alpha_grid.size();
  std::unordered_map<std::string, std::vector<TopicMetrics>> metrics;
  for (const std::string& topic : judged) {
    const RankedList& s = list_of(sparse, topic);
    const RankedList& d = list_of(dense, topic);
    const Judgments& judgments = qrels.at(topic);
    std::vector<TopicMetrics>& row = metrics[topic];
    row.reserve(grid);
    for (double alpha : config.alpha_grid) {
      row.push_back(*EvaluateTopic(topic, FuseLists(s, d, alpha, config),
                                   judgments));
    }
  }

  CrossValidationReport report;
  report.fused.tag = "fused-cv";
  const std::vector<std::vector<std::string>> folds =
      AssignFolds(judged, config.folds, config.seed);
  std::vector<TopicMetrics> pooled;
  for (size_t f = 0; f < folds.size(); ++f) {
    FoldResult result;
    result.fold = static_cast<int>(f);
    result.test_topics = folds[f];
    size_t best = 0;
    double best_value = -1.0;
    for (size_t g = 0; g < grid; ++g) {
      double sum = 0.0;
      size_t n = 0;
      for (size_t other = 0; other < folds.size(); ++other) {
        if (other == f) continue;
        for (const std::string& topic : folds[other]) {
          if (observer) observer(result.fold, topic, config.alpha_grid[g]);
          sum += metrics.at(topic)[g].value(config.objective);
          ++n;
        }
      }
      const double mean = n > 0 ? sum / static_cast<double>(n) : 0.0;
      if (mean > best_value) {
        best_value = mean;
        best = g;
      }
    }
    result.alpha = config.alpha_grid[best];
    result.train_objective = best_value;
    std::vector<TopicMetrics> test;
    for (const std::string& topic : folds[f]) {
      test.push_back(metrics.at(topic)[best]);
      report.fold_of[topic] = result.fold;
      report.fused.topics[topic] = FuseLists(list_of(sparse, topic),
                                             list_of(dense, topic),
                                             result.alpha, config);
    }
    pooled.insert(pooled.end(), test.begin(), test.end());
    result.test = Summarize(std::move(test), "fold-" + std::to_string(f));
    report.folds.push_back(std::move(result));
  }
  report.pooled = Summarize(std::move(pooled), report.fused.tag);
  return report;
}

void WriteFoldReport(const CrossValidationReport& report,
                     const FusionConfig& config,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  using Record = nlohmann::ordered_json;
  for (const FoldResult& fold : report.folds) {
    Record r;
    r["type"] = "fold";
    r["fold"] = fold.fold;
    r["alpha"] = fold.alpha;
    r["objective"] = MetricName(config.objective);
    r["train_objective"] = fold.train_objective;
    r["test_topics"] = fold.test_topics;
    r["test_map"] = fold.test.map;
    r["test_p20"] = fold.test.p20;
    r["test_ndcg20"] = fold.test.ndcg20;
    out << r.dump() << '\n';
  }
  for (const TopicMetrics& t : report.pooled.topics) {
    const int fold = report.fold_of.at(t.topic_id);
    Record r;
    r["type"] = "topic";
    r["topic"] = t.topic_id;
    r["fold"] = fold;
    r["alpha"] = report.folds[static_cast<size_t>(fold)].alpha;
    r["ap"] = t.ap;
    r["p20"] = t.p20;
    r["ndcg20"] = t.ndcg20;
    out << r.dump() << '\n';
  }
  Record r;
  r["type"] = "pooled";
  r["topics"] = report.pooled.topics.size();
  r["map"] = report.pooled.map;
  r["p20"] = report.pooled.p20;
  r["ndcg20"] = report.pooled.ndcg20;
  r["normalization"] = NormalizationName(config.normalization);
  out << r.dump() << '\n';
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace hybridir
