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

#ifndef HYBRIDIR_FUSION_H_
#define HYBRIDIR_FUSION_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hybridir/metrics.h"
#include "hybridir/run.h"

namespace hybridir {

enum class Normalization { kNone, kMinMax };

std::string_view NormalizationName(Normalization n);
Normalization ParseNormalization(std::string_view name);

// 0.0, 0.1, ..., 1.0.
std::vector<double> DefaultAlphaGrid();

struct FusionConfig {
  double alpha = 0.5;
  int sparse_depth = 1000;
  int dense_depth = 100;
  Normalization normalization = Normalization::kNone;
  std::vector<double> alpha_grid = DefaultAlphaGrid();
  int folds = 5;
  Metric objective = Metric::kAp;
  uint64_t seed = 0;
  // Truncate fused lists to this many documents; 0 keeps the full union.
  int output_depth = 0;

  // Throws InvalidArgument when an invariant is violated.
  void Validate() const;
};

// Scales scores to [0, 1] by (s - min) / (max - min); a constant list maps
// to all 1.0.
RankedList MinMaxNormalize(std::span<const RunEntry> list);

// Fuses one topic: candidate set is the union of both lists (each truncated
// to its configured depth); a missing side scores 0;
// S = alpha * S_sparse + (1 - alpha) * S_dense, sorted by score descending
// then doc id ascending.
RankedList FuseLists(std::span<const RunEntry> sparse,
                     std::span<const RunEntry> dense, double alpha,
                     const FusionConfig& config);

// Applies FuseLists with config.alpha to every topic of either run.
Run Fuse(const Run& sparse, const Run& dense, const FusionConfig& config);

// Seeded shuffle of the sorted topic ids, then round-robin into `folds`
// folds. Returns fold -> topic ids (each sorted).
std::vector<std::vector<std::string>> AssignFolds(
    std::vector<std::string> topic_ids, int folds, uint64_t seed);

struct FoldResult {
  int fold = 0;
  double alpha = 0.0;
  double train_objective = 0.0;      // mean objective on training topics
  std::vector<std::string> test_topics;
  MetricReport test;                 // test-topic metrics at `alpha`
};

struct CrossValidationReport {
  std::vector<FoldResult> folds;
  // Each topic evaluated with its own test fold's alpha.
  MetricReport pooled;
  // Fused run with each topic's fold alpha.
  Run fused;
  std::map<std::string, int> fold_of;
};

// Called every time a (topic, alpha) objective value is used while choosing
// fold `fold`'s alpha. Lets tests prove test topics never take part.
using CvObserver =
    std::function<void(int fold, const std::string& topic_id, double alpha)>;

// Standard k-fold selection of alpha. Topics are those of `topic_ids` with at
// least one relevant judgment (all judged qrels topics if `topic_ids` is
// empty). For each fold the grid value with the highest mean objective over
// the other folds wins, ties to the smaller alpha.
//
// Throws InvalidArgument with fewer judged topics than folds.
CrossValidationReport CrossValidateAlpha(
    const std::vector<std::string>& topic_ids, const Qrels& qrels,
    const Run& sparse, const Run& dense, const FusionConfig& config,
    const CvObserver& observer = {});

// Line-delimited JSON: one "fold" record per fold, one "topic" record per
// evaluated topic, then one "pooled" record.
void WriteFoldReport(const CrossValidationReport& report,
                     const FusionConfig& config,
                     const std::filesystem::path& path);

}  // namespace hybridir

#endif  // HYBRIDIR_FUSION_H_
