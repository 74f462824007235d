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

#ifndef HYBRIDIR_APP_COMMANDS_H_
#define HYBRIDIR_APP_COMMANDS_H_

#include <filesystem>
#include <string>
#include <vector>

#include "hybridir/app/config.h"
#include "hybridir/app/report.h"
#include "hybridir/corpus.h"
#include "hybridir/embedding.h"
#include "hybridir/fusion.h"
#include "hybridir/metrics.h"
#include "hybridir/rm3.h"
#include "hybridir/significance.h"
#include "hybridir/sparse_index.h"
#include "hybridir/weaksup.h"

// One function per command-line subcommand. Each validates its inputs before
// doing any work, writes its outputs, and writes a manifest (settings, input
// and output digests, version, seed) next to them: <dir>/manifest.json for
// directory outputs, <file>.manifest.json for file outputs.

namespace hybridir::app {

using std::filesystem::path;

struct IndexSparseOptions {
  path corpus;
  path output_dir;
  IndexOptions index;
  MalformedPolicy on_malformed = MalformedPolicy::kAbort;
};

struct IndexSparseResult {
  size_t documents = 0;
  size_t terms = 0;
  std::vector<std::string> warnings;
};

IndexSparseResult IndexSparse(const IndexSparseOptions& options);

enum class EmbedKind { kPassages, kQueries };

struct EmbedOptions {
  path input;  // corpus for passages, topics for queries
  EmbedKind kind = EmbedKind::kPassages;
  path output;
  VectorFileFormat format = VectorFileFormat::kBinary;
  int buckets = 256;
  AnalyzerConfig analyzer;
  SegmentOptions segments;
};

// Hashing-encoder vectors for every segment of a corpus or every topic.
size_t Embed(const EmbedOptions& options);

struct IndexDenseOptions {
  path vectors;
  // Optional "segment_id<TAB>doc_id" lines; otherwise parents come from the
  // "<doc_id>#<n>" id convention.
  path parents;
  path output_dir;
};

size_t IndexDense(const IndexDenseOptions& options);

enum class SparseModel { kBm25, kBm25Rm3 };

struct SearchSparseOptions {
  path index_dir;
  path topics;
  path output;
  SparseModel model = SparseModel::kBm25;
  int k = 1000;
  Bm25Params bm25;
  Rm3Params rm3;
  std::string tag;  // defaults to "bm25" / "bm25rm3"
  int threads = 1;
};

Run SearchSparse(const SearchSparseOptions& options);

struct SearchDenseOptions {
  path index_dir;
  path query_vectors;
  path output;
  int k = 100;  // segments retrieved per query
  int m = 3;    // best segments averaged per document
  std::string tag = "dense";
  int threads = 1;
};

Run SearchDenseRun(const SearchDenseOptions& options);

struct FuseOptions {
  path sparse_run;
  path dense_run;
  path output;
  FusionConfig fusion;
};

Run FuseRuns(const FuseOptions& options);

struct SweepAlphaOptions {
  path sparse_run;
  path dense_run;
  path qrels;
  path topics;  // optional restriction of the topic set
  path output_dir;
  FusionConfig fusion;
};

// Writes <dir>/folds.jsonl, <dir>/fused.run and <dir>/manifest.json.
CrossValidationReport SweepAlpha(const SweepAlphaOptions& options);

struct EvaluateOptions {
  std::vector<path> runs;
  path qrels;
  path output;  // optional line-delimited report
  bool include_missing_topics = false;
};

std::vector<MetricReport> EvaluateRuns(const EvaluateOptions& options);

struct SigtestOptions {
  path system_run;
  path baseline_run;
  path qrels;
  std::vector<Metric> metrics = {Metric::kAp, Metric::kP20, Metric::kNdcg20};
  RandomizationOptions randomization;
  path output;  // optional line-delimited report
};

std::vector<SignificanceRow> Sigtest(const SigtestOptions& options);

struct SynthesizeOptions {
  path corpus;
  path output;
  SynthesisConfig config;
  IndexOptions index;  // include_title should stay off
  // Index sentence-window segments instead of whole articles. A segment hit
  // counts as a hit on its article (first occurrence).
  bool index_segments = false;
  SegmentOptions segments;
};

SynthesisStats SynthesizeTrainingData(const SynthesizeOptions& options);

struct PipelineResult {
  std::string baseline_tag;
  std::string fused_with;
  CrossValidationReport cv;
  std::vector<MetricReport> reports;  // bm25, bm25rm3, dense, fused-cv
  std::vector<SignificanceRow> significance;
};

// index-sparse, search bm25/bm25rm3, evaluate + baseline pick, embed,
// index-dense, search dense, sweep-alpha, evaluate, sigtest, run in that
// order, each stage reading the files the previous ones wrote.
// `config_text` is echoed verbatim into the output directory.
PipelineResult RunPipeline(const ExperimentConfig& config,
                           const std::string& config_text);

}  // namespace hybridir::app

#endif  // HYBRIDIR_APP_COMMANDS_H_
