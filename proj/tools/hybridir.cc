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


// Command-line front end. Settings come from an optional --config file and
// are overridden by flags; see README.md for the subcommands.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hybridir/app/commands.h"
#include "hybridir/app/config.h"
#include "hybridir/app/report.h"
#include "hybridir/error.h"

namespace {

using hybridir::ErrorCode;
using namespace hybridir::app;

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return 1;
    case ErrorCode::kNotFound:
      return 2;
    case ErrorCode::kFormat:
      return 3;
    case ErrorCode::kInvariant:
      return 4;
    case ErrorCode::kIo:
      return 5;
  }
  return 4;
}

std::string OneLine(std::string message) {
  for (char& c : message) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return message;
}

int ReportError(std::string_view category, int code, const std::string& message) {
  std::cerr << "error: category=" << category << " exit=" << code
            << " message=" << OneLine(message) << '\n';
  return code;
}

// Flags that map onto config keys. Unset flags leave the file's values alone.
class Overrides {
 public:
  void Add(CLI::App* app, const std::string& flag, const std::string& key,
           const std::string& help) {
    app->add_option_function<std::string>(
        flag, [this, key](const std::string& v) { values_[key] = v; }, help);
  }
  void AddFlag(CLI::App* app, const std::string& flag, const std::string& key,
               const std::string& value, const std::string& help) {
    app->add_flag_callback(flag, [this, key, value] { values_[key] = value; },
                           help);
  }
  void Set(const std::string& key, const std::string& value) {
    values_[key] = value;
  }
  void ApplyTo(KeyValueConfig& kv) const {
    for (const auto& [k, v] : values_) kv.Set(k, v);
  }

 private:
  std::map<std::string, std::string> values_;
};

struct Cli {
  std::string config_file;
  std::vector<std::string> sets;
  Overrides overrides;
  std::string config_text;

  ExperimentConfig Resolve() {
    KeyValueConfig kv;
    if (!config_file.empty()) {
      kv = KeyValueConfig::Load(config_file);
      std::ifstream in(config_file, std::ios::binary);
      std::ostringstream text;
      text << in.rdbuf();
      config_text = text.str();
    }
    for (const std::string& s : sets) {
      const size_t eq = s.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw hybridir::InvalidArgument("--set expects key=value, got '" + s + "'");
      }
      kv.Set(s.substr(0, eq), s.substr(eq + 1));
    }
    overrides.ApplyTo(kv);
    if (config_text.empty()) config_text = kv.ToText();
    return ExperimentConfig::FromKeyValues(kv);
  }
};

void AddCommon(CLI::App* sub, Cli& cli) {
  sub->add_option("--config", cli.config_file, "key = value settings file")
      ->check(CLI::ExistingFile);
  sub->add_option("--set", cli.sets, "override one setting: section.key=value");
  cli.overrides.Add(sub, "--seed", "run.seed", "random seed");
  cli.overrides.Add(sub, "--threads", "run.threads", "worker threads");
}

void AddAnalyzer(CLI::App* sub, Cli& cli) {
  cli.overrides.Add(sub, "--stemmer", "analyzer.stemmer", "none | plural");
  cli.overrides.AddFlag(sub, "--no-lowercase", "analyzer.lowercase", "false",
                        "keep case");
  cli.overrides.AddFlag(sub, "--body-only", "analyzer.include_title", "false",
                        "index the body without the title");
  cli.overrides.Add(sub, "--stopwords", "analyzer.stopwords",
                    "comma-separated stopword list");
}

void AddFusion(CLI::App* sub, Cli& cli) {
  cli.overrides.Add(sub, "--normalization", "fusion.normalization", "none | minmax");
  cli.overrides.Add(sub, "--sparse-depth", "fusion.sparse_depth",
                    "sparse list depth used in fusion");
  cli.overrides.Add(sub, "--dense-depth", "fusion.dense_depth",
                    "dense list depth used in fusion");
  cli.overrides.Add(sub, "--depth", "fusion.depth", "fused list depth, 0 = all");
}

std::vector<hybridir::Metric> ParseMetrics(const std::vector<std::string>& names) {
  std::vector<hybridir::Metric> metrics;
  for (const std::string& n : names) metrics.push_back(hybridir::ParseMetric(n));
  return metrics;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid sparse/dense retrieval experiments", "hybridir"};
  app.require_subcommand(1);
  app.set_version_flag("--version", HYBRIDIR_VERSION);
  Cli cli;

  // index-sparse
  auto* index_sparse = app.add_subcommand("index-sparse", "build the BM25 index");
  AddCommon(index_sparse, cli);
  AddAnalyzer(index_sparse, cli);
  std::string corpus, output;
  bool skip_malformed = false;
  std::string language;
  index_sparse->add_option("--corpus", corpus, "corpus JSONL")->required();
  index_sparse->add_option("--output", output, "index directory")->required();
  index_sparse->add_option("--language", language, "analyzer language tag");
  index_sparse->add_flag("--skip-malformed", skip_malformed,
                         "skip malformed records with a warning");

  // embed
  auto* embed = app.add_subcommand("embed", "hashing-encoder vectors");
  AddCommon(embed, cli);
  AddAnalyzer(embed, cli);
  std::string embed_kind = "passages", vector_format = "binary";
  std::string input;
  embed->add_option("--input", input, "corpus (passages) or topics (queries)")
      ->required();
  embed->add_option("--kind", embed_kind, "passages | queries")
      ->check(CLI::IsMember({"passages", "queries"}));
  embed->add_option("--output", output, "vector file")->required();
  embed->add_option("--format", vector_format, "binary | text")
      ->check(CLI::IsMember({"binary", "text"}));
  cli.overrides.Add(embed, "--buckets", "dense.buckets", "encoder dimension");
  cli.overrides.Add(embed, "--window", "segment.window", "sentences per segment");
  cli.overrides.Add(embed, "--stride", "segment.stride", "sentence stride");

  // index-dense
  auto* index_dense = app.add_subcommand("index-dense", "build the vector index");
  AddCommon(index_dense, cli);
  std::string vectors, parents;
  index_dense->add_option("--vectors", vectors, "passage vector file")->required();
  index_dense->add_option("--parents", parents, "segment_id<TAB>doc_id file");
  index_dense->add_option("--output", output, "index directory")->required();

  // search
  auto* search = app.add_subcommand("search", "produce a TREC run");
  AddCommon(search, cli);
  std::string model, index_dir, topics, query_vectors, tag;
  search->add_option("model", model, "bm25 | bm25rm3 | dense")
      ->required()
      ->check(CLI::IsMember({"bm25", "bm25rm3", "dense"}));
  search->add_option("--index", index_dir, "index directory")->required();
  search->add_option("--topics", topics, "topics file (bm25, bm25rm3)");
  search->add_option("--queries", query_vectors, "query vector file (dense)");
  search->add_option("--output", output, "run file")->required();
  search->add_option("--tag", tag, "run tag");
  std::optional<std::string> search_k;
  search->add_option("--k", search_k, "results per topic");
  cli.overrides.Add(search, "--k1", "bm25.k1", "BM25 k1");
  cli.overrides.Add(search, "--b", "bm25.b", "BM25 b");
  cli.overrides.Add(search, "--fb-docs", "rm3.fb_docs", "RM3 feedback documents");
  cli.overrides.Add(search, "--fb-terms", "rm3.fb_terms", "RM3 feedback terms");
  cli.overrides.Add(search, "--orig-weight", "rm3.orig_weight",
                    "RM3 original query weight");
  cli.overrides.Add(search, "--m", "dense.m", "segments averaged per document");

  // fuse
  auto* fuse = app.add_subcommand("fuse", "interpolate a sparse and a dense run");
  AddCommon(fuse, cli);
  AddFusion(fuse, cli);
  std::string sparse_run, dense_run;
  fuse->add_option("--sparse", sparse_run, "term-matching run")->required();
  fuse->add_option("--dense", dense_run, "dense run")->required();
  fuse->add_option("--output", output, "fused run")->required();
  cli.overrides.Add(fuse, "--alpha", "fusion.alpha", "weight of the sparse score");

  // sweep-alpha
  auto* sweep = app.add_subcommand("sweep-alpha", "cross-validated alpha selection");
  AddCommon(sweep, cli);
  AddFusion(sweep, cli);
  std::string qrels;
  sweep->add_option("--sparse", sparse_run, "term-matching run")->required();
  sweep->add_option("--dense", dense_run, "dense run")->required();
  sweep->add_option("--qrels", qrels, "judgments")->required();
  sweep->add_option("--topics", topics, "restrict to these topics");
  sweep->add_option("--output", output, "output directory")->required();
  cli.overrides.Add(sweep, "--folds", "fusion.folds", "number of folds");
  cli.overrides.Add(sweep, "--grid", "fusion.grid", "comma-separated alphas");
  cli.overrides.Add(sweep, "--objective", "fusion.objective", "map | p20 | ndcg20");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "AP, P@20 and nDCG@20");
  AddCommon(evaluate, cli);
  std::vector<std::string> runs;
  bool include_missing = false;
  evaluate->add_option("--run", runs, "run file (repeatable)")->required();
  evaluate->add_option("--qrels", qrels, "judgments")->required();
  evaluate->add_option("--output", output, "line-delimited report");
  evaluate->add_flag("--include-missing-topics", include_missing,
                     "score judged topics absent from a run as zero");

  // sigtest
  auto* sigtest = app.add_subcommand("sigtest", "paired randomization test");
  AddCommon(sigtest, cli);
  std::string system_run, baseline_run;
  std::vector<std::string> metric_names = {"map", "P_20", "ndcg_cut_20"};
  sigtest->add_option("--system", system_run, "system run")->required();
  sigtest->add_option("--baseline", baseline_run, "baseline run")->required();
  sigtest->add_option("--qrels", qrels, "judgments")->required();
  sigtest->add_option("--metric", metric_names, "metric (repeatable)");
  sigtest->add_option("--output", output, "line-delimited report");
  cli.overrides.Add(sigtest, "--iterations", "sigtest.iterations",
                    "Monte Carlo permutations");

  // synthesize
  auto* synthesize = app.add_subcommand("synthesize", "title-to-article training pairs");
  AddCommon(synthesize, cli);
  AddAnalyzer(synthesize, cli);
  bool index_segments = false;
  synthesize->add_option("--corpus", corpus, "article corpus JSONL")->required();
  synthesize->add_option("--output", output, "training JSONL")->required();
  synthesize->add_flag("--segments", index_segments,
                       "index sentence-window segments instead of articles");
  cli.overrides.Add(synthesize, "--k", "synthesis.k", "retrieval depth");
  cli.overrides.Add(synthesize, "--negatives", "synthesis.negatives",
                    "negatives per example");
  cli.overrides.Add(synthesize, "--sampling", "synthesis.sampling", "top | random");
  cli.overrides.Add(synthesize, "--min-title-tokens", "synthesis.min_title_tokens",
                    "minimum analyzed title length");
  cli.overrides.Add(synthesize, "--min-body-tokens", "synthesis.min_body_tokens",
                    "minimum analyzed body length");
  cli.overrides.Add(synthesize, "--window", "segment.window", "sentences per segment");
  cli.overrides.Add(synthesize, "--stride", "segment.stride", "sentence stride");

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "every stage from corpus to report");
  AddCommon(pipeline, cli);
  AddAnalyzer(pipeline, cli);
  AddFusion(pipeline, cli);
  cli.overrides.Add(pipeline, "--corpus", "paths.corpus", "corpus JSONL");
  cli.overrides.Add(pipeline, "--topics", "paths.topics", "topics file");
  cli.overrides.Add(pipeline, "--qrels", "paths.qrels", "judgments");
  cli.overrides.Add(pipeline, "--output", "paths.output", "output directory");
  cli.overrides.Add(pipeline, "--k", "bm25.k", "term-matching run depth");
  cli.overrides.Add(pipeline, "--folds", "fusion.folds", "number of folds");
  cli.overrides.Add(pipeline, "--iterations", "sigtest.iterations",
                    "Monte Carlo permutations");

  // import-trec
  auto* import_trec = app.add_subcommand("import-trec", "convert <DOC> markup to JSONL");
  import_trec->add_option("--input", input, "TREC document file")->required();
  import_trec->add_option("--output", output, "corpus JSONL")->required();
  std::string import_language = "und";
  import_trec->add_option("--language", import_language, "language tag");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return ReportError("usage", 1, e.what());
  }

  try {
    if (*import_trec) {
      std::ifstream in(input, std::ios::binary);
      if (!in) throw hybridir::NotFound("cannot open " + input);
      const auto docs = hybridir::ImportTrecDocuments(in, import_language);
      hybridir::WriteCorpus(docs, output);
      std::cout << "documents: " << docs.size() << '\n';
      return 0;
    }

    if (*search && model != "dense" && search_k) cli.overrides.Set("bm25.k", *search_k);
    if (*search && model == "dense" && search_k) cli.overrides.Set("dense.k", *search_k);
    ExperimentConfig cfg = cli.Resolve();
    cfg.Validate();

    if (*index_sparse) {
      hybridir::IndexOptions index = cfg.index;
      if (!language.empty()) index.language = language;
      index.threads = cfg.threads;
      const auto result = IndexSparse(
          {corpus, output, index,
           skip_malformed ? hybridir::MalformedPolicy::kSkipAndWarn
                          : hybridir::MalformedPolicy::kAbort});
      for (const std::string& w : result.warnings) std::cerr << "warning: " << w << '\n';
      std::cout << "documents: " << result.documents << "\nterms: " << result.terms
                << '\n';
    } else if (*embed) {
      EmbedOptions o;
      o.input = input;
      o.kind = embed_kind == "queries" ? EmbedKind::kQueries : EmbedKind::kPassages;
      o.output = output;
      o.format = vector_format == "text" ? hybridir::VectorFileFormat::kText
                                         : hybridir::VectorFileFormat::kBinary;
      o.buckets = cfg.encoder_buckets;
      o.analyzer = cfg.index.analyzer;
      o.segments = cfg.segments;
      std::cout << "vectors: " << Embed(o) << '\n';
    } else if (*index_dense) {
      std::cout << "segments: " << IndexDense({vectors, parents, output}) << '\n';
    } else if (*search) {
      if (model == "dense") {
        if (query_vectors.empty()) {
          throw hybridir::InvalidArgument("search dense requires --queries");
        }
        SearchDenseOptions o;
        o.index_dir = index_dir;
        o.query_vectors = query_vectors;
        o.output = output;
        o.k = cfg.dense_k;
        o.m = cfg.aggregate_m;
        o.threads = cfg.threads;
        if (!tag.empty()) o.tag = tag;
        SearchDenseRun(o);
      } else {
        if (topics.empty()) {
          throw hybridir::InvalidArgument("search " + model + " requires --topics");
        }
        SearchSparseOptions o;
        o.index_dir = index_dir;
        o.topics = topics;
        o.output = output;
        o.model = model == "bm25rm3" ? SparseModel::kBm25Rm3 : SparseModel::kBm25;
        o.k = cfg.sparse_k;
        o.bm25 = cfg.bm25;
        o.rm3 = cfg.rm3;
        o.tag = tag;
        o.threads = cfg.threads;
        SearchSparse(o);
      }
    } else if (*fuse) {
      FuseRuns({sparse_run, dense_run, output, cfg.fusion});
    } else if (*sweep) {
      const auto report =
          SweepAlpha({sparse_run, dense_run, qrels, topics, output, cfg.fusion});
      for (const auto& f : report.folds) {
        std::cout << "fold " << f.fold << ": alpha " << f.alpha << " (train "
                  << MetricName(cfg.fusion.objective) << " " << f.train_objective
                  << ", " << f.test_topics.size() << " test topics)\n";
      }
      std::cout << FormatMetricTable({report.pooled});
    } else if (*evaluate) {
      EvaluateOptions o;
      for (const std::string& r : runs) o.runs.emplace_back(r);
      o.qrels = qrels;
      o.output = output;
      o.include_missing_topics = include_missing;
      std::cout << FormatMetricTable(EvaluateRuns(o));
    } else if (*sigtest) {
      SigtestOptions o;
      o.system_run = system_run;
      o.baseline_run = baseline_run;
      o.qrels = qrels;
      o.metrics = ParseMetrics(metric_names);
      o.randomization.iterations = cfg.sig_iterations;
      o.randomization.seed = cfg.seed;
      o.randomization.threads = cfg.threads;
      o.output = output;
      std::cout << FormatSignificanceTable(Sigtest(o));
    } else if (*synthesize) {
      SynthesizeOptions o;
      o.corpus = corpus;
      o.output = output;
      o.config = cfg.synthesis;
      o.index = cfg.index;
      o.index.include_title = false;
      o.index.threads = cfg.threads;
      o.index_segments = index_segments;
      o.segments = cfg.segments;
      const auto s = SynthesizeTrainingData(o);
      std::cout << "articles: " << s.articles << "\nfiltered_title: "
                << s.filtered_title << "\nfiltered_body: " << s.filtered_body
                << "\ndropped_not_retrieved: " << s.dropped_not_retrieved
                << "\nemitted: " << s.emitted << '\n';
    } else if (*pipeline) {
      const auto result = RunPipeline(cfg, cli.config_text);
      std::ifstream report(cfg.output_dir / "report.txt");
      std::cout << report.rdbuf();
    }
  } catch (const hybridir::Error& e) {
    const int code = ExitCodeFor(e.code());
    return ReportError(hybridir::ErrorCodeName(e.code()), code, e.what());
  } catch (const std::exception& e) {
    return ReportError("invariant_breach", 4, e.what());
  }
  return 0;
}
