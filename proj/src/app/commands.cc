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

#include "hybridir/app/commands.h"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hybridir/dense_index.h"
#include "hybridir/digest.h"
#include "hybridir/error.h"
#include "hybridir/parallel.h"

namespace hybridir::app {

namespace {

using Json = nlohmann::ordered_json;

#ifndef HYBRIDIR_VERSION
#define HYBRIDIR_VERSION "0.0.0"
#endif

void RequireFile(const path& p, const char* what) {
  if (p.empty()) throw InvalidArgument(std::string("no ") + what + " given");
  if (!std::filesystem::exists(p)) {
    throw NotFound(std::string(what) + " not found: " + p.string());
  }
}

void RequireOutput(const path& p, const char* what) {
  if (p.empty()) throw InvalidArgument(std::string("no ") + what + " given");
}

void EnsureParentDir(const path& file) {
  if (file.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(file.parent_path(), ec);
  }
}

std::string FormatDouble(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

// Manifest written next to every command's outputs. Contains no timestamps or
// host details so identical invocations produce identical bytes.
class Manifest {
 public:
  explicit Manifest(std::string command) {
    doc_["command"] = std::move(command);
    doc_["version"] = HYBRIDIR_VERSION;
    doc_["seed"] = 0;
    doc_["settings"] = Json::object();
    doc_["inputs"] = Json::array();
    doc_["outputs"] = Json::array();
    doc_["results"] = Json::object();
  }

  Manifest& Seed(uint64_t seed) {
    doc_["seed"] = seed;
    return *this;
  }
  Manifest& Setting(const std::string& key, const Json& value) {
    doc_["settings"][key] = value;
    return *this;
  }
  Manifest& Settings(const KeyValueConfig& kv) {
    for (const auto& [k, v] : kv.entries()) doc_["settings"][k] = v;
    return *this;
  }
  Manifest& Input(const path& p) {
    doc_["inputs"].push_back(FileRecord(p));
    return *this;
  }
  Manifest& Output(const path& p) {
    doc_["outputs"].push_back(FileRecord(p));
    return *this;
  }
  Manifest& Result(const std::string& key, const Json& value) {
    doc_["results"][key] = value;
    return *this;
  }

  void Write(const path& where) const {
    EnsureParentDir(where);
    std::ofstream out(where, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + where.string());
    out << doc_.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + where.string());
  }

 private:
  static Json FileRecord(const path& p) {
    Json r;
    r["path"] = p.string();
    if (std::filesystem::is_directory(p)) {
      Json files = Json::object();
      std::vector<path> entries;
      for (const auto& e : std::filesystem::directory_iterator(p)) {
        if (e.is_regular_file() && e.path().filename() != "manifest.json") {
          entries.push_back(e.path());
        }
      }
      std::sort(entries.begin(), entries.end());
      for (const path& e : entries) {
        files[e.filename().string()] = Sha256File(e);
      }
      r["files"] = files;
    } else {
      r["sha256"] = Sha256File(p);
    }
    return r;
  }

  Json doc_;
};

path FileManifest(const path& file) {
  path m = file;
  m += ".manifest.json";
  return m;
}

Json AnalyzerJson(const IndexOptions& index) {
  Json j;
  j["lowercase"] = index.analyzer.lowercase;
  j["stemmer"] = StemmerName(index.analyzer.stemmer);
  j["stopwords"] = index.analyzer.stopwords;
  j["include_title"] = index.include_title;
  return j;
}

Json FusionJson(const FusionConfig& f) {
  Json j;
  j["alpha"] = f.alpha;
  j["sparse_depth"] = f.sparse_depth;
  j["dense_depth"] = f.dense_depth;
  j["normalization"] = NormalizationName(f.normalization);
  j["alpha_grid"] = f.alpha_grid;
  j["folds"] = f.folds;
  j["objective"] = MetricName(f.objective);
  j["output_depth"] = f.output_depth;
  return j;
}

ParentMap LoadParentMap(const path& p) {
  std::ifstream in(p);
  if (!in) throw NotFound("cannot open " + p.string());
  ParentMap parents;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size()) {
      throw FormatError(p.string() + ":" + std::to_string(line_number) +
                        ": expected '<segment_id>\\t<doc_id>'");
    }
    parents[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return parents;
}

}  // namespace

IndexSparseResult IndexSparse(const IndexSparseOptions& options) {
  RequireFile(options.corpus, "corpus");
  RequireOutput(options.output_dir, "output directory");
  LoadReport load;
  const std::vector<Document> docs =
      LoadCorpus(options.corpus, {options.on_malformed}, &load);
  const InvertedIndex index = InvertedIndex::Build(docs, options.index);
  index.Save(options.output_dir);

  Manifest("index-sparse")
      .Setting("analyzer", AnalyzerJson(index.options()))
      .Setting("language", index.options().language)
      .Input(options.corpus)
      .Output(options.output_dir)
      .Result("documents", index.num_docs())
      .Result("terms", index.num_terms())
      .Result("skipped_records", load.warnings.size())
      .Write(options.output_dir / "manifest.json");
  return {index.num_docs(), index.num_terms(), load.warnings};
}

size_t Embed(const EmbedOptions& options) {
  RequireFile(options.input, options.kind == EmbedKind::kPassages ? "corpus" : "topics");
  RequireOutput(options.output, "output file");
  const HashingEncoder encoder(static_cast<size_t>(options.buckets),
                               options.analyzer);
  std::vector<EmbeddingVector> vectors;
  if (options.kind == EmbedKind::kPassages) {
    for (const Document& doc : LoadCorpus(options.input)) {
      for (const Segment& seg : SegmentDocument(doc, options.segments)) {
        vectors.push_back(encoder.EmbedPassage(seg.segment_id, seg.text));
      }
    }
  } else {
    for (const Topic& topic : LoadTopics(options.input)) {
      vectors.push_back(encoder.EmbedQuery(topic.topic_id, topic.text));
    }
  }
  EnsureParentDir(options.output);
  WriteVectors(vectors, options.output, options.format);
  Manifest("embed")
      .Setting("kind", options.kind == EmbedKind::kPassages ? "passages" : "queries")
      .Setting("encoder", "hashing")
      .Setting("buckets", options.buckets)
      .Setting("window", options.segments.window)
      .Setting("stride", options.segments.stride)
      .Setting("format", options.format == VectorFileFormat::kBinary ? "binary" : "text")
      .Input(options.input)
      .Output(options.output)
      .Result("vectors", vectors.size())
      .Write(FileManifest(options.output));
  return vectors.size();
}

size_t IndexDense(const IndexDenseOptions& options) {
  RequireFile(options.vectors, "vector file");
  RequireOutput(options.output_dir, "output directory");
  std::vector<EmbeddingVector> vectors = ReadVectors(options.vectors);
  ParentMap parents;
  if (!options.parents.empty()) {
    RequireFile(options.parents, "parent map");
    parents = LoadParentMap(options.parents);
  } else {
    parents = ParentsFromSegmentIds(vectors);
  }
  const DenseIndex index = DenseIndex::Build(std::move(vectors), parents);
  index.Save(options.output_dir);
  Manifest m("index-dense");
  m.Input(options.vectors);
  if (!options.parents.empty()) m.Input(options.parents);
  m.Output(options.output_dir)
      .Result("segments", index.size())
      .Result("dimension", index.dimension())
      .Write(options.output_dir / "manifest.json");
  return index.size();
}

Run SearchSparse(const SearchSparseOptions& options) {
  RequireFile(options.index_dir, "index directory");
  RequireFile(options.topics, "topics");
  RequireOutput(options.output, "output run");
  if (options.k < 1) throw InvalidArgument("k must be >= 1");
  const InvertedIndex index = InvertedIndex::Load(options.index_dir);
  const std::vector<Topic> topics = LoadTopics(options.topics);
  const bool rm3 = options.model == SparseModel::kBm25Rm3;

  std::vector<std::vector<ScoredHit>> results(topics.size());
  ParallelFor(topics.size(), options.threads, [&](size_t begin, size_t end) {
    for (size_t t = begin; t < end; ++t) {
      results[t] = rm3 ? SearchBm25Rm3(index, topics[t], options.k,
                                       options.rm3, options.bm25)
                       : SearchBm25(index, topics[t], options.k, options.bm25);
    }
  });
  Run run;
  run.tag = !options.tag.empty() ? options.tag : (rm3 ? "bm25rm3" : "bm25");
  for (size_t t = 0; t < topics.size(); ++t) {
    run.topics[topics[t].topic_id] = ToRankedList(results[t]);
  }
  EnsureParentDir(options.output);
  SaveRun(run, options.output);

  Manifest m("search");
  m.Setting("model", rm3 ? "bm25rm3" : "bm25")
      .Setting("k", options.k)
      .Setting("k1", options.bm25.k1)
      .Setting("b", options.bm25.b);
  if (rm3) {
    m.Setting("fb_docs", options.rm3.fb_docs)
        .Setting("fb_terms", options.rm3.fb_terms)
        .Setting("orig_weight", options.rm3.orig_weight);
  }
  m.Input(options.index_dir / "sparse.idx")
      .Input(options.topics)
      .Output(options.output)
      .Result("topics", topics.size())
      .Write(FileManifest(options.output));
  return run;
}

Run SearchDenseRun(const SearchDenseOptions& options) {
  RequireFile(options.index_dir, "index directory");
  RequireFile(options.query_vectors, "query vectors");
  RequireOutput(options.output, "output run");
  if (options.k < 1) throw InvalidArgument("k must be >= 1");
  const DenseIndex index = DenseIndex::Load(options.index_dir);
  const std::vector<EmbeddingVector> queries = ReadVectors(options.query_vectors);
  Run run;
  run.tag = options.tag;
  for (const EmbeddingVector& q : queries) {
    const std::vector<ScoredHit> segments =
        SearchDense(index, q, options.k, options.threads);
    run.topics[q.id] = ToRankedList(AggregateSegments(segments, index, options.m));
  }
  EnsureParentDir(options.output);
  SaveRun(run, options.output);
  Manifest("search")
      .Setting("model", "dense")
      .Setting("k", options.k)
      .Setting("m", options.m)
      .Input(options.index_dir / "dense.idx")
      .Input(options.query_vectors)
      .Output(options.output)
      .Result("topics", queries.size())
      .Write(FileManifest(options.output));
  return run;
}

Run FuseRuns(const FuseOptions& options) {
  RequireFile(options.sparse_run, "sparse run");
  RequireFile(options.dense_run, "dense run");
  RequireOutput(options.output, "output run");
  options.fusion.Validate();
  Run fused = Fuse(LoadRun(options.sparse_run), LoadRun(options.dense_run),
                   options.fusion);
  EnsureParentDir(options.output);
  SaveRun(fused, options.output);
  Manifest("fuse")
      .Setting("fusion", FusionJson(options.fusion))
      .Input(options.sparse_run)
      .Input(options.dense_run)
      .Output(options.output)
      .Write(FileManifest(options.output));
  return fused;
}

CrossValidationReport SweepAlpha(const SweepAlphaOptions& options) {
  RequireFile(options.sparse_run, "sparse run");
  RequireFile(options.dense_run, "dense run");
  RequireFile(options.qrels, "qrels");
  if (!options.topics.empty()) RequireFile(options.topics, "topics");
  RequireOutput(options.output_dir, "output directory");
  options.fusion.Validate();

  std::vector<std::string> topic_ids;
  if (!options.topics.empty()) {
    for (const Topic& t : LoadTopics(options.topics)) topic_ids.push_back(t.topic_id);
  }
  const CrossValidationReport report = CrossValidateAlpha(
      topic_ids, LoadQrels(options.qrels), LoadRun(options.sparse_run),
      LoadRun(options.dense_run), options.fusion);

  std::filesystem::create_directories(options.output_dir);
  WriteFoldReport(report, options.fusion, options.output_dir / "folds.jsonl");
  SaveRun(report.fused, options.output_dir / "fused.run");

  Json alphas = Json::array();
  for (const FoldResult& f : report.folds) alphas.push_back(f.alpha);
  Manifest m("sweep-alpha");
  m.Seed(options.fusion.seed)
      .Setting("fusion", FusionJson(options.fusion))
      .Input(options.sparse_run)
      .Input(options.dense_run)
      .Input(options.qrels);
  if (!options.topics.empty()) m.Input(options.topics);
  m.Output(options.output_dir / "folds.jsonl")
      .Output(options.output_dir / "fused.run")
      .Result("fold_alphas", alphas)
      .Result("pooled_map", report.pooled.map)
      .Result("pooled_p20", report.pooled.p20)
      .Result("pooled_ndcg20", report.pooled.ndcg20)
      .Write(options.output_dir / "manifest.json");
  return report;
}

std::vector<MetricReport> EvaluateRuns(const EvaluateOptions& options) {
  if (options.runs.empty()) throw InvalidArgument("no run files given");
  for (const path& r : options.runs) RequireFile(r, "run file");
  RequireFile(options.qrels, "qrels");
  const Qrels qrels = LoadQrels(options.qrels);
  std::vector<MetricReport> reports;
  for (const path& r : options.runs) {
    MetricReport report = Evaluate(LoadRun(r), qrels, {options.include_missing_topics});
    if (report.tag.empty()) report.tag = r.stem().string();
    reports.push_back(std::move(report));
  }
  if (!options.output.empty()) {
    EnsureParentDir(options.output);
    std::ofstream out(options.output, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + options.output.string());
    WriteMetricRecords(reports, out);
    out.close();
    Manifest m("evaluate");
    m.Setting("include_missing_topics", options.include_missing_topics);
    for (const path& r : options.runs) m.Input(r);
    m.Input(options.qrels).Output(options.output).Write(FileManifest(options.output));
  }
  return reports;
}

std::vector<SignificanceRow> Sigtest(const SigtestOptions& options) {
  RequireFile(options.system_run, "system run");
  RequireFile(options.baseline_run, "baseline run");
  RequireFile(options.qrels, "qrels");
  const Qrels qrels = LoadQrels(options.qrels);
  MetricReport system = Evaluate(LoadRun(options.system_run), qrels);
  MetricReport baseline = Evaluate(LoadRun(options.baseline_run), qrels);
  if (system.tag.empty()) system.tag = options.system_run.stem().string();
  if (baseline.tag.empty()) baseline.tag = options.baseline_run.stem().string();
  std::vector<SignificanceRow> rows;
  for (Metric metric : options.metrics) {
    rows.push_back(CompareReports(system, baseline, metric, options.randomization));
  }
  if (!options.output.empty()) {
    EnsureParentDir(options.output);
    std::ofstream out(options.output, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + options.output.string());
    WriteSignificanceRecords(rows, out);
    out.close();
    Manifest("sigtest")
        .Seed(options.randomization.seed)
        .Setting("iterations", options.randomization.iterations)
        .Input(options.system_run)
        .Input(options.baseline_run)
        .Input(options.qrels)
        .Output(options.output)
        .Write(FileManifest(options.output));
  }
  return rows;
}

SynthesisStats SynthesizeTrainingData(const SynthesizeOptions& options) {
  RequireFile(options.corpus, "corpus");
  RequireOutput(options.output, "output file");
  options.config.Validate();
  const std::vector<Document> articles = LoadCorpus(options.corpus);
  SynthesisResult result;
  if (options.index_segments) {
    std::vector<Document> segments;
    ParentMap parents;
    for (const Document& a : articles) {
      for (Segment& s : SegmentDocument(a, options.segments)) {
        parents[s.segment_id] = s.parent_doc_id;
        segments.push_back({s.segment_id, "", std::move(s.text), a.language});
      }
    }
    IndexOptions index_options = options.index;
    index_options.include_title = false;
    const InvertedIndex index = InvertedIndex::Build(segments, index_options);
    result = Synthesize(articles, index, options.config, &parents);
  } else {
    const InvertedIndex index = InvertedIndex::Build(articles, options.index);
    result = Synthesize(articles, index, options.config);
  }
  EnsureParentDir(options.output);
  ExportTrainingFile(result.examples, options.output);
  const SynthesisStats& s = result.stats;
  Manifest("synthesize")
      .Seed(options.config.seed)
      .Setting("k", options.config.k)
      .Setting("negatives", options.config.negatives_per_example)
      .Setting("sampling", NegativeSamplingName(options.config.sampling))
      .Setting("min_title_tokens", options.config.min_title_tokens)
      .Setting("min_body_tokens", options.config.min_body_tokens)
      .Setting("index_segments", options.index_segments)
      .Setting("analyzer", AnalyzerJson(options.index))
      .Input(options.corpus)
      .Output(options.output)
      .Result("articles", s.articles)
      .Result("filtered_title", s.filtered_title)
      .Result("filtered_body", s.filtered_body)
      .Result("dropped_not_retrieved", s.dropped_not_retrieved)
      .Result("emitted", s.emitted)
      .Write(FileManifest(options.output));
  return s;
}

PipelineResult RunPipeline(const ExperimentConfig& config,
                           const std::string& config_text) {
  config.Validate();
  config.ValidateInputs();
  const path out = config.output_dir;
  std::filesystem::create_directories(out);
  {
    std::ofstream echo(out / "config.txt", std::ios::binary | std::ios::trunc);
    echo << config_text;
    std::ofstream effective(out / "effective_config.txt",
                            std::ios::binary | std::ios::trunc);
    effective << config.ToKeyValues().ToText();
    if (!echo || !effective) throw IoError("cannot write config echo in " + out.string());
  }

  IndexSparse({config.corpus, out / "sparse", config.index, MalformedPolicy::kAbort});

  SearchSparseOptions sparse;
  sparse.index_dir = out / "sparse";
  sparse.topics = config.topics;
  sparse.k = config.sparse_k;
  sparse.bm25 = config.bm25;
  sparse.rm3 = config.rm3;
  sparse.threads = config.threads;
  sparse.model = SparseModel::kBm25;
  sparse.output = out / "runs" / "bm25.run";
  SearchSparse(sparse);
  sparse.model = SparseModel::kBm25Rm3;
  sparse.output = out / "runs" / "bm25rm3.run";
  SearchSparse(sparse);

  PipelineResult result;
  const std::vector<MetricReport> term_reports = EvaluateRuns(
      {{out / "runs" / "bm25.run", out / "runs" / "bm25rm3.run"}, config.qrels, {}, false});
  result.baseline_tag = PickTermBaseline(term_reports[0], term_reports[1]);
  result.fused_with =
      config.fusion_sparse == "auto" ? result.baseline_tag : config.fusion_sparse;

  path query_vectors = config.query_vectors;
  path passage_vectors = config.passage_vectors;
  if (query_vectors.empty()) {
    EmbedOptions embed;
    embed.buckets = config.encoder_buckets;
    embed.analyzer = config.index.analyzer;
    embed.segments = config.segments;
    embed.kind = EmbedKind::kPassages;
    embed.input = config.corpus;
    embed.output = passage_vectors = out / "vectors" / "passages.vec";
    Embed(embed);
    embed.kind = EmbedKind::kQueries;
    embed.input = config.topics;
    embed.output = query_vectors = out / "vectors" / "queries.vec";
    Embed(embed);
  }
  IndexDense({passage_vectors, {}, out / "dense"});
  SearchDenseOptions dense;
  dense.index_dir = out / "dense";
  dense.query_vectors = query_vectors;
  dense.output = out / "runs" / "dense.run";
  dense.k = config.dense_k;
  dense.m = config.aggregate_m;
  dense.threads = config.threads;
  SearchDenseRun(dense);

  SweepAlphaOptions sweep;
  sweep.sparse_run = out / "runs" / (result.fused_with + ".run");
  sweep.dense_run = out / "runs" / "dense.run";
  sweep.qrels = config.qrels;
  sweep.topics = config.topics;
  sweep.output_dir = out / "cv";
  sweep.fusion = config.fusion;
  result.cv = SweepAlpha(sweep);

  result.reports = EvaluateRuns(
      {{out / "runs" / "bm25.run", out / "runs" / "bm25rm3.run",
        out / "runs" / "dense.run", out / "cv" / "fused.run"},
       config.qrels, out / "report.jsonl", false});

  RandomizationOptions randomization;
  randomization.iterations = config.sig_iterations;
  randomization.seed = config.seed;
  randomization.threads = config.threads;
  const MetricReport& fused = result.reports[3];
  for (size_t baseline = 0; baseline < 2; ++baseline) {
    for (Metric metric : {Metric::kAp, Metric::kP20, Metric::kNdcg20}) {
      result.significance.push_back(
          CompareReports(fused, result.reports[baseline], metric, randomization));
    }
  }
  {
    std::ofstream sig(out / "significance.jsonl", std::ios::binary | std::ios::trunc);
    WriteSignificanceRecords(result.significance, sig);
    std::ofstream table(out / "report.txt", std::ios::binary | std::ios::trunc);
    table << FormatMetricTable(result.reports) << '\n'
          << "term-matching baseline (higher P@20): " << result.baseline_tag << '\n'
          << "fused run built from: " << result.fused_with << '\n';
    for (const FoldResult& f : result.cv.folds) {
      table << "fold " << f.fold << ": alpha = " << FormatDouble(f.alpha) << '\n';
    }
    table << '\n' << FormatSignificanceTable(result.significance);
    if (!sig || !table) throw IoError("cannot write reports in " + out.string());
  }

  Json alphas = Json::array();
  for (const FoldResult& f : result.cv.folds) alphas.push_back(f.alpha);
  Json p_values = Json::object();
  for (const SignificanceRow& row : result.significance) {
    p_values[row.baseline + "/" + std::string(MetricName(row.metric))] =
        row.result.p_value;
  }
  Manifest m("pipeline");
  m.Seed(config.seed).Settings(config.ToKeyValues()).Input(config.corpus)
      .Input(config.topics).Input(config.qrels);
  if (!config.query_vectors.empty()) {
    m.Input(config.query_vectors).Input(config.passage_vectors);
  }
  for (const char* name : {"bm25.run", "bm25rm3.run", "dense.run"}) {
    m.Output(out / "runs" / name);
  }
  m.Output(out / "cv" / "fused.run")
      .Output(out / "cv" / "folds.jsonl")
      .Output(out / "report.jsonl")
      .Output(out / "significance.jsonl")
      .Result("baseline", result.baseline_tag)
      .Result("fused_with", result.fused_with)
      .Result("fold_alphas", alphas)
      .Result("fused_map", fused.map)
      .Result("fused_p20", fused.p20)
      .Result("fused_ndcg20", fused.ndcg20)
      .Result("p_values", p_values)
      .Write(out / "manifest.json");
  return result;
}

}  // namespace hybridir::app
