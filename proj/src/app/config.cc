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

#include "hybridir/app/config.h"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>

#include "hybridir/error.h"

namespace hybridir::app {

namespace {

std::string Trim(std::string_view s) {
  const size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = Trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string JoinList(const std::vector<std::string>& items) {
  std::string out;
  for (size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ",";
    out += items[i];
  }
  return out;
}

template <typename T>
T ParseNumber(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  auto [p, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || p != end) {
    throw InvalidArgument("config key '" + key + "': bad number '" + value + "'");
  }
  return out;
}

bool ParseBool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") {
    return true;
  }
  if (value == "false" || value == "0" || value == "no" || value == "off") {
    return false;
  }
  throw InvalidArgument("config key '" + key + "': bad boolean '" + value + "'");
}

std::string FormatDouble(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

}  // namespace

KeyValueConfig KeyValueConfig::Parse(std::istream& in,
                                     const std::string& source) {
  KeyValueConfig config;
  std::string section;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw FormatError(source + ":" + std::to_string(line_number) +
                          ": unterminated section header");
      }
      section = Trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw FormatError(source + ":" + std::to_string(line_number) +
                        ": expected 'key = value'");
    }
    std::string key = Trim(std::string_view(line).substr(0, eq));
    if (!section.empty()) key = section + "." + key;
    config.Set(key, Trim(std::string_view(line).substr(eq + 1)));
  }
  return config;
}

KeyValueConfig KeyValueConfig::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFound("cannot open " + path.string());
  return Parse(in, path.string());
}

std::optional<std::string> KeyValueConfig::Get(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValueConfig::ToText() const {
  std::string out;
  for (const auto& [key, value] : entries_) {
    out += key + " = " + value + "\n";
  }
  return out;
}

ExperimentConfig ExperimentConfig::FromKeyValues(const KeyValueConfig& kv) {
  ExperimentConfig c;
  using Setter = std::function<void(const std::string& key, const std::string& value)>;
  const std::map<std::string, Setter> setters = {
      {"paths.corpus", [&](auto&, auto& v) { c.corpus = v; }},
      {"paths.topics", [&](auto&, auto& v) { c.topics = v; }},
      {"paths.qrels", [&](auto&, auto& v) { c.qrels = v; }},
      {"paths.output", [&](auto&, auto& v) { c.output_dir = v; }},
      {"paths.query_vectors", [&](auto&, auto& v) { c.query_vectors = v; }},
      {"paths.passage_vectors", [&](auto&, auto& v) { c.passage_vectors = v; }},
      {"analyzer.lowercase",
       [&](auto& k, auto& v) { c.index.analyzer.lowercase = ParseBool(k, v); }},
      {"analyzer.stemmer",
       [&](auto&, auto& v) { c.index.analyzer.stemmer = ParseStemmer(v); }},
      {"analyzer.stopwords",
       [&](auto&, auto& v) { c.index.analyzer.stopwords = SplitList(v); }},
      {"analyzer.include_title",
       [&](auto& k, auto& v) { c.index.include_title = ParseBool(k, v); }},
      {"segment.window",
       [&](auto& k, auto& v) { c.segments.window = ParseNumber<int>(k, v); }},
      {"segment.stride",
       [&](auto& k, auto& v) { c.segments.stride = ParseNumber<int>(k, v); }},
      {"bm25.k1", [&](auto& k, auto& v) { c.bm25.k1 = ParseNumber<double>(k, v); }},
      {"bm25.b", [&](auto& k, auto& v) { c.bm25.b = ParseNumber<double>(k, v); }},
      {"bm25.k", [&](auto& k, auto& v) { c.sparse_k = ParseNumber<int>(k, v); }},
      {"rm3.fb_docs",
       [&](auto& k, auto& v) { c.rm3.fb_docs = ParseNumber<int>(k, v); }},
      {"rm3.fb_terms",
       [&](auto& k, auto& v) { c.rm3.fb_terms = ParseNumber<int>(k, v); }},
      {"rm3.orig_weight",
       [&](auto& k, auto& v) { c.rm3.orig_weight = ParseNumber<double>(k, v); }},
      {"dense.k", [&](auto& k, auto& v) { c.dense_k = ParseNumber<int>(k, v); }},
      {"dense.m", [&](auto& k, auto& v) { c.aggregate_m = ParseNumber<int>(k, v); }},
      {"dense.buckets",
       [&](auto& k, auto& v) { c.encoder_buckets = ParseNumber<int>(k, v); }},
      {"fusion.alpha",
       [&](auto& k, auto& v) { c.fusion.alpha = ParseNumber<double>(k, v); }},
      {"fusion.normalization",
       [&](auto&, auto& v) { c.fusion.normalization = ParseNormalization(v); }},
      {"fusion.folds",
       [&](auto& k, auto& v) { c.fusion.folds = ParseNumber<int>(k, v); }},
      {"fusion.objective",
       [&](auto&, auto& v) { c.fusion.objective = ParseMetric(v); }},
      {"fusion.grid",
       [&](auto& k, auto& v) {
         c.fusion.alpha_grid.clear();
         for (const std::string& item : SplitList(v)) {
           c.fusion.alpha_grid.push_back(ParseNumber<double>(k, item));
         }
       }},
      {"fusion.sparse_depth",
       [&](auto& k, auto& v) { c.fusion.sparse_depth = ParseNumber<int>(k, v); }},
      {"fusion.dense_depth",
       [&](auto& k, auto& v) { c.fusion.dense_depth = ParseNumber<int>(k, v); }},
      {"fusion.depth",
       [&](auto& k, auto& v) { c.fusion.output_depth = ParseNumber<int>(k, v); }},
      {"fusion.sparse", [&](auto&, auto& v) { c.fusion_sparse = v; }},
      {"sigtest.iterations",
       [&](auto& k, auto& v) { c.sig_iterations = ParseNumber<int>(k, v); }},
      {"synthesis.k",
       [&](auto& k, auto& v) { c.synthesis.k = ParseNumber<int>(k, v); }},
      {"synthesis.negatives",
       [&](auto& k, auto& v) {
         c.synthesis.negatives_per_example = ParseNumber<int>(k, v);
       }},
      {"synthesis.sampling",
       [&](auto&, auto& v) { c.synthesis.sampling = ParseNegativeSampling(v); }},
      {"synthesis.min_title_tokens",
       [&](auto& k, auto& v) {
         c.synthesis.min_title_tokens = ParseNumber<int>(k, v);
       }},
      {"synthesis.min_body_tokens",
       [&](auto& k, auto& v) {
         c.synthesis.min_body_tokens = ParseNumber<int>(k, v);
       }},
      {"run.seed", [&](auto& k, auto& v) { c.seed = ParseNumber<uint64_t>(k, v); }},
      {"run.threads",
       [&](auto& k, auto& v) { c.threads = ParseNumber<int>(k, v); }},
  };
  for (const auto& [key, value] : kv.entries()) {
    auto it = setters.find(key);
    if (it == setters.end()) {
      throw InvalidArgument("unknown config key '" + key + "'");
    }
    it->second(key, value);
  }
  c.fusion.seed = c.seed;
  c.synthesis.seed = c.seed;
  c.synthesis.threads = c.threads;
  c.index.threads = c.threads;
  c.synthesis.bm25 = c.bm25;
  return c;
}

KeyValueConfig ExperimentConfig::ToKeyValues() const {
  KeyValueConfig kv;
  kv.Set("paths.corpus", corpus.string());
  kv.Set("paths.topics", topics.string());
  kv.Set("paths.qrels", qrels.string());
  kv.Set("paths.output", output_dir.string());
  kv.Set("paths.query_vectors", query_vectors.string());
  kv.Set("paths.passage_vectors", passage_vectors.string());
  kv.Set("analyzer.lowercase", index.analyzer.lowercase ? "true" : "false");
  kv.Set("analyzer.stemmer", std::string(StemmerName(index.analyzer.stemmer)));
  kv.Set("analyzer.stopwords", JoinList(index.analyzer.stopwords));
  kv.Set("analyzer.include_title", index.include_title ? "true" : "false");
  kv.Set("segment.window", std::to_string(segments.window));
  kv.Set("segment.stride", std::to_string(segments.stride));
  kv.Set("bm25.k1", FormatDouble(bm25.k1));
  kv.Set("bm25.b", FormatDouble(bm25.b));
  kv.Set("bm25.k", std::to_string(sparse_k));
  kv.Set("rm3.fb_docs", std::to_string(rm3.fb_docs));
  kv.Set("rm3.fb_terms", std::to_string(rm3.fb_terms));
  kv.Set("rm3.orig_weight", FormatDouble(rm3.orig_weight));
  kv.Set("dense.k", std::to_string(dense_k));
  kv.Set("dense.m", std::to_string(aggregate_m));
  kv.Set("dense.buckets", std::to_string(encoder_buckets));
  kv.Set("fusion.alpha", FormatDouble(fusion.alpha));
  kv.Set("fusion.normalization",
         std::string(NormalizationName(fusion.normalization)));
  kv.Set("fusion.folds", std::to_string(fusion.folds));
  kv.Set("fusion.objective", std::string(MetricName(fusion.objective)));
  std::vector<std::string> grid;
  for (double a : fusion.alpha_grid) grid.push_back(FormatDouble(a));
  kv.Set("fusion.grid", JoinList(grid));
  kv.Set("fusion.sparse_depth", std::to_string(fusion.sparse_depth));
  kv.Set("fusion.dense_depth", std::to_string(fusion.dense_depth));
  kv.Set("fusion.depth", std::to_string(fusion.output_depth));
  kv.Set("fusion.sparse", fusion_sparse);
  kv.Set("sigtest.iterations", std::to_string(sig_iterations));
  kv.Set("synthesis.k", std::to_string(synthesis.k));
  kv.Set("synthesis.negatives", std::to_string(synthesis.negatives_per_example));
  kv.Set("synthesis.sampling",
         std::string(NegativeSamplingName(synthesis.sampling)));
  kv.Set("synthesis.min_title_tokens", std::to_string(synthesis.min_title_tokens));
  kv.Set("synthesis.min_body_tokens", std::to_string(synthesis.min_body_tokens));
  kv.Set("run.seed", std::to_string(seed));
  kv.Set("run.threads", std::to_string(threads));
  return kv;
}

void ExperimentConfig::ValidateInputs() const {
  auto require = [](const std::filesystem::path& p, const char* what) {
    if (p.empty()) throw InvalidArgument(std::string("no ") + what + " path given");
    if (!std::filesystem::exists(p)) {
      throw NotFound(std::string(what) + " not found: " + p.string());
    }
  };
  require(corpus, "corpus");
  require(topics, "topics");
  require(qrels, "qrels");
  if (output_dir.empty()) throw InvalidArgument("no output directory given");
  if (query_vectors.empty() != passage_vectors.empty()) {
    throw InvalidArgument(
        "query and passage vector files must be given together");
  }
  if (!query_vectors.empty()) {
    require(query_vectors, "query vectors");
    require(passage_vectors, "passage vectors");
  }
}

void ExperimentConfig::Validate() const {
  if (segments.window < 1 || segments.stride < 1) {
    throw InvalidArgument("segment window and stride must be >= 1");
  }
  if (sparse_k < 1 || dense_k < 1) throw InvalidArgument("k must be >= 1");
  if (aggregate_m < 1) throw InvalidArgument("dense.m must be >= 1");
  if (encoder_buckets < 1) throw InvalidArgument("dense.buckets must be >= 1");
  if (rm3.orig_weight < 0.0 || rm3.orig_weight > 1.0) {
    throw InvalidArgument("rm3.orig_weight must lie in [0, 1]");
  }
  if (fusion_sparse != "auto" && fusion_sparse != "bm25" &&
      fusion_sparse != "bm25rm3") {
    throw InvalidArgument("fusion.sparse must be auto, bm25 or bm25rm3");
  }
  if (sig_iterations < 1) throw InvalidArgument("sigtest.iterations must be >= 1");
  if (threads < 1) throw InvalidArgument("run.threads must be >= 1");
  fusion.Validate();
  synthesis.Validate();
}

}  // namespace hybridir::app
