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

#include "hybridir/weaksup.h"

#include <algorithm>
#include <array>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "hybridir/error.h"
#include "hybridir/parallel.h"
#include "hybridir/random.h"
#include "hybridir/text.h"

namespace hybridir {

namespace {

using Json = nlohmann::ordered_json;

// Parenthesized suffixes that mark disambiguation pages in the target
// languages.
constexpr std::array<std::string_view, 7> kDisambiguationSuffixes = {
    "(disambiguation)", "(homonymie)", "(desambiguación)", "(消歧义)",
    "(消歧義)",          "(توضيح)",      "(बहुविकल्पी)"};

Json PassageToJson(const PassageRef& p) {
  Json j;
  j["id"] = p.doc_id;
  j["title"] = p.title;
  j["text"] = p.text;
  return j;
}

PassageRef PassageFromJson(const Json& j) {
  return {j.at("id").get<std::string>(), j.at("title").get<std::string>(),
          j.at("text").get<std::string>()};
}

PassageRef RefOf(const Document& doc) {
  return {doc.doc_id, doc.title, doc.text};
}

struct Outcome {
  enum Kind { kFilteredTitle, kFilteredBody, kDropped, kEmitted } kind;
  TrainingExample example;
};

}  // namespace

std::string_view NegativeSamplingName(NegativeSampling sampling) {
  return sampling == NegativeSampling::kRandom ? "random" : "top";
}

NegativeSampling ParseNegativeSampling(std::string_view name) {
  if (name == "top") return NegativeSampling::kTop;
  if (name == "random" || name == "random-from-retrieved") {
    return NegativeSampling::kRandom;
  }
  throw InvalidArgument("unknown negative sampling '" + std::string(name) + "'");
}

void SynthesisConfig::Validate() const {
  if (k < 1) throw InvalidArgument("k must be >= 1");
  if (negatives_per_example < 0 || negatives_per_example > k - 1) {
    throw InvalidArgument("negatives_per_example must lie in [0, k - 1]");
  }
  if (min_title_tokens < 0 || min_body_tokens < 0) {
    throw InvalidArgument("length filters must be >= 0");
  }
}

std::string CleanTitle(std::string_view title) {
  std::string cleaned = text::NormalizeWhitespace(title);
  for (std::string_view suffix : kDisambiguationSuffixes) {
    if (cleaned.size() >= suffix.size() &&
        cleaned.compare(cleaned.size() - suffix.size(), suffix.size(),
                        suffix) == 0) {
      cleaned = text::NormalizeWhitespace(
          std::string_view(cleaned).substr(0, cleaned.size() - suffix.size()));
      break;
    }
  }
  return cleaned;
}

std::vector<ScoredHit> RetrieveArticles(const InvertedIndex& index,
                                        const std::string& query, int k,
                                        const Bm25Params& bm25,
                                        const ParentMap* segment_parents) {
  std::vector<ScoredHit> hits = SearchBm25(index, Topic{"", query}, k, bm25);
  if (segment_parents == nullptr) return hits;
  std::vector<ScoredHit> articles;
  std::unordered_set<std::string> seen;
  for (const ScoredHit& hit : hits) {
    auto it = segment_parents->find(hit.doc_id);
    if (it == segment_parents->end()) {
      throw NotFound("segment '" + hit.doc_id + "' has no parent article");
    }
    if (seen.insert(it->second).second) {
      articles.push_back(
          {it->second, hit.score, static_cast<int>(articles.size() + 1)});
    }
  }
  return articles;
}

SynthesisResult Synthesize(const std::vector<Document>& articles,
                           const InvertedIndex& index,
                           const SynthesisConfig& config,
                           const ParentMap* segment_parents) {
  config.Validate();
  std::unordered_set<std::string_view> indexed_parents;
  if (segment_parents != nullptr) {
    for (const auto& [segment, parent] : *segment_parents) {
      indexed_parents.insert(parent);
    }
  }
  std::unordered_map<std::string_view, size_t> position;
  position.reserve(articles.size());
  for (size_t i = 0; i < articles.size(); ++i) {
    const bool known = segment_parents == nullptr
                           ? index.ordinal(articles[i].doc_id).has_value()
                           : indexed_parents.contains(articles[i].doc_id);
    if (!known) {
      throw NotFound("article '" + articles[i].doc_id +
                     "' is not in the index");
    }
    position.emplace(articles[i].doc_id, i);
  }

  std::vector<Outcome> outcomes(articles.size());
  ParallelFor(articles.size(), config.threads, [&](size_t begin, size_t end) {
    for (size_t a = begin; a < end; ++a) {
      const Document& article = articles[a];
      Outcome& outcome = outcomes[a];
      const std::string query = CleanTitle(article.title);
      if (index.Analyze(query).size() <
          static_cast<size_t>(config.min_title_tokens) || query.empty()) {
        outcome.kind = Outcome::kFilteredTitle;
        continue;
      }
      if (index.Analyze(article.text).size() <
          static_cast<size_t>(config.min_body_tokens)) {
        outcome.kind = Outcome::kFilteredBody;
        continue;
      }
      const std::vector<ScoredHit> hits = RetrieveArticles(
          index, query, config.k, config.bm25, segment_parents);
      std::optional<int> rank;
      std::vector<size_t> candidates;  // positions in `hits`
      for (size_t h = 0; h < hits.size(); ++h) {
        if (hits[h].doc_id == article.doc_id) {
          rank = hits[h].rank;
        } else {
          candidates.push_back(h);
        }
      }
      if (!rank) {
        outcome.kind = Outcome::kDropped;
        continue;
      }
      const size_t wanted = std::min(
          candidates.size(), static_cast<size_t>(config.negatives_per_example));
      if (config.sampling == NegativeSampling::kRandom) {
        SplitMix64 rng(KeyedHash(config.seed, a));
        // Partial Fisher-Yates over the candidate positions.
        for (size_t i = 0; i < wanted; ++i) {
          std::swap(candidates[i],
                    candidates[i + rng.Below(candidates.size() - i)]);
        }
        candidates.resize(wanted);
        std::sort(candidates.begin(), candidates.end());
      } else {
        candidates.resize(wanted);
      }
      TrainingExample& ex = outcome.example;
      ex.query = query;
      ex.positive = RefOf(article);
      ex.positive_rank = *rank;
      for (size_t h : candidates) {
        auto it = position.find(hits[h].doc_id);
        if (it == position.end()) {
          throw NotFound("retrieved doc '" + hits[h].doc_id +
                         "' is not among the articles");
        }
        ex.negatives.push_back(RefOf(articles[it->second]));
      }
      outcome.kind = Outcome::kEmitted;
    }
  });

  SynthesisResult result;
  result.stats.articles = articles.size();
  for (Outcome& outcome : outcomes) {
    switch (outcome.kind) {
      case Outcome::kFilteredTitle:
        ++result.stats.filtered_title;
        break;
      case Outcome::kFilteredBody:
        ++result.stats.filtered_body;
        break;
      case Outcome::kDropped:
        ++result.stats.dropped_not_retrieved;
        break;
      case Outcome::kEmitted:
        ++result.stats.emitted;
        result.examples.push_back(std::move(outcome.example));
        break;
    }
  }
  return result;
}

size_t WriteTrainingExamples(const std::vector<TrainingExample>& examples,
                             std::ostream& out) {
  for (const TrainingExample& ex : examples) {
    Json j;
    j["query"] = ex.query;
    j["positive"] = PassageToJson(ex.positive);
    j["negatives"] = Json::array();
    for (const PassageRef& n : ex.negatives) {
      j["negatives"].push_back(PassageToJson(n));
    }
    j["positive_rank"] = ex.positive_rank;
    out << j.dump() << '\n';
  }
  return examples.size();
}

size_t ExportTrainingFile(const std::vector<TrainingExample>& examples,
                          const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  const size_t count = WriteTrainingExamples(examples, out);
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
  return count;
}

std::vector<TrainingExample> ParseTrainingExamples(std::istream& in) {
  std::vector<TrainingExample> examples;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    try {
      const Json j = Json::parse(line);
      TrainingExample ex;
      ex.query = j.at("query").get<std::string>();
      ex.positive = PassageFromJson(j.at("positive"));
      for (const Json& n : j.at("negatives")) {
        ex.negatives.push_back(PassageFromJson(n));
      }
      ex.positive_rank = j.at("positive_rank").get<int>();
      examples.push_back(std::move(ex));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("training file line " + std::to_string(line_number) +
                        ": " + e.what());
    }
  }
  return examples;
}

std::vector<TrainingExample> LoadTrainingFile(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("cannot open " + path.string());
  return ParseTrainingExamples(in);
}

}  // namespace hybridir
