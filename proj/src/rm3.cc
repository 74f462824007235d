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

#include "hybridir/rm3.h"

#include <algorithm>

#include "hybridir/error.h"

namespace hybridir {

std::map<std::string, double> EstimateRelevanceModel(
    const InvertedIndex& index, const std::vector<ScoredHit>& hits,
    int fb_docs) {
  std::map<std::string, double> model;
  const size_t n = std::min(hits.size(), static_cast<size_t>(std::max(fb_docs, 0)));
  double total = 0.0;
  for (size_t i = 0; i < n; ++i) total += hits[i].score;
  if (n == 0 || total <= 0.0) return model;

  std::map<TermId, double> by_id;
  for (size_t i = 0; i < n; ++i) {
    const auto doc = index.ordinal(hits[i].doc_id);
    if (!doc) {
      throw NotFound("feedback doc '" + hits[i].doc_id + "' not in index");
    }
    const double length = index.doc_length(*doc);
    if (length == 0.0) continue;
    const double doc_weight = hits[i].score / total;
    for (const TermCount& tc : index.doc_terms(*doc)) {
      by_id[tc.term] += static_cast<double>(tc.tf) / length * doc_weight;
    }
  }
  for (const auto& [id, p] : by_id) model.emplace(index.terms()[id], p);
  return model;
}

WeightedQuery Rm3Expand(const InvertedIndex& index,
                        const WeightedQuery& original,
                        const std::vector<ScoredHit>& initial_hits,
                        const Rm3Params& params) {
  if (params.orig_weight < 0.0 || params.orig_weight > 1.0) {
    throw InvalidArgument("orig_weight must lie in [0, 1]");
  }
  if (params.fb_terms < 0) throw InvalidArgument("fb_terms must be >= 0");
  const std::map<std::string, double> model =
      EstimateRelevanceModel(index, initial_hits, params.fb_docs);
  if (model.empty()) return original;

  std::vector<std::pair<std::string, double>> ranked(model.begin(),
                                                     model.end());
  const size_t keep =
      std::min(ranked.size(), static_cast<size_t>(params.fb_terms));
  std::partial_sort(ranked.begin(), ranked.begin() + keep, ranked.end(),
                    [](const auto& a, const auto& b) {
                      if (a.second != b.second) return a.second > b.second;
                      return a.first < b.first;
                    });
  ranked.resize(keep);
  double kept_mass = 0.0;
  for (const auto& [term, p] : ranked) kept_mass += p;

  WeightedQuery expanded;
  for (const auto& [term, w] : original.weights) {
    expanded.weights[term] += params.orig_weight * w;
  }
  if (kept_mass > 0.0) {
    for (const auto& [term, p] : ranked) {
      expanded.weights[term] += (1.0 - params.orig_weight) * p / kept_mass;
    }
  }
  std::erase_if(expanded.weights,
                [](const auto& entry) { return entry.second <= 0.0; });
  expanded.scale = 1.0;
  return expanded;
}

WeightedQuery Rm3Expand(const InvertedIndex& index, const Topic& topic,
                        const std::vector<ScoredHit>& initial_hits,
                        const Rm3Params& params) {
  return Rm3Expand(index, index.ParseQuery(topic.text), initial_hits, params);
}

std::vector<ScoredHit> SearchBm25Rm3(const InvertedIndex& index,
                                     const Topic& topic, int k,
                                     const Rm3Params& rm3,
                                     const Bm25Params& bm25) {
  if (k < 1) throw InvalidArgument("k must be >= 1");
  const WeightedQuery original = index.ParseQuery(topic.text);
  const int first_pass = std::max(k, std::max(rm3.fb_docs, 1));
  std::vector<ScoredHit> initial = SearchWeighted(index, original, first_pass, bm25);
  const WeightedQuery expanded = Rm3Expand(index, original, initial, rm3);
  if (expanded == original) {
    if (initial.size() > static_cast<size_t>(k)) initial.resize(k);
    return initial;
  }
  return SearchWeighted(index, expanded, k, bm25);
}

}  // namespace hybridir
