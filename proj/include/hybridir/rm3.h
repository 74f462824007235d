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

#ifndef HYBRIDIR_RM3_H_
#define HYBRIDIR_RM3_H_

#include <map>
#include <string>
#include <vector>

#include "hybridir/corpus.h"
#include "hybridir/sparse_index.h"

namespace hybridir {

struct Rm3Params {
  int fb_docs = 10;
  int fb_terms = 10;
  double orig_weight = 0.5;
};

// Relevance model over the top `fb_docs` hits:
//   P(t|R) = sum_d P(t|d) * score(d) / sum_d' score(d')
// with P(t|d) = tf(t, d) / |d|. Not truncated. Sums to 1 unless empty.
std::map<std::string, double> EstimateRelevanceModel(
    const InvertedIndex& index, const std::vector<ScoredHit>& hits,
    int fb_docs);

// Keeps the `fb_terms` most probable relevance-model terms (ties: smaller
// term first), renormalizes them, and mixes with the original query:
//   w(t) = orig_weight * P_orig(t) + (1 - orig_weight) * P_RM(t).
// The result is a distribution with scale 1. Without feedback (no hits or
// fb_docs == 0) the original query is returned unchanged.
WeightedQuery Rm3Expand(const InvertedIndex& index,
                        const WeightedQuery& original,
                        const std::vector<ScoredHit>& initial_hits,
                        const Rm3Params& params = {});

WeightedQuery Rm3Expand(const InvertedIndex& index, const Topic& topic,
                        const std::vector<ScoredHit>& initial_hits,
                        const Rm3Params& params = {});

// BM25, expand from its top hits, then a second BM25 pass with the expanded
// query over the whole index.
std::vector<ScoredHit> SearchBm25Rm3(const InvertedIndex& index,
                                     const Topic& topic, int k = 1000,
                                     const Rm3Params& rm3 = {},
                                     const Bm25Params& bm25 = {});

}  // namespace hybridir

#endif  // HYBRIDIR_RM3_H_
