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

#ifndef HYBRIDIR_SIGNIFICANCE_H_
#define HYBRIDIR_SIGNIFICANCE_H_

#include <cstdint>
#include <span>

namespace hybridir {

struct RandomizationOptions {
  int iterations = 100000;
  uint64_t seed = 0;
  int threads = 1;
  // Up to this many topics every sign assignment is enumerated.
  int exhaustive_max_topics = 20;
};

struct RandomizationResult {
  double p_value = 1.0;
  double observed = 0.0;  // |mean(a - b)|
  bool exhaustive = false;
};

// Fisher's paired, two-sided randomization test on per-topic scores.
//
// Exhaustive mode counts the sign assignments of the paired differences
// (identity included) whose |mean| reaches the observed one. Monte Carlo
// mode draws sign vectors from a counter-based stream keyed by (seed, trial),
// so the result depends on seed and iteration count only, not on threads,
// and reports (count + 1) / (iterations + 1).
//
// Throws InvalidArgument on length mismatch or empty input.
RandomizationResult RandomizationTest(std::span<const double> a,
                                      std::span<const double> b,
                                      const RandomizationOptions& options = {});

}  // namespace hybridir

#endif  // HYBRIDIR_SIGNIFICANCE_H_
