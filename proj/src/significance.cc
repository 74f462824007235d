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

#include "hybridir/significance.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <vector>

#include "hybridir/error.h"
#include "hybridir/parallel.h"
#include "hybridir/random.h"

namespace hybridir {

namespace {

// All 2^n signed sums of `d`.
std::vector<double> SubsetSums(std::span<const double> d) {
  std::vector<double> sums{0.0};
  sums.reserve(size_t{1} << d.size());
  for (double x : d) {
    const size_t n = sums.size();
    for (size_t i = 0; i < n; ++i) {
      sums.push_back(sums[i] - x);
      sums[i] += x;
    }
  }
  return sums;
}

// Meet in the middle: split the differences in two halves, enumerate each
// half's signed sums, and count pairs with |left + right| >= threshold.
uint64_t CountExhaustive(std::span<const double> d, double threshold) {
  const size_t half = d.size() / 2;
  const std::vector<double> left = SubsetSums(d.subspan(0, half));
  std::vector<double> right = SubsetSums(d.subspan(half));
  std::sort(right.begin(), right.end());
  if (threshold <= 0.0) return static_cast<uint64_t>(left.size()) * right.size();
  uint64_t count = 0;
  for (double l : left) {
    // right >= threshold - l
    count += right.end() -
             std::lower_bound(right.begin(), right.end(), threshold - l);
    // right <= -threshold - l
    count += std::upper_bound(right.begin(), right.end(), -threshold - l) -
             right.begin();
  }
  return count;
}

}  // namespace

RandomizationResult RandomizationTest(std::span<const double> a,
                                      std::span<const double> b,
                                      const RandomizationOptions& options) {
  if (a.size() != b.size()) {
    throw InvalidArgument("paired samples differ in length (" +
                          std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + ")");
  }
  if (a.empty()) throw InvalidArgument("randomization test needs >= 1 topic");
  const size_t n = a.size();
  std::vector<double> d(n);
  double observed_sum = 0.0;
  double magnitude = 0.0;
  for (size_t i = 0; i < n; ++i) {
    d[i] = a[i] - b[i];
    observed_sum += d[i];
    magnitude += std::fabs(d[i]);
  }
  RandomizationResult result;
  result.observed = std::fabs(observed_sum) / static_cast<double>(n);
  // Sums reached by different summation orders may differ in the last bits.
  const double threshold = std::fabs(observed_sum) - 1e-9 * magnitude;

  if (n <= static_cast<size_t>(options.exhaustive_max_topics) && n < 63) {
    result.exhaustive = true;
    const uint64_t count = CountExhaustive(d, threshold);
    result.p_value = static_cast<double>(count) /
                     static_cast<double>(uint64_t{1} << n);
    return result;
  }

  if (options.iterations < 1) {
    throw InvalidArgument("Monte Carlo test needs >= 1 iteration");
  }
  const auto iterations = static_cast<size_t>(options.iterations);
  std::atomic<uint64_t> count{0};
  ParallelFor(iterations, options.threads, [&](size_t begin, size_t end) {
    uint64_t local = 0;
    for (size_t trial = begin; trial < end; ++trial) {
      double sum = 0.0;
      uint64_t bits = 0;
      for (size_t i = 0; i < n; ++i) {
        if (i % 64 == 0) bits = KeyedHash(options.seed, trial, i / 64);
        sum += (bits & 1) ? -d[i] : d[i];
        bits >>= 1;
      }
      if (std::fabs(sum) >= threshold) ++local;
    }
    count += local;
  });
  result.p_value = static_cast<double>(count.load() + 1) /
                   static_cast<double>(iterations + 1);
  return result;
}

}  // namespace hybridir
