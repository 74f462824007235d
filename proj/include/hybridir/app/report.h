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

#ifndef HYBRIDIR_APP_REPORT_H_
#define HYBRIDIR_APP_REPORT_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "hybridir/metrics.h"
#include "hybridir/significance.h"

namespace hybridir::app {

// Fixed-width table: one row per report with AP, P@20, nDCG@20 and the
// number of evaluated topics.
std::string FormatMetricTable(const std::vector<MetricReport>& reports);

// Line-delimited records: a "topic" record per evaluated topic of each
// report followed by a "mean" record.
void WriteMetricRecords(const std::vector<MetricReport>& reports,
                        std::ostream& out);

struct SignificanceRow {
  std::string system;
  std::string baseline;
  Metric metric = Metric::kAp;
  size_t topics = 0;
  double system_mean = 0.0;
  double baseline_mean = 0.0;
  RandomizationResult result;
};

// Per-topic values of both reports over their common topics, in topic order.
void PairedValues(const MetricReport& a, const MetricReport& b, Metric metric,
                  std::vector<double>& values_a, std::vector<double>& values_b);

SignificanceRow CompareReports(const MetricReport& system,
                               const MetricReport& baseline, Metric metric,
                               const RandomizationOptions& options);

std::string FormatSignificanceTable(const std::vector<SignificanceRow>& rows);
void WriteSignificanceRecords(const std::vector<SignificanceRow>& rows,
                              std::ostream& out);

}  // namespace hybridir::app

#endif  // HYBRIDIR_APP_REPORT_H_
