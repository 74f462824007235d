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

#include "hybridir/app/report.h"

#include <cstdio>
#include <ostream>

#include <nlohmann/json.hpp>

#include "hybridir/error.h"

namespace hybridir::app {

namespace {

using Record = nlohmann::ordered_json;

std::string Row(const char* fmt, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

}  // namespace

std::string FormatMetricTable(const std::vector<MetricReport>& reports) {
  std::string out = Row("%-24s %8s %8s %8s %7s\n", "run", "AP", "P@20",
                        "nDCG@20", "topics");
  for (const MetricReport& r : reports) {
    out += Row("%-24s %8.4f %8.4f %8.4f %7zu\n", r.tag.c_str(), r.map, r.p20,
               r.ndcg20, r.topics.size());
  }
  return out;
}

void WriteMetricRecords(const std::vector<MetricReport>& reports,
                        std::ostream& out) {
  for (const MetricReport& r : reports) {
    for (const TopicMetrics& t : r.topics) {
      Record rec;
      rec["type"] = "topic";
      rec["run"] = r.tag;
      rec["topic"] = t.topic_id;
      rec["ap"] = t.ap;
      rec["p20"] = t.p20;
      rec["ndcg20"] = t.ndcg20;
      out << rec.dump() << '\n';
    }
    Record rec;
    rec["type"] = "mean";
    rec["run"] = r.tag;
    rec["topics"] = r.topics.size();
    rec["unjudged_topics"] = r.unjudged_topics;
    rec["map"] = r.map;
    rec["p20"] = r.p20;
    rec["ndcg20"] = r.ndcg20;
    out << rec.dump() << '\n';
  }
}

void PairedValues(const MetricReport& a, const MetricReport& b, Metric metric,
                  std::vector<double>& values_a, std::vector<double>& values_b) {
  values_a.clear();
  values_b.clear();
  size_t i = 0;
  size_t j = 0;
  while (i < a.topics.size() && j < b.topics.size()) {
    const std::string& ta = a.topics[i].topic_id;
    const std::string& tb = b.topics[j].topic_id;
    if (ta < tb) {
      ++i;
    } else if (tb < ta) {
      ++j;
    } else {
      values_a.push_back(a.topics[i].value(metric));
      values_b.push_back(b.topics[j].value(metric));
      ++i;
      ++j;
    }
  }
}

SignificanceRow CompareReports(const MetricReport& system,
                               const MetricReport& baseline, Metric metric,
                               const RandomizationOptions& options) {
  std::vector<double> a;
  std::vector<double> b;
  PairedValues(system, baseline, metric, a, b);
  if (a.empty()) {
    throw InvalidArgument("runs '" + system.tag + "' and '" + baseline.tag +
                          "' share no evaluated topics");
  }
  SignificanceRow row;
  row.system = system.tag;
  row.baseline = baseline.tag;
  row.metric = metric;
  row.topics = a.size();
  for (double x : a) row.system_mean += x;
  for (double x : b) row.baseline_mean += x;
  row.system_mean /= static_cast<double>(a.size());
  row.baseline_mean /= static_cast<double>(b.size());
  row.result = RandomizationTest(a, b, options);
  return row;
}

std::string FormatSignificanceTable(const std::vector<SignificanceRow>& rows) {
  std::string out = Row("%-16s %-16s %-7s %8s %8s %9s %s\n", "system",
                        "baseline", "metric", "system", "base", "p", "");
  for (const SignificanceRow& r : rows) {
    const bool up = r.result.p_value < 0.05 && r.system_mean > r.baseline_mean;
    out += Row("%-16s %-16s %-7s %8.4f %8.4f %9.5f %s\n", r.system.c_str(),
               r.baseline.c_str(), std::string(MetricName(r.metric)).c_str(),
               r.system_mean, r.baseline_mean, r.result.p_value,
               up ? "^" : "");
  }
  return out;
}

void WriteSignificanceRecords(const std::vector<SignificanceRow>& rows,
                              std::ostream& out) {
  for (const SignificanceRow& r : rows) {
    Record rec;
    rec["type"] = "sigtest";
    rec["system"] = r.system;
    rec["baseline"] = r.baseline;
    rec["metric"] = MetricName(r.metric);
    rec["topics"] = r.topics;
    rec["system_mean"] = r.system_mean;
    rec["baseline_mean"] = r.baseline_mean;
    rec["p_value"] = r.result.p_value;
    rec["exhaustive"] = r.result.exhaustive;
    out << rec.dump() << '\n';
  }
}

}  // namespace hybridir::app
