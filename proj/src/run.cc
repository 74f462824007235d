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

#include "hybridir/run.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "hybridir/error.h"

namespace hybridir {

namespace {

std::vector<std::string> SplitFields(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string field;
  while (in >> field) fields.push_back(field);
  return fields;
}

template <typename T>
bool ParseNumber(const std::string& s, T& value) {
  const char* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, value);
  return ec == std::errc() && p == end;
}

Error LineError(const std::string& source, size_t line, const std::string& what) {
  return FormatError(source + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

RankedList ToRankedList(const std::vector<ScoredHit>& hits) {
  RankedList list;
  list.reserve(hits.size());
  for (const ScoredHit& h : hits) list.push_back({h.doc_id, h.score});
  return list;
}

Run ParseRun(std::istream& in, const std::string& source) {
  Run run;
  std::set<std::pair<std::string, std::string>> seen;
  std::string line;
  size_t line_number = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_number;
    const std::vector<std::string> f = SplitFields(line);
    if (f.empty()) continue;
    if (f.size() != 6) {
      throw LineError(source, line_number, "expected 6 fields, got " +
                                               std::to_string(f.size()));
    }
    long rank = 0;
    double score = 0.0;
    if (!ParseNumber(f[3], rank)) {
      throw LineError(source, line_number, "bad rank '" + f[3] + "'");
    }
    if (!ParseNumber(f[4], score)) {
      throw LineError(source, line_number, "bad score '" + f[4] + "'");
    }
    if (!seen.emplace(f[0], f[2]).second) {
      throw LineError(source, line_number,
                      "duplicate doc '" + f[2] + "' in topic " + f[0]);
    }
    if (first) {
      run.tag = f[5];
      first = false;
    }
    run.topics[f[0]].push_back({f[2], score});
  }
  return run;
}

Run LoadRun(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFound("cannot open " + path.string());
  return ParseRun(in, path.string());
}

void WriteRun(const Run& run, std::ostream& out) {
  const std::string tag = run.tag.empty() ? "hybridir" : run.tag;
  char score[64];
  for (const auto& [topic, list] : run.topics) {
    for (size_t i = 0; i < list.size(); ++i) {
      std::snprintf(score, sizeof(score), "%.6f", list[i].score);
      out << topic << " Q0 " << list[i].doc_id << ' ' << (i + 1) << ' '
          << score << ' ' << tag << '\n';
    }
  }
}

void SaveRun(const Run& run, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  WriteRun(run, out);
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

Qrels ParseQrels(std::istream& in, const std::string& source) {
  Qrels qrels;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::vector<std::string> f = SplitFields(line);
    if (f.empty()) continue;
    if (f.size() != 4) {
      throw LineError(source, line_number, "expected 4 fields, got " +
                                               std::to_string(f.size()));
    }
    int grade = 0;
    if (!ParseNumber(f[3], grade) || grade < 0) {
      throw LineError(source, line_number, "bad relevance grade '" + f[3] + "'");
    }
    if (!qrels[f[0]].emplace(f[2], grade).second) {
      throw LineError(source, line_number,
                      "duplicate judgment for doc '" + f[2] + "' in topic " + f[0]);
    }
  }
  return qrels;
}

Qrels LoadQrels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFound("cannot open " + path.string());
  return ParseQrels(in, path.string());
}

void WriteQrels(const Qrels& qrels, std::ostream& out) {
  for (const auto& [topic, judgments] : qrels) {
    for (const auto& [doc, grade] : judgments) {
      out << topic << " 0 " << doc << ' ' << grade << '\n';
    }
  }
}

void SaveQrels(const Qrels& qrels, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  WriteQrels(qrels, out);
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

int CountRelevant(const Judgments& judgments) {
  int r = 0;
  for (const auto& [doc, grade] : judgments) r += grade > 0 ? 1 : 0;
  return r;
}

}  // namespace hybridir
