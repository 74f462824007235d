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

#ifndef HYBRIDIR_RUN_H_
#define HYBRIDIR_RUN_H_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "hybridir/sparse_index.h"

namespace hybridir {

struct RunEntry {
  std::string doc_id;
  double score = 0.0;

  bool operator==(const RunEntry&) const = default;
};

using RankedList = std::vector<RunEntry>;

// Per-topic ranked lists in rank order. Topics are kept sorted by id so files
// are written in a stable order.
struct Run {
  std::string tag;
  std::map<std::string, RankedList> topics;

  bool operator==(const Run&) const = default;
};

// topic -> doc -> grade (>= 0; > 0 is relevant).
using Judgments = std::map<std::string, int>;
using Qrels = std::map<std::string, Judgments>;

RankedList ToRankedList(const std::vector<ScoredHit>& hits);

// TREC run lines: "topic Q0 doc rank score tag", score with 6 decimals.
// Parsing keeps file order within each topic; the tag is taken from the
// first line. Malformed lines and duplicate (topic, doc) pairs throw
// FormatError with the line number.
Run ParseRun(std::istream& in, const std::string& source = "run");
Run LoadRun(const std::filesystem::path& path);
void WriteRun(const Run& run, std::ostream& out);
void SaveRun(const Run& run, const std::filesystem::path& path);

// TREC qrels lines: "topic iteration doc grade".
Qrels ParseQrels(std::istream& in, const std::string& source = "qrels");
Qrels LoadQrels(const std::filesystem::path& path);
void WriteQrels(const Qrels& qrels, std::ostream& out);
void SaveQrels(const Qrels& qrels, const std::filesystem::path& path);

// Number of judged-relevant documents.
int CountRelevant(const Judgments& judgments);

}  // namespace hybridir

#endif  // HYBRIDIR_RUN_H_
