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

#ifndef HYBRIDIR_CORPUS_H_
#define HYBRIDIR_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace hybridir {

struct Document {
  std::string doc_id;
  std::string title;
  std::string text;
  std::string language;

  bool operator==(const Document&) const = default;
};

// A window of consecutive sentences from one document. segment_id is
// "<doc_id>#<start_sentence>".
struct Segment {
  std::string segment_id;
  std::string parent_doc_id;
  size_t start_sentence = 0;
  std::string text;

  bool operator==(const Segment&) const = default;
};

// segment_id -> parent doc_id.
using ParentMap = std::map<std::string, std::string>;

struct Topic {
  std::string topic_id;
  std::string text;

  bool operator==(const Topic&) const = default;
};

enum class MalformedPolicy { kAbort, kSkipAndWarn };

struct CorpusLoadOptions {
  MalformedPolicy on_malformed = MalformedPolicy::kAbort;
};

struct LoadReport {
  size_t count = 0;
  std::vector<std::string> warnings;
};

// Reads line-delimited JSON records {"id", "title", "text", "language"}.
// Blank lines are ignored. A record without id or with blank text is
// malformed; what happens then is set by `options`. Duplicate ids always
// abort.
std::vector<Document> ParseCorpus(std::istream& in,
                                  const CorpusLoadOptions& options = {},
                                  LoadReport* report = nullptr);
std::vector<Document> LoadCorpus(const std::filesystem::path& path,
                                  const CorpusLoadOptions& options = {},
                                  LoadReport* report = nullptr);
void WriteCorpus(const std::vector<Document>& docs,
                 const std::filesystem::path& path);

// Converts TREC <DOC> markup. Title comes from <HEADLINE>, <TITLE> or <HEAD>;
// body from every <TEXT> block.
std::vector<Document> ImportTrecDocuments(std::istream& in,
                                          std::string_view language);

// Topics are either line-delimited JSON {"id", "text"} or TREC/NTCIR topic
// markup (<num>, <title>); the format is sniffed from the first non-blank
// character.
std::vector<Topic> ParseTopics(std::istream& in);
std::vector<Topic> LoadTopics(const std::filesystem::path& path);
void WriteTopics(const std::vector<Topic>& topics,
                 const std::filesystem::path& path);

// Terminator-based sentence splitter. Never returns empty sentences; text
// without a terminator is one sentence.
std::vector<std::string> SplitSentences(std::string_view text,
                                        std::string_view language);

struct SegmentOptions {
  int window = 5;
  int stride = 1;
};

std::vector<Segment> SegmentDocument(const Document& doc,
                                     const SegmentOptions& options = {});

// Number of windows for `sentences` sentences.
size_t SegmentCount(size_t sentences, size_t window, size_t stride);

// The text that goes into the sparse index for `doc`.
std::string IndexableText(const Document& doc, bool include_title);

}  // namespace hybridir

#endif  // HYBRIDIR_CORPUS_H_
