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

#include "hybridir/corpus.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "hybridir/error.h"
#include "hybridir/text.h"

namespace hybridir {

namespace {

using nlohmann::json;

std::ifstream OpenInput(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("cannot open " + path.string());
  return in;
}

std::ofstream OpenOutput(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

bool IsBlank(std::string_view line) {
  return line.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

std::string StringField(const json& record, const char* key, bool required) {
  auto it = record.find(key);
  if (it == record.end() || it->is_null()) {
    if (required) throw FormatError(std::string("missing field '") + key + "'");
    return {};
  }
  if (!it->is_string()) {
    throw FormatError(std::string("field '") + key + "' is not a string");
  }
  return it->get<std::string>();
}

Document ParseCorpusRecord(const std::string& line) {
  json record;
  try {
    record = json::parse(line);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
  if (!record.is_object()) throw FormatError("record is not an object");
  Document doc;
  doc.doc_id = StringField(record, "id", true);
  doc.title = StringField(record, "title", false);
  doc.text = StringField(record, "text", true);
  doc.language = StringField(record, "language", false);
  if (doc.doc_id.empty()) throw FormatError("empty id");
  if (text::NormalizeWhitespace(doc.text).empty()) {
    throw FormatError("blank text");
  }
  if (doc.language.empty()) doc.language = "und";
  return doc;
}

std::string ToLowerAscii(std::string s) {
  for (char& c : s) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return s;
}

// Strips every <...> tag from `s`.
std::string StripTags(std::string_view s) {
  std::string out;
  bool in_tag = false;
  for (char c : s) {
    if (c == '<') {
      in_tag = true;
      out.push_back(' ');
    } else if (c == '>') {
      in_tag = false;
    } else if (!in_tag) {
      out.push_back(c);
    }
  }
  return out;
}

// Content of every <tag>...</tag> block in `block` (case-insensitive), joined
// by spaces. `lower` is `block` lowercased.
std::string TagContents(std::string_view block, std::string_view lower,
                        std::string_view tag) {
  const std::string open = "<" + std::string(tag) + ">";
  const std::string close = "</" + std::string(tag) + ">";
  std::string out;
  size_t pos = 0;
  while ((pos = lower.find(open, pos)) != std::string_view::npos) {
    const size_t start = pos + open.size();
    size_t end = lower.find(close, start);
    if (end == std::string_view::npos) end = lower.size();
    if (!out.empty()) out.push_back(' ');
    out += StripTags(block.substr(start, end - start));
    pos = end;
  }
  return text::NormalizeWhitespace(out);
}

// Value of an unclosed topic field: text after `<tag>` up to the next tag.
std::string OpenTagValue(std::string_view block, std::string_view lower,
                         std::string_view tag) {
  const std::string open = "<" + std::string(tag) + ">";
  const size_t pos = lower.find(open);
  if (pos == std::string_view::npos) return {};
  const size_t start = pos + open.size();
  size_t end = lower.find('<', start);
  if (end == std::string_view::npos) end = lower.size();
  return text::NormalizeWhitespace(block.substr(start, end - start));
}

std::string DropPrefix(std::string value, std::string_view prefix) {
  if (ToLowerAscii(value.substr(0, prefix.size())) == prefix) {
    value = text::NormalizeWhitespace(value.substr(prefix.size()));
  }
  return value;
}

bool IsTerminator(char32_t cp) {
  switch (cp) {
    case U'.':
    case U'!':
    case U'?':
    case U'。':
    case U'！':
    case U'？':
    case U'؟':
    case U'।':
    case U'॥':
      return true;
    default:
      return false;
  }
}

// Fullwidth terminators end a sentence even without following whitespace,
// since CJK text does not separate sentences with spaces.
bool IsFullwidthTerminator(char32_t cp) {
  return cp == U'。' || cp == U'！' || cp == U'？';
}

bool IsCloser(char32_t cp) {
  switch (cp) {
    case U'"':
    case U'\'':
    case U')':
    case U']':
    case U'’':
    case U'”':
    case U'」':
    case U'』':
    case U'）':
      return true;
    default:
      return false;
  }
}

}  // namespace

std::vector<Document> ParseCorpus(std::istream& in,
                                  const CorpusLoadOptions& options,
                                  LoadReport* report) {
  std::vector<Document> docs;
  std::unordered_set<std::string> seen;
  LoadReport local;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (IsBlank(line)) continue;
    Document doc;
    try {
      doc = ParseCorpusRecord(line);
    } catch (const Error& e) {
      const std::string message =
          "line " + std::to_string(line_number) + ": " + e.what();
      if (options.on_malformed == MalformedPolicy::kAbort) {
        throw FormatError(message);
      }
      local.warnings.push_back(message);
      continue;
    }
    if (!seen.insert(doc.doc_id).second) {
      throw FormatError("line " + std::to_string(line_number) +
                        ": duplicate doc id '" + doc.doc_id + "'");
    }
    docs.push_back(std::move(doc));
  }
  local.count = docs.size();
  if (report != nullptr) *report = std::move(local);
  return docs;
}

std::vector<Document> LoadCorpus(const std::filesystem::path& path,
                                 const CorpusLoadOptions& options,
                                 LoadReport* report) {
  auto in = OpenInput(path);
  try {
    return ParseCorpus(in, options, report);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void WriteCorpus(const std::vector<Document>& docs,
                 const std::filesystem::path& path) {
  auto out = OpenOutput(path);
  for (const Document& doc : docs) {
    nlohmann::ordered_json record;
    record["id"] = doc.doc_id;
    record["title"] = doc.title;
    record["text"] = doc.text;
    record["language"] = doc.language;
    out << record.dump() << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<Document> ImportTrecDocuments(std::istream& in,
                                          std::string_view language) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string all = buffer.str();
  const std::string lower = ToLowerAscii(all);
  std::vector<Document> docs;
  size_t pos = 0;
  while ((pos = lower.find("<doc>", pos)) != std::string::npos) {
    size_t end = lower.find("</doc>", pos);
    if (end == std::string::npos) throw FormatError("unterminated <DOC>");
    std::string_view block(all.data() + pos, end - pos);
    std::string_view lblock(lower.data() + pos, end - pos);
    Document doc;
    doc.doc_id = TagContents(block, lblock, "docno");
    if (doc.doc_id.empty()) throw FormatError("<DOC> without <DOCNO>");
    for (const char* tag : {"headline", "title", "head"}) {
      doc.title = TagContents(block, lblock, tag);
      if (!doc.title.empty()) break;
    }
    doc.text = TagContents(block, lblock, "text");
    doc.language = std::string(language);
    if (!doc.text.empty()) docs.push_back(std::move(doc));
    pos = end + 6;
  }
  return docs;
}

std::vector<Topic> ParseTopics(std::istream& in) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string all = buffer.str();
  const size_t first = all.find_first_not_of(" \t\r\n");
  std::vector<Topic> topics;
  std::unordered_set<std::string> seen;
  auto add = [&](Topic topic, const std::string& where) {
    if (topic.topic_id.empty()) throw FormatError(where + ": empty topic id");
    if (!seen.insert(topic.topic_id).second) {
      throw FormatError(where + ": duplicate topic id '" + topic.topic_id +
                        "'");
    }
    topics.push_back(std::move(topic));
  };
  if (first == std::string::npos) return topics;

  if (all[first] == '<') {
    const std::string lower = ToLowerAscii(all);
    // Each topic starts at a <num> tag and runs to the next one.
    std::vector<size_t> starts;
    for (size_t pos = lower.find("<num>"); pos != std::string::npos;
         pos = lower.find("<num>", pos + 1)) {
      starts.push_back(pos);
    }
    for (size_t i = 0; i < starts.size(); ++i) {
      const size_t end = i + 1 < starts.size() ? starts[i + 1] : all.size();
      std::string_view block(all.data() + starts[i], end - starts[i]);
      std::string_view lblock(lower.data() + starts[i], end - starts[i]);
      Topic topic;
      topic.topic_id = DropPrefix(OpenTagValue(block, lblock, "num"), "number:");
      topic.text = DropPrefix(OpenTagValue(block, lblock, "title"), "topic:");
      add(std::move(topic), "topic " + std::to_string(i + 1));
    }
    return topics;
  }

  std::istringstream lines(all);
  std::string line;
  size_t line_number = 0;
  while (std::getline(lines, line)) {
    ++line_number;
    if (IsBlank(line)) continue;
    const std::string where = "line " + std::to_string(line_number);
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw FormatError(where + ": invalid JSON: " + e.what());
    }
    if (!record.is_object()) throw FormatError(where + ": not an object");
    Topic topic;
    try {
      topic.topic_id = StringField(record, "id", true);
      topic.text = record.contains("text") ? StringField(record, "text", true)
                                           : StringField(record, "title", true);
    } catch (const Error& e) {
      throw FormatError(where + ": " + e.what());
    }
    add(std::move(topic), where);
  }
  return topics;
}

std::vector<Topic> LoadTopics(const std::filesystem::path& path) {
  auto in = OpenInput(path);
  try {
    return ParseTopics(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void WriteTopics(const std::vector<Topic>& topics,
                 const std::filesystem::path& path) {
  auto out = OpenOutput(path);
  for (const Topic& topic : topics) {
    nlohmann::ordered_json record;
    record["id"] = topic.topic_id;
    record["text"] = topic.text;
    out << record.dump() << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<std::string> SplitSentences(std::string_view input,
                                        std::string_view /*language*/) {
  const std::u32string cps = text::DecodeUtf8(input);
  std::vector<std::string> sentences;
  size_t begin = 0;
  auto cut = [&](size_t end) {
    std::string sentence = text::NormalizeWhitespace(
        text::EncodeUtf8(std::u32string_view(cps).substr(begin, end - begin)));
    if (!sentence.empty()) sentences.push_back(std::move(sentence));
    begin = end;
  };
  size_t i = 0;
  while (i < cps.size()) {
    if (!IsTerminator(cps[i])) {
      ++i;
      continue;
    }
    bool fullwidth = false;
    while (i < cps.size() && IsTerminator(cps[i])) {
      fullwidth = fullwidth || IsFullwidthTerminator(cps[i]);
      ++i;
    }
    while (i < cps.size() && IsCloser(cps[i])) ++i;
    if (fullwidth || i == cps.size() || text::IsWhitespace(cps[i])) cut(i);
  }
  cut(cps.size());
  return sentences;
}

size_t SegmentCount(size_t sentences, size_t window, size_t stride) {
  if (sentences <= window) return 1;
  return (sentences - window) / stride + 1;
}

std::vector<Segment> SegmentDocument(const Document& doc,
                                     const SegmentOptions& options) {
  if (options.window < 1 || options.stride < 1) {
    throw InvalidArgument("segment window and stride must be >= 1");
  }
  const std::vector<std::string> sentences =
      SplitSentences(doc.text, doc.language);
  if (sentences.empty()) {
    throw InvalidArgument("document '" + doc.doc_id + "' has no sentences");
  }
  const auto window = static_cast<size_t>(options.window);
  const auto stride = static_cast<size_t>(options.stride);
  const size_t count = SegmentCount(sentences.size(), window, stride);
  std::vector<Segment> segments;
  segments.reserve(count);
  for (size_t s = 0; s < count; ++s) {
    const size_t start = s * stride;
    const size_t end = std::min(start + window, sentences.size());
    Segment seg;
    seg.parent_doc_id = doc.doc_id;
    seg.start_sentence = start;
    seg.segment_id = doc.doc_id + "#" + std::to_string(start);
    for (size_t k = start; k < end; ++k) {
      if (k > start) seg.text.push_back(' ');
      seg.text += sentences[k];
    }
    segments.push_back(std::move(seg));
  }
  return segments;
}

std::string IndexableText(const Document& doc, bool include_title) {
  if (!include_title || doc.title.empty()) return doc.text;
  return doc.title + "\n" + doc.text;
}

}  // namespace hybridir
