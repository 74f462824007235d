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

#ifndef HYBRIDIR_APP_CONFIG_H_
#define HYBRIDIR_APP_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hybridir/corpus.h"
#include "hybridir/fusion.h"
#include "hybridir/rm3.h"
#include "hybridir/sparse_index.h"
#include "hybridir/weaksup.h"

namespace hybridir::app {

// Flat "section.key = value" settings. A "[section]" line prefixes the keys
// that follow it; '#' starts a comment.
class KeyValueConfig {
 public:
  static KeyValueConfig Parse(std::istream& in, const std::string& source);
  static KeyValueConfig Load(const std::filesystem::path& path);

  void Set(const std::string& key, const std::string& value) {
    entries_[key] = value;
  }
  std::optional<std::string> Get(const std::string& key) const;
  const std::map<std::string, std::string>& entries() const { return entries_; }

  // One "key = value" line per entry, keys sorted.
  std::string ToText() const;

 private:
  std::map<std::string, std::string> entries_;
};

struct ExperimentConfig {
  std::filesystem::path corpus;
  std::filesystem::path topics;
  std::filesystem::path qrels;
  std::filesystem::path output_dir;
  // Optional externally produced vectors; the hashing encoder otherwise.
  std::filesystem::path query_vectors;
  std::filesystem::path passage_vectors;

  IndexOptions index;
  SegmentOptions segments;
  Bm25Params bm25;
  int sparse_k = 1000;
  Rm3Params rm3;
  int dense_k = 100;
  int aggregate_m = 3;
  int encoder_buckets = 256;
  FusionConfig fusion;
  // Which term-matching run to fuse: "auto" (higher P@20), "bm25", "bm25rm3".
  std::string fusion_sparse = "auto";
  int sig_iterations = 100000;
  SynthesisConfig synthesis;
  uint64_t seed = 0;
  int threads = 1;

  // Unknown keys and unparsable values throw InvalidArgument.
  static ExperimentConfig FromKeyValues(const KeyValueConfig& kv);
  KeyValueConfig ToKeyValues() const;

  // Throws NotFound for the first referenced input that does not exist.
  void ValidateInputs() const;
  // Throws InvalidArgument for out-of-range settings.
  void Validate() const;
};

}  // namespace hybridir::app

#endif  // HYBRIDIR_APP_CONFIG_H_
