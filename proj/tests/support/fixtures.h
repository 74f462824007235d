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


#ifndef HYBRIDIR_TESTS_SUPPORT_FIXTURES_H_
#define HYBRIDIR_TESTS_SUPPORT_FIXTURES_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hybridir/corpus.h"
#include "hybridir/embedding.h"
#include "hybridir/random.h"
#include "hybridir/run.h"

namespace hybridir::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, const std::string& contents);

// Word "w<i>" style tokens that never collide across generators.
std::string Word(const std::string& prefix, size_t i);

// Documents of 1..max_len tokens drawn uniformly from a vocabulary of
// `vocab` words.
std::vector<Document> RandomCorpus(SplitMix64& rng, size_t docs, size_t vocab,
                                   size_t max_len);
std::string RandomQuery(SplitMix64& rng, size_t vocab, size_t max_len);

std::vector<EmbeddingVector> RandomVectors(SplitMix64& rng, size_t count,
                                           size_t dimension,
                                           const std::string& prefix);

// Topical collection: each cluster owns a core vocabulary; documents mix
// core words with shared filler words; topics pair cluster core words with
// rare decoy words planted in a few documents of other clusters.
struct ClusterCollection {
  std::vector<Document> docs;
  std::vector<Topic> topics;
  Qrels qrels;
};

struct ClusterOptions {
  size_t clusters = 20;
  size_t docs_per_cluster = 100;
  size_t topics_per_cluster = 2;
  size_t core_words = 15;
  size_t filler_words = 400;
  size_t sentences = 8;
  size_t sentence_length = 10;
  // Core words per query.
  size_t query_core_words = 2;
  // Decoy words per topic, the off-cluster documents they are planted in
  // and how often each is repeated there.
  size_t decoys = 2;
  size_t decoy_docs = 10;
  size_t decoy_repeats = 2;
  uint64_t seed = 7;
};

ClusterCollection MakeClusterCollection(const ClusterOptions& options = {});

// Wikipedia-style articles whose titles are drawn from their own body. The
// last `orphans` articles get titles made of words that occur in no body.
struct WikiOptions {
  size_t articles = 1000;
  size_t orphans = 50;
  size_t vocabulary = 3000;
  size_t body_tokens = 40;
  uint64_t seed = 11;
};

std::vector<Document> MakeWikiCorpus(const WikiOptions& options = {});
bool IsOrphanTitle(const std::string& title);

}  // namespace hybridir::testing

#endif  // HYBRIDIR_TESTS_SUPPORT_FIXTURES_H_
