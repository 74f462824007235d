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


#include "fixtures.h"

#include <unistd.h>

#include <atomic>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hybridir::testing {

namespace {

std::atomic<uint64_t> temp_counter{0};

std::string JoinWords(const std::vector<std::string>& words, size_t begin,
                      size_t end) {
  std::string out;
  for (size_t i = begin; i < end; ++i) {
    if (!out.empty()) out += ' ';
    out += words[i];
  }
  return out;
}

}  // namespace

TempDir::TempDir() {
  const auto base = std::filesystem::temp_directory_path();
  for (;;) {
    path_ = base / ("hybridir-test-" + std::to_string(::getpid()) + "-" +
                    std::to_string(temp_counter++));
    if (std::filesystem::create_directory(path_)) break;
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void WriteFile(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << contents;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::string Word(const std::string& prefix, size_t i) {
  return prefix + std::to_string(i);
}

std::vector<Document> RandomCorpus(SplitMix64& rng, size_t docs, size_t vocab,
                                   size_t max_len) {
  std::vector<Document> out;
  for (size_t d = 0; d < docs; ++d) {
    const size_t len = 1 + rng.Below(max_len);
    std::vector<std::string> words;
    for (size_t i = 0; i < len; ++i) words.push_back(Word("t", rng.Below(vocab)));
    out.push_back({Word("doc", d), "", JoinWords(words, 0, words.size()), "en"});
  }
  return out;
}

std::string RandomQuery(SplitMix64& rng, size_t vocab, size_t max_len) {
  const size_t len = 1 + rng.Below(max_len);
  std::vector<std::string> words;
  for (size_t i = 0; i < len; ++i) words.push_back(Word("t", rng.Below(vocab + 5)));
  return JoinWords(words, 0, words.size());
}

std::vector<EmbeddingVector> RandomVectors(SplitMix64& rng, size_t count,
                                           size_t dimension,
                                           const std::string& prefix) {
  std::vector<EmbeddingVector> out(count);
  for (size_t i = 0; i < count; ++i) {
    out[i].id = prefix + std::to_string(i);
    out[i].values.resize(dimension);
    for (float& v : out[i].values) v = static_cast<float>(rng.Normal());
  }
  return out;
}

ClusterCollection MakeClusterCollection(const ClusterOptions& o) {
  SplitMix64 rng(o.seed);
  ClusterCollection c;
  auto core = [&](size_t cluster, size_t i) {
    return "c" + std::to_string(cluster) + "w" + std::to_string(i);
  };
  for (size_t cl = 0; cl < o.clusters; ++cl) {
    for (size_t d = 0; d < o.docs_per_cluster; ++d) {
      std::string text;
      for (size_t s = 0; s < o.sentences; ++s) {
        std::vector<std::string> words;
        for (size_t w = 0; w < o.sentence_length; ++w) {
          if (rng.Uniform() < 0.5) {
            words.push_back(core(cl, rng.Below(o.core_words)));
          } else {
            words.push_back(Word("f", rng.Below(o.filler_words)));
          }
        }
        text += JoinWords(words, 0, words.size()) + ". ";
      }
      text.pop_back();
      const std::string id = "c" + std::to_string(cl) + "d" + std::to_string(d);
      c.docs.push_back({id, "", text, "en"});
    }
  }
  for (size_t cl = 0; cl < o.clusters; ++cl) {
    for (size_t t = 0; t < o.topics_per_cluster; ++t) {
      const std::string topic_id = std::to_string(100 + cl * o.topics_per_cluster + t);
      std::vector<std::string> words;
      for (size_t i = 0; i < o.query_core_words; ++i) {
        words.push_back(core(cl, rng.Below(o.core_words)));
      }
      std::vector<std::string> decoys;
      for (size_t k = 0; k < o.decoys; ++k) {
        decoys.push_back("x" + topic_id + "n" + std::to_string(k));
        words.push_back(decoys.back());
      }
      for (size_t p = 0; p < o.decoy_docs && !decoys.empty(); ++p) {
        size_t other = rng.Below(o.clusters - 1);
        if (other >= cl) ++other;
        Document& doc =
            c.docs[other * o.docs_per_cluster + rng.Below(o.docs_per_cluster)];
        std::string sentence;
        for (size_t r = 0; r < o.decoy_repeats; ++r) {
          sentence += " " + decoys[r % decoys.size()];
        }
        doc.text += sentence + ".";
      }
      c.topics.push_back({topic_id, JoinWords(words, 0, words.size())});
      Judgments& j = c.qrels[topic_id];
      for (size_t d = 0; d < o.docs_per_cluster; ++d) {
        j["c" + std::to_string(cl) + "d" + std::to_string(d)] = 1 + (d % 3 == 0);
      }
      for (size_t d = 0; d < 20; ++d) {
        size_t other = rng.Below(o.clusters - 1);
        if (other >= cl) ++other;
        j["c" + std::to_string(other) + "d" + std::to_string(rng.Below(o.docs_per_cluster))] = 0;
      }
    }
  }
  return c;
}

std::vector<Document> MakeWikiCorpus(const WikiOptions& o) {
  SplitMix64 rng(o.seed);
  std::vector<Document> articles;
  for (size_t a = 0; a < o.articles; ++a) {
    std::vector<std::string> body;
    for (size_t i = 0; i < o.body_tokens; ++i) {
      // Zipf-ish: half the draws come from a small head vocabulary.
      const size_t v = rng.Uniform() < 0.5 ? rng.Below(50) : rng.Below(o.vocabulary);
      body.push_back(Word("v", v));
    }
    std::string title;
    if (a + o.orphans >= o.articles) {
      title = "Orphan" + std::to_string(a) + " Qz" + std::to_string(a);
    } else {
      const size_t n = 1 + rng.Below(3);
      std::vector<std::string> picked;
      for (size_t i = 0; i < n; ++i) picked.push_back(body[rng.Below(body.size())]);
      title = JoinWords(picked, 0, picked.size());
      if (a % 97 == 0) title += " (disambiguation)";
    }
    std::string text;
    for (size_t s = 0; s < body.size(); s += 8) {
      text += JoinWords(body, s, std::min(body.size(), s + 8)) + ". ";
    }
    text.pop_back();
    articles.push_back({"a" + std::to_string(a), title, text, "en"});
  }
  return articles;
}

bool IsOrphanTitle(const std::string& title) { return title.rfind("Orphan", 0) == 0; }

}  // namespace hybridir::testing
