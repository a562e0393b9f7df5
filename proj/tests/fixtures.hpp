// Copyright 2026 The EDX Authors.
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

// Corpus builders shared by the test suites.

#ifndef EDX_TESTS_FIXTURES_HPP
#define EDX_TESTS_FIXTURES_HPP

#include <algorithm>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "edx/model.hpp"

namespace edx::testing {

// Incrementally assembles a valid corpus.
class CorpusBuilder {
 public:
  explicit CorpusBuilder(std::string name = "fixture", std::string domain = "test") {
    corpus_.name = std::move(name);
    corpus_.domain = std::move(domain);
  }

  TypeId type(const std::string &name) {
    if (const EventType *t = corpus_.find_type(name)) return t->type_id;
    TypeId id = static_cast<TypeId>(corpus_.event_types.size()) + 1;
    corpus_.event_types.push_back({id, name});
    return id;
  }

  Document &document(const std::string &doc_id, std::optional<std::string> topic = {}) {
    for (auto &d : corpus_.documents)
      if (d.doc_id == doc_id) return d;
    Document d;
    d.doc_id = doc_id;
    d.title = "Title of " + doc_id;
    d.topic = std::move(topic);
    corpus_.documents.push_back(std::move(d));
    return corpus_.documents.back();
  }

  int sentence(const std::string &doc_id, std::vector<std::string> tokens) {
    Document &d = document(doc_id);
    int idx = static_cast<int>(d.sentences.size());
    d.sentences.push_back({doc_id, idx, std::move(tokens)});
    return idx;
  }

  // label "" means negative trigger.
  void mention(const std::string &doc_id, int sent, Span span, const std::string &label) {
    TypeId id = label.empty() ? kNegative : type(label);
    Document &d = document(doc_id);
    std::string mid = doc_id + "-m" + std::to_string(d.mentions.size());
    d.mentions.push_back(make_mention(mid, d.sentences.at(static_cast<std::size_t>(sent)), span, id));
  }

  Corpus build() const { return corpus_; }

 private:
  Corpus corpus_;
};

struct GoldenRow {
  std::string trigger;
  std::string label;  // "" = negative
  int count;
};

// MAVEN training-split counts for crash, damage and storm, per event and
// negative.
inline std::vector<GoldenRow> golden_rows() {
  return {
      {"crash", "Catastrophe", 174}, {"crash", "Damaging", 4},
      {"crash", "Motion", 2},        {"crash", "Attack", 2},
      {"crash", "", 153},            {"damage", "Damaging", 619},
      {"damage", "Causation", 1},    {"damage", "Destroying", 1},
      {"damage", "Bodily Harm", 1},  {"damage", "", 275},
      {"storm", "Catastrophe", 925}, {"storm", "Attack", 14},
      {"storm", "Self Motion", 5},   {"storm", "Damaging", 1},
      {"storm", "Motion", 1},        {"storm", "Bodily Harm", 1},
      {"storm", "", 771},
  };
}

// One sentence per instance, grouped into documents of at most 50
// sentences. The trigger is capitalized in a third of the sentences to
// exercise normalization.
inline Corpus golden_corpus() {
  CorpusBuilder b("golden", "Wikipedia");
  for (const char *t : {"Catastrophe", "Damaging", "Motion", "Attack", "Causation",
                        "Destroying", "Bodily Harm", "Self Motion"})
    b.type(t);
  int n = 0;
  for (const auto &row : golden_rows()) {
    for (int i = 0; i < row.count; ++i, ++n) {
      std::string doc = "doc" + std::to_string(n / 50);
      b.document(doc, n % 7 == 0 ? std::optional<std::string>("hurricane") : std::nullopt);
      std::string word = row.trigger;
      if (n % 3 == 0) word[0] = static_cast<char>(word[0] - 'a' + 'A');
      int s = b.sentence(doc, {"The", word, "was", "reported", "."});
      b.mention(doc, s, {1, 2}, row.label);
    }
  }
  return b.build();
}

// Random valid corpus with at most `max_mentions` mentions drawn from a
// small vocabulary so that triggers collide across events.
inline Corpus random_corpus(std::mt19937 &rng, int max_mentions = 100) {
  static const std::vector<std::string> words = {"storm", "Storm", "crash", "set",  "up",
                                                 "attack", "fire", "war",  "hit",  "built"};
  static const std::vector<std::string> events = {"Attack", "Catastrophe", "Motion",
                                                  "Building", "Damaging"};
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  CorpusBuilder b("random", "test");
  int n_events = pick(1, static_cast<int>(events.size()));
  for (int i = 0; i < n_events; ++i) b.type(events[static_cast<std::size_t>(i)]);
  int target = pick(0, max_mentions);
  int mentions = 0;
  int n_docs = pick(1, 6);
  for (int d = 0; d < n_docs; ++d) {
    std::string doc = "d" + std::to_string(d);
    static const std::vector<std::optional<std::string>> topics = {
        std::nullopt, "war", "hurricane", "concert"};
    b.document(doc, topics[static_cast<std::size_t>(pick(0, 3))]);
    int n_sents = pick(1, 5);
    for (int s = 0; s < n_sents; ++s) {
      std::vector<std::string> tokens;
      int len = pick(1, 8);
      for (int t = 0; t < len; ++t) tokens.push_back(words[static_cast<std::size_t>(pick(0, 9))]);
      int idx = b.sentence(doc, tokens);
      std::set<std::tuple<int, int, std::string>> used;
      int per_sentence = pick(0, 4);
      for (int m = 0; m < per_sentence && mentions < target; ++m) {
        int start = pick(0, len - 1);
        int end = std::min(len, start + pick(1, 2));
        std::string label = pick(0, 3) == 0 ? "" : events[static_cast<std::size_t>(pick(0, n_events - 1))];
        if (!used.emplace(start, end, label).second) continue;
        b.mention(doc, idx, {start, end}, label);
        ++mentions;
      }
    }
  }
  return b.build();
}

}  // namespace edx::testing

#endif  // EDX_TESTS_FIXTURES_HPP
