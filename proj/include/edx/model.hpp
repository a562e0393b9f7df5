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

// Unified span-annotated corpus model shared by every other component.
//
// A corpus is a list of documents; each document owns its tokenized
// sentences and the trigger mentions annotated over them. Spans are
// half-open token intervals. A mention labeled kNegative is an explicitly
// annotated candidate trigger that evokes no event.

#ifndef EDX_MODEL_HPP
#define EDX_MODEL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "edx/error.hpp"

namespace edx {

using TypeId = std::int32_t;

// Reserved label for negative triggers. Never declared in Corpus::event_types.
inline constexpr TypeId kNegative = 0;
inline constexpr std::string_view kNegativeName = "Negative Trigger";
// Spelling of the negative label in file formats and query parameters.
inline constexpr std::string_view kNegativeTag = "NEGATIVE";

struct EventType {
  TypeId type_id = 0;
  std::string name;

  friend bool operator==(const EventType &, const EventType &) = default;
};

struct Span {
  int start = 0;
  int end = 0;

  int width() const { return end - start; }

  friend bool operator==(const Span &, const Span &) = default;
  friend auto operator<=>(const Span &, const Span &) = default;
};

struct Sentence {
  std::string doc_id;
  int sent_idx = 0;
  std::vector<std::string> tokens;

  friend bool operator==(const Sentence &, const Sentence &) = default;
};

struct Mention {
  std::string mention_id;
  std::string doc_id;
  int sent_idx = 0;
  Span span;
  std::string surface;
  std::string normalized;
  TypeId label = kNegative;

  bool negative() const { return label == kNegative; }

  friend bool operator==(const Mention &, const Mention &) = default;
};

struct Document {
  std::string doc_id;
  std::string title;
  std::optional<std::string> topic;
  std::vector<Sentence> sentences;
  std::vector<Mention> mentions;

  friend bool operator==(const Document &, const Document &) = default;
};

struct Corpus {
  std::string name;
  std::string domain;
  std::vector<EventType> event_types;
  std::vector<Document> documents;

  const EventType *find_type(TypeId id) const {
    for (const auto &t : event_types)
      if (t.type_id == id) return &t;
    return nullptr;
  }

  const EventType *find_type(std::string_view name) const {
    for (const auto &t : event_types)
      if (t.name == name) return &t;
    return nullptr;
  }

  const Document *find_document(std::string_view doc_id) const {
    for (const auto &d : documents)
      if (d.doc_id == doc_id) return &d;
    return nullptr;
  }

  // Display name for a mention label; kNegative maps to kNegativeName.
  std::string label_name(TypeId id) const {
    if (id == kNegative) return std::string(kNegativeName);
    const EventType *t = find_type(id);
    return t ? t->name : "#" + std::to_string(id);
  }

  std::size_t mention_count() const {
    std::size_t n = 0;
    for (const auto &d : documents) n += d.mentions.size();
    return n;
  }

  friend bool operator==(const Corpus &, const Corpus &) = default;
};

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

inline char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

// Trigger identity: ASCII case fold plus whitespace-run collapse. No
// stemming, so "buildings" and "building" stay distinct triggers.
inline std::string normalize_trigger(std::string_view surface) {
  std::string out;
  out.reserve(surface.size());
  bool pending_space = false;
  for (char c : surface) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(ascii_lower(c));
  }
  if (out.empty()) throw_invalid("normalize_trigger: empty trigger surface");
  return out;
}

inline std::string join_tokens(const std::vector<std::string> &tokens,
                               Span span) {
  std::string out;
  for (int i = span.start; i < span.end; ++i) {
    if (i > span.start) out.push_back(' ');
    out += tokens[static_cast<std::size_t>(i)];
  }
  return out;
}

// Builds a mention whose surface and normalized form are derived from the
// sentence tokens. The span must already be in range.
inline Mention make_mention(std::string mention_id, const Sentence &sentence,
                            Span span, TypeId label) {
  Mention m;
  m.mention_id = std::move(mention_id);
  m.doc_id = sentence.doc_id;
  m.sent_idx = sentence.sent_idx;
  m.span = span;
  m.surface = join_tokens(sentence.tokens, span);
  m.normalized = normalize_trigger(m.surface);
  m.label = label;
  return m;
}

struct Violation {
  std::string doc_id;
  std::string mention_id;
  std::string message;

  friend bool operator==(const Violation &, const Violation &) = default;
};

using ValidationReport = std::vector<Violation>;

inline void validate_document(const Corpus &corpus, const Document &doc,
                              ValidationReport &out) {
  auto add = [&](std::string mention_id, std::string message) {
    out.push_back({doc.doc_id, std::move(mention_id), std::move(message)});
  };

  if (doc.doc_id.empty()) add("", "empty doc_id");
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    const Sentence &s = doc.sentences[i];
    if (s.doc_id != doc.doc_id) add("", "sentence doc_id mismatch");
    if (s.sent_idx != static_cast<int>(i))
      add("", "sent_idx not contiguous at " + std::to_string(i));
    if (s.tokens.empty())
      add("", "empty sentence " + std::to_string(s.sent_idx));
    for (const auto &tok : s.tokens) {
      bool bad = tok.empty();
      for (char c : tok) bad = bad || is_space(c);
      if (bad) {
        add("", "empty or whitespace token in sentence " +
                    std::to_string(s.sent_idx));
        break;
      }
    }
  }

  std::set<std::string> mention_ids;
  std::set<std::tuple<int, Span, TypeId>> keys;
  for (const Mention &m : doc.mentions) {
    if (m.mention_id.empty()) add("", "empty mention_id");
    if (!mention_ids.insert(m.mention_id).second)
      add(m.mention_id, "duplicate mention_id");
    if (m.doc_id != doc.doc_id) add(m.mention_id, "mention doc_id mismatch");
    if (m.label != kNegative && !corpus.find_type(m.label))
      add(m.mention_id, "unknown event type " + std::to_string(m.label));
    if (m.span.start >= m.span.end) {
      add(m.mention_id, "span start >= end");
      continue;
    }
    if (m.sent_idx < 0 ||
        m.sent_idx >= static_cast<int>(doc.sentences.size())) {
      add(m.mention_id, "unknown sentence " + std::to_string(m.sent_idx));
      continue;
    }
    const Sentence &s = doc.sentences[static_cast<std::size_t>(m.sent_idx)];
    if (m.span.start < 0 || m.span.end > static_cast<int>(s.tokens.size())) {
      add(m.mention_id, "span out of sentence bounds");
      continue;
    }
    if (m.surface != join_tokens(s.tokens, m.span))
      add(m.mention_id, "surface does not match sentence tokens");
    else if (m.normalized != normalize_trigger(m.surface))
      add(m.mention_id, "normalized form does not match surface");
    if (!keys.emplace(m.sent_idx, m.span, m.label).second)
      add(m.mention_id, "duplicate (span, label) in sentence");
  }
}

// Reports every invariant violation; an empty report means the corpus is
// safe to index.
inline ValidationReport validate(const Corpus &corpus) {
  ValidationReport out;
  std::set<TypeId> ids;
  std::set<std::string> names;
  for (const auto &t : corpus.event_types) {
    if (t.type_id < 1)
      out.push_back({"", "", "event type id must be >= 1: " + t.name});
    if (!ids.insert(t.type_id).second)
      out.push_back(
          {"", "", "duplicate event type id " + std::to_string(t.type_id)});
    if (t.name.empty()) out.push_back({"", "", "empty event type name"});
    if (!names.insert(t.name).second)
      out.push_back({"", "", "duplicate event type name " + t.name});
    if (t.name == kNegativeName || t.name == kNegativeTag)
      out.push_back({"", "", "reserved event type name " + t.name});
  }
  std::set<std::string> doc_ids;
  for (const auto &doc : corpus.documents) {
    if (!doc_ids.insert(doc.doc_id).second)
      out.push_back({doc.doc_id, "", "duplicate doc_id"});
    validate_document(corpus, doc, out);
  }
  return out;
}

inline void require_valid(const Corpus &corpus) {
  ValidationReport report = validate(corpus);
  if (report.empty()) return;
  const Violation &v = report.front();
  throw_invalid("invalid corpus (" + std::to_string(report.size()) +
                " violations), first: " + v.message + " [doc " + v.doc_id +
                (v.mention_id.empty() ? "" : ", mention " + v.mention_id) +
                "]");
}

}  // namespace edx

#endif  // EDX_MODEL_HPP
