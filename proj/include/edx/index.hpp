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

// Inverted indices over a corpus: normalized trigger -> per-label counts and
// instance references, and event -> trigger distribution. Both are built
// once and never mutated, so queries are safe under concurrent readers.

#ifndef EDX_INDEX_HPP
#define EDX_INDEX_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "edx/error.hpp"
#include "edx/model.hpp"

namespace edx {

using Count = std::int64_t;

struct InstanceRef {
  std::string doc_id;
  int sent_idx = 0;
  int start = 0;
  std::string mention_id;
  TypeId label = kNegative;

  friend bool operator==(const InstanceRef &, const InstanceRef &) = default;
};

// Instance order everywhere: (doc_id, sent_idx, start), then mention_id.
inline bool instance_less(const InstanceRef &a, const InstanceRef &b) {
  return std::tie(a.doc_id, a.sent_idx, a.start, a.mention_id, a.label) <
         std::tie(b.doc_id, b.sent_idx, b.start, b.mention_id, b.label);
}

struct TriggerEntry {
  std::string normalized;
  std::map<TypeId, Count> per_event_counts;  // positive labels only, no zeros
  Count negative_count = 0;
  std::map<TypeId, std::vector<InstanceRef>> instance_refs;  // incl. kNegative

  Count positive_total() const {
    Count n = 0;
    for (const auto &[id, c] : per_event_counts) n += c;
    return n;
  }
  Count total() const { return positive_total() + negative_count; }

  friend bool operator==(const TriggerEntry &, const TriggerEntry &) = default;
};

struct EventEntry {
  EventType event;
  Count mention_count = 0;
  std::map<std::string, Count> trigger_counts;
  std::vector<InstanceRef> instance_refs;

  friend bool operator==(const EventEntry &, const EventEntry &) = default;
};

struct IndexTotals {
  Count candidate_triggers = 0;
  Count positive_triggers = 0;
  Count annotated_instances = 0;
  Count negative_instances = 0;

  friend bool operator==(const IndexTotals &, const IndexTotals &) = default;
};

class TriggerIndex {
 public:
  std::string corpus_name;
  std::vector<EventType> event_types;
  std::map<std::string, TriggerEntry> by_trigger;
  std::map<TypeId, EventEntry> by_event;
  IndexTotals totals;

  const TriggerEntry &trigger(std::string_view normalized) const {
    auto it = by_trigger.find(std::string(normalized));
    if (it == by_trigger.end())
      throw_not_found("unknown trigger: " + std::string(normalized));
    return it->second;
  }

  const EventEntry &event(TypeId id) const {
    auto it = by_event.find(id);
    if (it == by_event.end())
      throw_not_found("unknown event type id: " + std::to_string(id));
    return it->second;
  }

  const EventEntry &event(std::string_view name) const {
    return event(event_id(name));
  }

  TypeId event_id(std::string_view name) const {
    for (const auto &t : event_types)
      if (t.name == name) return t.type_id;
    throw_not_found("unknown event type: " + std::string(name));
  }

  // Accepts an event name or the negative label ("NEGATIVE" or its
  // display name).
  TypeId label_id(std::string_view name) const {
    if (name == kNegativeTag || name == kNegativeName) return kNegative;
    return event_id(name);
  }

  std::string label_name(TypeId id) const {
    if (id == kNegative) return std::string(kNegativeName);
    for (const auto &t : event_types)
      if (t.type_id == id) return t.name;
    throw_not_found("unknown event type id: " + std::to_string(id));
  }

  bool empty() const { return by_trigger.empty(); }

  friend bool operator==(const TriggerIndex &, const TriggerIndex &) = default;
};

inline TriggerIndex build_index(const Corpus &corpus) {
  require_valid(corpus);
  TriggerIndex index;
  index.corpus_name = corpus.name;
  index.event_types = corpus.event_types;
  std::sort(index.event_types.begin(), index.event_types.end(),
            [](const auto &a, const auto &b) { return a.type_id < b.type_id; });
  for (const auto &t : index.event_types) index.by_event[t.type_id].event = t;

  for (const auto &doc : corpus.documents) {
    for (const auto &m : doc.mentions) {
      InstanceRef ref{m.doc_id, m.sent_idx, m.span.start, m.mention_id, m.label};
      TriggerEntry &entry = index.by_trigger[m.normalized];
      entry.normalized = m.normalized;
      entry.instance_refs[m.label].push_back(ref);
      if (m.negative()) {
        ++entry.negative_count;
        ++index.totals.negative_instances;
        continue;
      }
      ++entry.per_event_counts[m.label];
      EventEntry &ev = index.by_event[m.label];
      ++ev.mention_count;
      ++ev.trigger_counts[m.normalized];
      ev.instance_refs.push_back(std::move(ref));
      ++index.totals.annotated_instances;
    }
  }

  for (auto &[word, entry] : index.by_trigger) {
    for (auto &[label, refs] : entry.instance_refs)
      std::sort(refs.begin(), refs.end(), instance_less);
    if (!entry.per_event_counts.empty()) ++index.totals.positive_triggers;
  }
  for (auto &[id, ev] : index.by_event)
    std::sort(ev.instance_refs.begin(), ev.instance_refs.end(), instance_less);
  index.totals.candidate_triggers = static_cast<Count>(index.by_trigger.size());
  return index;
}

using TriggerCount = std::pair<std::string, Count>;

// Descending count, ties by ascending trigger. limit must be >= 1.
inline std::vector<TriggerCount> top_triggers(const TriggerIndex &index,
                                              std::string_view event,
                                              Count limit = 10) {
  if (limit < 1) throw_invalid("limit must be >= 1");
  const EventEntry &entry = index.event(event);
  std::vector<TriggerCount> out(entry.trigger_counts.begin(),
                                entry.trigger_counts.end());
  std::stable_sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
    return a.second > b.second;  // map order already gives the tie-break
  });
  if (static_cast<Count>(out.size()) > limit)
    out.resize(static_cast<std::size_t>(limit));
  return out;
}

enum class SpanKind { kPositive, kNegative };

inline std::string_view span_kind_name(SpanKind kind) {
  return kind == SpanKind::kPositive ? "positive" : "negative";
}

struct RenderedSpan {
  Span interval;
  std::string mention_id;
  std::string trigger;
  TypeId label = kNegative;
  std::string label_name;
  SpanKind kind = SpanKind::kNegative;
  bool is_focus = false;

  friend bool operator==(const RenderedSpan &, const RenderedSpan &) = default;
};

struct RenderedInstance {
  std::string doc_id;
  int sent_idx = 0;
  std::string focus_mention_id;
  std::vector<std::string> tokens;
  std::vector<RenderedSpan> spans;

  friend bool operator==(const RenderedInstance &, const RenderedInstance &) =
      default;
};

template <typename T>
struct Page {
  Count total = 0;
  Count page = 1;
  Count page_size = 20;
  std::vector<T> items;
};

inline constexpr Count kMaxPageSize = 200;

inline void check_page(Count page, Count page_size) {
  if (page < 1) throw_invalid("page must be >= 1");
  if (page_size < 1 || page_size > kMaxPageSize)
    throw_invalid("page size must be in [1, 200]");
}

// Returns the [first, last) slice of `total` items covered by a page; an
// out-of-range page yields an empty slice.
inline std::pair<std::size_t, std::size_t> page_bounds(std::size_t total,
                                                       Count page,
                                                       Count page_size) {
  check_page(page, page_size);
  std::size_t first = static_cast<std::size_t>(page - 1) *
                      static_cast<std::size_t>(page_size);
  if (first >= total) return {total, total};
  return {first, std::min(total, first + static_cast<std::size_t>(page_size))};
}

template <typename T>
Page<T> paginate(const std::vector<T> &all, Count page, Count page_size) {
  auto [first, last] = page_bounds(all.size(), page, page_size);
  Page<T> out;
  out.total = static_cast<Count>(all.size());
  out.page = page;
  out.page_size = page_size;
  out.items.assign(all.begin() + static_cast<std::ptrdiff_t>(first),
                   all.begin() + static_cast<std::ptrdiff_t>(last));
  return out;
}

// Renders the sentence holding `ref`, including every co-occurring mention.
inline RenderedInstance render_instance(const TriggerIndex &index,
                                        const Corpus &corpus,
                                        const InstanceRef &ref) {
  const Document *doc = corpus.find_document(ref.doc_id);
  if (!doc || ref.sent_idx < 0 ||
      ref.sent_idx >= static_cast<int>(doc->sentences.size()))
    throw_not_found("instance " + ref.mention_id + " is not in corpus " +
                    corpus.name);
  RenderedInstance out;
  out.doc_id = ref.doc_id;
  out.sent_idx = ref.sent_idx;
  out.focus_mention_id = ref.mention_id;
  out.tokens = doc->sentences[static_cast<std::size_t>(ref.sent_idx)].tokens;
  for (const auto &m : doc->mentions) {
    if (m.sent_idx != ref.sent_idx) continue;
    RenderedSpan span;
    span.interval = m.span;
    span.mention_id = m.mention_id;
    span.trigger = m.normalized;
    span.label = m.label;
    span.label_name = index.label_name(m.label);
    span.kind = m.negative() ? SpanKind::kNegative : SpanKind::kPositive;
    span.is_focus = m.mention_id == ref.mention_id;
    out.spans.push_back(std::move(span));
  }
  std::sort(out.spans.begin(), out.spans.end(),
            [](const RenderedSpan &a, const RenderedSpan &b) {
              return std::tie(a.interval, a.label, a.mention_id) <
                     std::tie(b.interval, b.label, b.mention_id);
            });
  return out;
}

inline Page<RenderedInstance> render_page(const TriggerIndex &index,
                                          const Corpus &corpus,
                                          const std::vector<InstanceRef> &refs,
                                          Count page, Count page_size) {
  auto [first, last] = page_bounds(refs.size(), page, page_size);
  Page<RenderedInstance> out;
  out.total = static_cast<Count>(refs.size());
  out.page = page;
  out.page_size = page_size;
  for (std::size_t i = first; i < last; ++i)
    out.items.push_back(render_instance(index, corpus, refs[i]));
  return out;
}

inline Page<RenderedInstance> instances_for_event(const TriggerIndex &index,
                                                  const Corpus &corpus,
                                                  std::string_view event,
                                                  Count page, Count page_size) {
  check_page(page, page_size);
  return render_page(index, corpus, index.event(event).instance_refs, page,
                     page_size);
}

// All instances of a trigger, or only those under `label` when given
// (kNegative selects negative-trigger instances).
inline std::vector<InstanceRef> trigger_refs(const TriggerIndex &index,
                                             std::string_view trigger,
                                             std::optional<TypeId> label) {
  const TriggerEntry &entry = index.trigger(trigger);
  if (label) {
    auto it = entry.instance_refs.find(*label);
    if (it == entry.instance_refs.end()) return {};
    return it->second;
  }
  std::vector<InstanceRef> refs;
  for (const auto &[id, list] : entry.instance_refs)
    refs.insert(refs.end(), list.begin(), list.end());
  std::sort(refs.begin(), refs.end(), instance_less);
  return refs;
}

inline Page<RenderedInstance> instances_for_trigger(
    const TriggerIndex &index, const Corpus &corpus, std::string_view trigger,
    std::optional<std::string_view> event_filter, Count page, Count page_size) {
  check_page(page, page_size);
  std::optional<TypeId> label;
  if (event_filter) label = index.label_id(*event_filter);
  return render_page(index, corpus, trigger_refs(index, trigger, label), page,
                     page_size);
}

}  // namespace edx

#endif  // EDX_INDEX_HPP
