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

// JSON encodings of index queries and reports. The CLI's --json output and
// the HTTP API both go through these functions, so the field names here
// are the public contract.

#ifndef EDX_SERIALIZE_HPP
#define EDX_SERIALIZE_HPP

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "edx/analytics.hpp"
#include "edx/annotator.hpp"
#include "edx/index.hpp"
#include "edx/ingest.hpp"
#include "edx/model.hpp"

namespace edx {

using Json = nlohmann::ordered_json;

inline Json to_json(const IndexTotals &t) {
  return {{"candidate_triggers", t.candidate_triggers},
          {"positive_triggers", t.positive_triggers},
          {"annotated_instances", t.annotated_instances},
          {"negative_instances", t.negative_instances}};
}

inline Json to_json(const IngestStats &s) {
  Json skipped = Json::array();
  for (const auto &r : s.skipped)
    skipped.push_back({{"line", r.line}, {"reason", r.reason}});
  return {{"records", s.records},
          {"documents", s.documents},
          {"sentences", s.sentences},
          {"event_types", s.event_types},
          {"event_mentions", s.event_mentions},
          {"negative_mentions", s.negative_mentions},
          {"unlabeled_documents", s.unlabeled_documents},
          {"skipped_records", s.skipped_records},
          {"skipped", std::move(skipped)}};
}

inline Json dataset_json(std::string_view name, const Corpus &corpus,
                         const TriggerIndex &index) {
  return {{"name", name}, {"domain", corpus.domain}, {"totals", to_json(index.totals)}};
}

inline Json trigger_json(const TriggerIndex &index, const TriggerEntry &entry) {
  Json counts = Json::object();
  for (const auto &[id, c] : entry.per_event_counts)
    counts[index.label_name(id)] = c;
  return {{"trigger", entry.normalized},
          {"per_event_counts", std::move(counts)},
          {"positive_total", entry.positive_total()},
          {"negative_count", entry.negative_count},
          {"total", entry.total()}};
}

inline Json to_json(const std::vector<TriggerCount> &triggers) {
  Json out = Json::array();
  for (const auto &[word, c] : triggers)
    out.push_back({{"trigger", word}, {"count", c}});
  return out;
}

inline Json top_triggers_json(std::string_view event, Count limit,
                              const std::vector<TriggerCount> &triggers) {
  return {{"event", event}, {"limit", limit}, {"triggers", to_json(triggers)}};
}

inline Json event_summary_json(const EventSummary &e, bool with_triggers) {
  Json j = {{"name", e.name},
            {"type_id", e.type_id},
            {"mention_count", e.mention_count},
            {"distinct_triggers", e.distinct_triggers}};
  if (with_triggers) j["top_triggers"] = to_json(e.top_triggers);
  return j;
}

inline Json to_json(const RenderedInstance &r) {
  Json spans = Json::array();
  for (const auto &s : r.spans)
    spans.push_back({{"start", s.interval.start},
                     {"end", s.interval.end},
                     {"mention_id", s.mention_id},
                     {"trigger", s.trigger},
                     {"label", s.label_name},
                     {"kind", span_kind_name(s.kind)},
                     {"is_focus", s.is_focus}});
  return {{"doc_id", r.doc_id},
          {"sent_idx", r.sent_idx},
          {"focus_mention_id", r.focus_mention_id},
          {"tokens", r.tokens},
          {"spans", std::move(spans)}};
}

template <typename T, typename F>
Json page_json(const Page<T> &page, F &&item_json) {
  Json items = Json::array();
  for (const auto &item : page.items) items.push_back(item_json(item));
  return {{"total", page.total},
          {"page", page.page},
          {"page_size", page.page_size},
          {"items", std::move(items)}};
}

inline Json to_json(const Page<RenderedInstance> &page) {
  return page_json(page, [](const RenderedInstance &r) { return to_json(r); });
}

inline Json to_json(const SparsityReport &r) {
  return {{"corpus", r.corpus},
          {"k", r.k},
          {"candidate_triggers", r.candidate_triggers},
          {"positive_triggers", r.positive_triggers},
          {"annotated_instances", r.annotated_instances},
          {"cohort_size", r.cohort_size},
          {"cohort_instances", r.cohort_instances},
          {"cohort_fraction", r.cohort_fraction},
          {"cohort_coverage_fraction", r.cohort_coverage_fraction}};
}

inline Json ratio_json(const std::optional<Ratio> &ratio) {
  if (!ratio) return "UNBOUNDED";
  return {{"num", ratio->num}, {"den", ratio->den}, {"value", ratio->value()}};
}

inline Json to_json(const DominanceEntry &d) {
  return {{"trigger", d.trigger},
          {"positive_instances", d.positive_instances},
          {"event_count", d.event_count},
          {"dominant_event", d.dominant_event},
          {"top_count", d.top_count},
          {"other_count", d.other_count},
          {"ratio", ratio_json(d.ratio)},
          {"dominant", d.dominant}};
}

inline Json to_json(const DominanceReport &r) {
  Json cohort = Json::array();
  for (const auto &d : r.cohort) cohort.push_back(to_json(d));
  return {{"corpus", r.corpus},
          {"k", r.k},
          {"threshold", ratio_json(r.threshold)},
          {"positive_triggers", r.positive_triggers},
          {"single_event_triggers", r.single_event_triggers},
          {"single_event_fraction", r.single_event_fraction},
          {"cohort_size", r.cohort_size},
          {"cohort_dominant_count", r.cohort_dominant_count},
          {"cohort_dominant_fraction", r.cohort_dominant_fraction},
          {"cohort_dominant_count_with_single", r.cohort_dominant_count_with_single},
          {"cohort_dominant_fraction_with_single",
           r.cohort_dominant_fraction_with_single},
          {"cohort", std::move(cohort)}};
}

inline Json to_json(const OverviewReport &r) {
  Json events = Json::array();
  for (const auto &e : r.events) events.push_back(event_summary_json(e, true));
  Json topics = Json::object();
  for (const auto &[t, c] : r.topics) topics[t] = c;
  return {{"corpus", r.corpus},
          {"documents", r.documents},
          {"sentences", r.sentences},
          {"annotated_instances", r.annotated_instances},
          {"negative_instances", r.negative_instances},
          {"events", std::move(events)},
          {"below_threshold", r.below_threshold},
          {"events_below", r.events_below},
          {"topics", std::move(topics)}};
}

inline Json to_json(const ReviewCandidate &c) {
  return {{"doc_id", c.mention.doc_id},
          {"sent_idx", c.mention.sent_idx},
          {"start", c.mention.start},
          {"mention_id", c.mention.mention_id},
          {"trigger", c.trigger},
          {"label", c.label},
          {"category", review_category_name(c.category)},
          {"score", c.score},
          {"rationale", c.rationale}};
}

inline Json to_json(const Page<ReviewCandidate> &page) {
  return page_json(page, [](const ReviewCandidate &c) { return to_json(c); });
}

// Percent-encodes one URL path segment.
inline std::string url_segment(std::string_view s) {
  static const char *hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(hex[c >> 4]);
      out.push_back(hex[c & 15]);
    }
  }
  return out;
}

// Explorer routes for a predicted span, as served by the web UI.
inline std::string trigger_link(std::string_view dataset, std::string_view trigger) {
  return "/d/" + url_segment(dataset) + "/trigger/" + url_segment(trigger);
}

inline std::string event_link(std::string_view dataset, std::string_view event) {
  return "/d/" + url_segment(dataset) + "/event/" + url_segment(event);
}

inline Json to_json(const AnnotatedText &text, std::string_view dataset) {
  Json sentences = Json::array();
  for (const auto &s : text.sentences) {
    Json spans = Json::array();
    for (const auto &p : s.spans)
      spans.push_back({{"start", p.interval.start},
                       {"end", p.interval.end},
                       {"trigger", p.trigger},
                       {"event", p.event},
                       {"confidence", p.confidence},
                       {"trigger_url", trigger_link(dataset, p.trigger)},
                       {"event_url", event_link(dataset, p.event)}});
    sentences.push_back({{"tokens", s.tokens}, {"spans", std::move(spans)}});
  }
  return {{"dataset", dataset}, {"sentences", std::move(sentences)}};
}

inline Json to_json(const Prf &p) {
  return {{"true_positives", p.true_positives},
          {"false_positives", p.false_positives},
          {"false_negatives", p.false_negatives},
          {"precision", p.precision},
          {"recall", p.recall},
          {"f1", p.f1}};
}

inline Json to_json(const EvaluationReport &r) {
  Json per_event = Json::object();
  for (const auto &[e, p] : r.per_event) per_event[e] = to_json(p);
  return {{"per_event", std::move(per_event)}, {"micro", to_json(r.micro)}};
}

}  // namespace edx

#endif  // EDX_SERIALIZE_HPP
