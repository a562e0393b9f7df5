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

// Aligned-column text renderings of the reports, for terminals.

#ifndef EDX_REPORT_TEXT_HPP
#define EDX_REPORT_TEXT_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "edx/analytics.hpp"
#include "edx/annotator.hpp"
#include "edx/ingest.hpp"

namespace edx {

// 50388 -> "50,388"
inline std::string grouped(Count n) {
  std::string digits = std::to_string(n < 0 ? -n : n);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > 0 && (digits.size() - i) % 3 == 0) out.push_back(',');
    out.push_back(digits[i]);
  }
  return n < 0 ? "-" + out : out;
}

inline std::string whole_percent(double f) {
  return std::to_string(static_cast<long long>(std::lround(100.0 * f))) + "%";
}

inline std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

class Table {
 public:
  void row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }

  std::string str() const {
    std::vector<std::size_t> width;
    for (const auto &r : rows_)
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (width.size() <= i) width.push_back(0);
        width[i] = std::max(width[i], r[i].size());
      }
    std::ostringstream out;
    for (const auto &r : rows_) {
      std::string line;
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) line += "  ";
        line += r[i];
        if (i + 1 < r.size()) line.append(width[i] - r[i].size(), ' ');
      }
      out << line << '\n';
    }
    return out.str();
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

inline std::string to_text(const IngestStats &s) {
  Table t;
  t.row({"records", grouped(static_cast<Count>(s.records))});
  t.row({"documents", grouped(static_cast<Count>(s.documents))});
  t.row({"sentences", grouped(static_cast<Count>(s.sentences))});
  t.row({"event types", grouped(static_cast<Count>(s.event_types))});
  t.row({"event mentions", grouped(static_cast<Count>(s.event_mentions))});
  t.row({"negative mentions", grouped(static_cast<Count>(s.negative_mentions))});
  t.row({"unlabeled documents", grouped(static_cast<Count>(s.unlabeled_documents))});
  t.row({"skipped records", grouped(static_cast<Count>(s.skipped_records))});
  std::string out = t.str();
  for (const auto &r : s.skipped)
    out += "  skipped line " + std::to_string(r.line) + ": " + r.reason + "\n";
  return out;
}

inline std::string to_text(const SparsityReport &r) {
  Table t;
  t.row({"corpus", r.corpus});
  t.row({"k", std::to_string(r.k)});
  t.row({"candidate triggers", grouped(r.candidate_triggers)});
  t.row({"positive triggers", grouped(r.positive_triggers)});
  t.row({"annotated instances", grouped(r.annotated_instances)});
  t.row({"cohort size", grouped(r.cohort_size),
         whole_percent(r.cohort_fraction) + " of positive triggers"});
  t.row({"cohort instances", grouped(r.cohort_instances),
         whole_percent(r.cohort_coverage_fraction) + " of annotated instances"});
  return "candidate=" + grouped(r.candidate_triggers) +
         " positive=" + grouped(r.positive_triggers) +
         " instances=" + grouped(r.annotated_instances) +
         " cohort=" + grouped(r.cohort_size) +
         " coverage=" + whole_percent(r.cohort_coverage_fraction) + "\n\n" + t.str();
}

inline std::string to_text(const DominanceReport &r) {
  Table t;
  t.row({"corpus", r.corpus});
  t.row({"k", std::to_string(r.k)});
  t.row({"ratio threshold", "> " + r.threshold.str()});
  t.row({"positive triggers", grouped(r.positive_triggers)});
  t.row({"single-event triggers", grouped(r.single_event_triggers),
         whole_percent(r.single_event_fraction)});
  t.row({"cohort size", grouped(r.cohort_size)});
  t.row({"cohort dominant (multi-event)", grouped(r.cohort_dominant_count),
         whole_percent(r.cohort_dominant_fraction)});
  t.row({"cohort dominant (incl. single)", grouped(r.cohort_dominant_count_with_single),
         whole_percent(r.cohort_dominant_fraction_with_single)});
  Table c;
  c.row({"TRIGGER", "INSTANCES", "EVENTS", "TOP EVENT", "RATIO", "DOMINANT"});
  for (const auto &d : r.cohort)
    c.row({d.trigger, grouped(d.positive_instances), std::to_string(d.event_count),
           d.dominant_event, d.ratio ? fixed(d.ratio->value(), 2) : "UNBOUNDED",
           d.dominant ? "yes" : "no"});
  return t.str() + "\n" + c.str();
}

inline std::string to_text(const OverviewReport &r) {
  Table t;
  t.row({"corpus", r.corpus});
  t.row({"documents", grouped(r.documents)});
  t.row({"sentences", grouped(r.sentences)});
  t.row({"annotated instances", grouped(r.annotated_instances)});
  t.row({"negative instances", grouped(r.negative_instances)});
  t.row({"events below " + std::to_string(r.below_threshold),
         grouped(static_cast<Count>(r.events_below.size()))});
  Table e;
  e.row({"EVENT", "MENTIONS", "TRIGGERS", "TOP TRIGGERS"});
  for (const auto &ev : r.events) {
    std::string top;
    for (std::size_t i = 0; i < ev.top_triggers.size() && i < 3; ++i) {
      if (i) top += ", ";
      top += ev.top_triggers[i].first + " (" + grouped(ev.top_triggers[i].second) + ")";
    }
    e.row({ev.name, grouped(ev.mention_count), grouped(ev.distinct_triggers), top});
  }
  Table topics;
  topics.row({"TOPIC", "DOCUMENTS"});
  for (const auto &[topic, n] : r.topics) topics.row({topic, grouped(n)});
  return t.str() + "\n" + e.str() + "\n" + topics.str();
}

inline std::string to_text(const std::vector<ReviewCandidate> &candidates) {
  Table t;
  t.row({"SCORE", "CATEGORY", "TRIGGER", "LABEL", "DOC", "SENT", "MENTION"});
  for (const auto &c : candidates)
    t.row({fixed(c.score, 3), std::string(review_category_name(c.category)), c.trigger,
           c.label, c.mention.doc_id, std::to_string(c.mention.sent_idx),
           c.mention.mention_id});
  return t.str();
}

// Tokens joined by spaces with predictions inlined as [tokens::Event p].
inline std::string to_text(const AnnotatedText &text) {
  std::string out;
  for (const auto &s : text.sentences) {
    std::string line;
    std::size_t next = 0;
    for (int i = 0; i < static_cast<int>(s.tokens.size()); ++i) {
      if (!line.empty()) line.push_back(' ');
      if (next < s.spans.size() && s.spans[next].interval.start == i) {
        const PredictedSpan &p = s.spans[next++];
        line += "[" + join_tokens(s.tokens, p.interval) + "::" + p.event + " " +
                fixed(p.confidence, 3) + "]";
        i = p.interval.end - 1;
      } else {
        line += s.tokens[static_cast<std::size_t>(i)];
      }
    }
    out += line + "\n";
  }
  return out;
}

inline std::string to_text(const EvaluationReport &r) {
  Table t;
  t.row({"EVENT", "TP", "FP", "FN", "P", "R", "F1"});
  auto add = [&](const std::string &name, const Prf &p) {
    t.row({name, std::to_string(p.true_positives), std::to_string(p.false_positives),
           std::to_string(p.false_negatives), fixed(p.precision, 4),
           fixed(p.recall, 4), fixed(p.f1, 4)});
  };
  for (const auto &[e, p] : r.per_event) add(e, p);
  add("micro", r.micro);
  return t.str();
}

}  // namespace edx

#endif  // EDX_REPORT_TEXT_HPP
