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

// Dataset-quality reports computed from a TriggerIndex: sparsity of the
// trigger vocabulary, dominant-event label imbalance, an events overview,
// and heuristic review candidates for debatable annotations.
//
// Every report is a pure function of its inputs.

#ifndef EDX_ANALYTICS_HPP
#define EDX_ANALYTICS_HPP

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdint>
#include <map>
#include <numeric>
#include <iterator>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "edx/error.hpp"
#include "edx/index.hpp"
#include "edx/model.hpp"

namespace edx {

// Non-negative rational num/den with den > 0, kept in lowest terms.
struct Ratio {
  Count num = 0;
  Count den = 1;

  static Ratio of(Count num, Count den) {
    if (den <= 0 || num < 0) throw_invalid("ratio needs num >= 0, den > 0");
    Count g = std::gcd(num, den);
    if (g == 0) g = 1;
    return {num / g, den / g};
  }

  // Parses "5", "2.5" or "7/2".
  static Ratio parse(std::string_view text) {
    auto fail = [&]() -> Ratio {
      throw_invalid("invalid ratio: '" + std::string(text) + "'");
    };
    auto parse_int = [&](std::string_view s) {
      Count v = 0;
      if (s.empty()) fail();
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || p != s.data() + s.size()) fail();
      return v;
    };
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
      Count den = parse_int(text.substr(slash + 1));
      if (den <= 0) fail();
      return of(parse_int(text.substr(0, slash)), den);
    }
    auto dot = text.find('.');
    if (dot == std::string_view::npos) return of(parse_int(text), 1);
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    if (frac.size() > 9 || (whole.empty() && frac.empty())) fail();
    Count den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    Count w = whole.empty() ? 0 : parse_int(whole);
    Count f = frac.empty() ? 0 : parse_int(frac);
    return of(w * den + f, den);
  }

  double value() const {
    return static_cast<double>(num) / static_cast<double>(den);
  }

  std::string str() const {
    return den == 1 ? std::to_string(num)
                    : std::to_string(num) + "/" + std::to_string(den);
  }

  // a/b > this, evaluated exactly.
  bool exceeded_by(Count a, Count b) const { return a * den > num * b; }

  friend bool operator==(const Ratio &, const Ratio &) = default;
};

struct AnalyticsConfig {
  Count min_instances = 20;                 // sparsity cohort threshold k
  Ratio dominance_ratio{5, 1};              // r; dominant iff top/others > r
  Count rare_event_max = 2;                 // wrong-event candidates
  double negative_anomaly_share = 0.5;      // theta for negative candidates
  double ambiguity_jaccard = 0.3;           // event-pair trigger overlap
  Count events_below = 100;                 // overview "rare events" cutoff

  void check() const {
    if (min_instances < 1) throw_invalid("k must be >= 1");
    if (dominance_ratio.num <= 0 || dominance_ratio.den <= 0)
      throw_invalid("dominance ratio must be > 0");
    if (rare_event_max < 0) throw_invalid("rare_event_max must be >= 0");
    if (!(negative_anomaly_share > 0.0 && negative_anomaly_share < 1.0))
      throw_invalid("negative anomaly share must be in (0, 1)");
    if (!(ambiguity_jaccard > 0.0 && ambiguity_jaccard <= 1.0))
      throw_invalid("ambiguity jaccard must be in (0, 1]");
    if (events_below < 0) throw_invalid("events_below must be >= 0");
  }
};

inline double safe_fraction(Count num, Count den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

// ---------------------------------------------------------------------------
// Sparsity

struct SparsityReport {
  std::string corpus;
  Count k = 0;
  Count candidate_triggers = 0;
  Count positive_triggers = 0;
  Count annotated_instances = 0;
  Count cohort_size = 0;
  Count cohort_instances = 0;
  double cohort_fraction = 0.0;           // cohort_size / positive_triggers
  double cohort_coverage_fraction = 0.0;  // cohort_instances / annotated

  friend bool operator==(const SparsityReport &, const SparsityReport &) =
      default;
};

inline SparsityReport sparsity(const TriggerIndex &index,
                               const AnalyticsConfig &config = {}) {
  config.check();
  SparsityReport r;
  r.corpus = index.corpus_name;
  r.k = config.min_instances;
  r.candidate_triggers = index.totals.candidate_triggers;
  r.positive_triggers = index.totals.positive_triggers;
  r.annotated_instances = index.totals.annotated_instances;
  for (const auto &[word, entry] : index.by_trigger) {
    Count positive = entry.positive_total();
    if (positive > 0 && positive >= config.min_instances) {
      ++r.cohort_size;
      r.cohort_instances += positive;
    }
  }
  r.cohort_fraction = safe_fraction(r.cohort_size, r.positive_triggers);
  r.cohort_coverage_fraction =
      safe_fraction(r.cohort_instances, r.annotated_instances);
  return r;
}

// ---------------------------------------------------------------------------
// Dominance

// Most frequent event of a positive trigger; ties go to the smaller name.
inline TypeId argmax_event(const TriggerIndex &index,
                           const std::map<TypeId, Count> &counts) {
  TypeId best = kNegative;
  Count best_count = -1;
  std::string best_name;
  for (const auto &[id, c] : counts) {
    std::string name = index.label_name(id);
    if (c > best_count || (c == best_count && name < best_name)) {
      best = id;
      best_count = c;
      best_name = std::move(name);
    }
  }
  return best;
}

struct DominanceEntry {
  std::string trigger;
  Count positive_instances = 0;
  Count event_count = 0;  // distinct events triggered
  std::string dominant_event;
  Count top_count = 0;
  Count other_count = 0;
  std::optional<Ratio> ratio;  // nullopt means UNBOUNDED (single event)
  bool dominant = false;

  bool single_event() const { return event_count == 1; }

  friend bool operator==(const DominanceEntry &, const DominanceEntry &) =
      default;
};

// Dominance of one trigger: top / sum(other events), negatives excluded.
inline DominanceEntry dominance_of(const TriggerIndex &index,
                                   const TriggerEntry &entry,
                                   const Ratio &threshold) {
  DominanceEntry d;
  d.trigger = entry.normalized;
  d.positive_instances = entry.positive_total();
  d.event_count = static_cast<Count>(entry.per_event_counts.size());
  if (d.event_count == 0) return d;
  TypeId top = argmax_event(index, entry.per_event_counts);
  d.dominant_event = index.label_name(top);
  d.top_count = entry.per_event_counts.at(top);
  d.other_count = d.positive_instances - d.top_count;
  if (d.other_count == 0) {
    d.dominant = true;
  } else {
    d.ratio = Ratio::of(d.top_count, d.other_count);
    d.dominant = threshold.exceeded_by(d.top_count, d.other_count);
  }
  return d;
}

struct DominanceReport {
  std::string corpus;
  Count k = 0;
  Ratio threshold;
  Count positive_triggers = 0;
  Count single_event_triggers = 0;
  double single_event_fraction = 0.0;  // of positive triggers
  Count cohort_size = 0;
  // Multi-event cohort triggers whose ratio exceeds the threshold.
  Count cohort_dominant_count = 0;
  double cohort_dominant_fraction = 0.0;
  // Same, also counting single-event cohort triggers as dominated.
  Count cohort_dominant_count_with_single = 0;
  double cohort_dominant_fraction_with_single = 0.0;
  std::vector<DominanceEntry> cohort;

  friend bool operator==(const DominanceReport &, const DominanceReport &) =
      default;
};

inline DominanceReport dominance(const TriggerIndex &index,
                                 const AnalyticsConfig &config = {}) {
  config.check();
  DominanceReport r;
  r.corpus = index.corpus_name;
  r.k = config.min_instances;
  r.threshold = config.dominance_ratio;
  for (const auto &[word, entry] : index.by_trigger) {
    if (entry.per_event_counts.empty()) continue;
    ++r.positive_triggers;
    if (entry.per_event_counts.size() == 1) ++r.single_event_triggers;
    if (entry.positive_total() < config.min_instances) continue;
    DominanceEntry d = dominance_of(index, entry, config.dominance_ratio);
    ++r.cohort_size;
    if (d.dominant) {
      ++r.cohort_dominant_count_with_single;
      if (!d.single_event()) ++r.cohort_dominant_count;
    }
    r.cohort.push_back(std::move(d));
  }
  r.single_event_fraction =
      safe_fraction(r.single_event_triggers, r.positive_triggers);
  r.cohort_dominant_fraction =
      safe_fraction(r.cohort_dominant_count, r.cohort_size);
  r.cohort_dominant_fraction_with_single =
      safe_fraction(r.cohort_dominant_count_with_single, r.cohort_size);
  return r;
}

// ---------------------------------------------------------------------------
// Overview

struct EventSummary {
  std::string name;
  TypeId type_id = 0;
  Count mention_count = 0;
  Count distinct_triggers = 0;
  std::vector<TriggerCount> top_triggers;

  friend bool operator==(const EventSummary &, const EventSummary &) = default;
};

struct OverviewReport {
  std::string corpus;
  Count documents = 0;
  Count sentences = 0;
  Count annotated_instances = 0;
  Count negative_instances = 0;
  std::vector<EventSummary> events;  // descending count, then name
  Count below_threshold = 0;
  std::vector<std::string> events_below;  // ascending count, then name
  std::map<std::string, Count> topics;

  friend bool operator==(const OverviewReport &, const OverviewReport &) =
      default;
};

inline constexpr std::string_view kUnknownTopic = "unknown";

inline EventSummary summarize_event(const TriggerIndex &index,
                                    const EventEntry &entry, Count top = 10) {
  EventSummary s;
  s.name = entry.event.name;
  s.type_id = entry.event.type_id;
  s.mention_count = entry.mention_count;
  s.distinct_triggers = static_cast<Count>(entry.trigger_counts.size());
  s.top_triggers = top_triggers(index, entry.event.name, top);
  return s;
}

// Events with strictly fewer than `n` mentions.
inline std::vector<std::string> events_below(const TriggerIndex &index,
                                             Count n) {
  std::vector<const EventEntry *> rare;
  for (const auto &[id, e] : index.by_event)
    if (e.mention_count < n) rare.push_back(&e);
  std::sort(rare.begin(), rare.end(), [](const auto *a, const auto *b) {
    return std::tie(a->mention_count, a->event.name) <
           std::tie(b->mention_count, b->event.name);
  });
  std::vector<std::string> out;
  for (const auto *e : rare) out.push_back(e->event.name);
  return out;
}

inline OverviewReport overview(const TriggerIndex &index, const Corpus &corpus,
                               const AnalyticsConfig &config = {}) {
  config.check();
  OverviewReport r;
  r.corpus = index.corpus_name;
  r.documents = static_cast<Count>(corpus.documents.size());
  for (const auto &doc : corpus.documents) {
    r.sentences += static_cast<Count>(doc.sentences.size());
    ++r.topics[doc.topic ? *doc.topic : std::string(kUnknownTopic)];
  }
  r.annotated_instances = index.totals.annotated_instances;
  r.negative_instances = index.totals.negative_instances;
  for (const auto &[id, e] : index.by_event)
    r.events.push_back(summarize_event(index, e));
  std::sort(r.events.begin(), r.events.end(),
            [](const EventSummary &a, const EventSummary &b) {
              if (a.mention_count != b.mention_count)
                return a.mention_count > b.mention_count;
              return a.name < b.name;
            });
  r.below_threshold = config.events_below;
  r.events_below = events_below(index, config.events_below);
  return r;
}

// ---------------------------------------------------------------------------
// Review candidates

enum class ReviewCategory { kNegativeTrigger, kTriggerWrongEvent, kEventAmbiguity };

inline std::string_view review_category_name(ReviewCategory c) {
  switch (c) {
    case ReviewCategory::kNegativeTrigger: return "NEGATIVE_TRIGGER";
    case ReviewCategory::kTriggerWrongEvent: return "TRIGGER_WRONG_EVENT";
    case ReviewCategory::kEventAmbiguity: return "EVENT_AMBIGUITY";
  }
  return "";
}

inline ReviewCategory parse_review_category(std::string_view name) {
  for (auto c : {ReviewCategory::kNegativeTrigger,
                 ReviewCategory::kTriggerWrongEvent,
                 ReviewCategory::kEventAmbiguity})
    if (review_category_name(c) == name) return c;
  throw_invalid("unknown review category: " + std::string(name));
}

struct ReviewCandidate {
  InstanceRef mention;
  std::string trigger;
  std::string label;
  ReviewCategory category = ReviewCategory::kNegativeTrigger;
  double score = 0.0;
  std::string rationale;

  friend bool operator==(const ReviewCandidate &, const ReviewCandidate &) =
      default;
};

namespace detail {

inline std::string percent(double f) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * f);
  return buf;
}

// Keeps the highest-scoring candidate per (mention, category).
class CandidateSet {
 public:
  void add(ReviewCandidate c) {
    auto key = std::make_tuple(c.mention.doc_id, c.mention.mention_id,
                               static_cast<int>(c.category));
    auto it = by_key_.find(key);
    if (it == by_key_.end()) {
      by_key_.emplace(std::move(key), std::move(c));
    } else if (c.score > it->second.score) {
      it->second = std::move(c);
    }
  }

  std::vector<ReviewCandidate> sorted() && {
    std::vector<ReviewCandidate> out;
    out.reserve(by_key_.size());
    for (auto &[key, c] : by_key_) out.push_back(std::move(c));
    std::sort(out.begin(), out.end(),
              [](const ReviewCandidate &a, const ReviewCandidate &b) {
                if (a.score != b.score) return a.score > b.score;
                if (a.category != b.category) return a.category < b.category;
                return instance_less(a.mention, b.mention);
              });
    return out;
  }

 private:
  std::map<std::tuple<std::string, std::string, int>, ReviewCandidate> by_key_;
};

}  // namespace detail

// Suggests instances for human review. Three heuristics:
//  - NEGATIVE_TRIGGER: negatives of a trigger whose positive share
//    P/(P+N) >= theta; score is the positive share.
//  - TRIGGER_WRONG_EVENT: for cohort triggers with a dominant event, the
//    instances of events seen at most rare_event_max times; score is
//    1 - count/P.
//  - EVENT_AMBIGUITY: for event pairs whose cohort trigger sets have
//    Jaccard >= ambiguity_jaccard, the minority-side instances of each
//    shared trigger; score is the Jaccard overlap.
inline std::vector<ReviewCandidate> flag_review_candidates(
    const TriggerIndex &index, const Corpus & /*corpus*/,
    const AnalyticsConfig &config = {}) {
  config.check();
  detail::CandidateSet found;

  for (const auto &[word, entry] : index.by_trigger) {
    Count positive = entry.positive_total();
    if (positive == 0 || entry.negative_count == 0) continue;
    double share = safe_fraction(positive, entry.total());
    if (share < config.negative_anomaly_share) continue;
    std::string why = "'" + word + "' triggers events in " +
                      std::to_string(positive) + " of " +
                      std::to_string(entry.total()) + " instances (" +
                      detail::percent(share) + ") but is negative here";
    for (const auto &ref : entry.instance_refs.at(kNegative))
      found.add({ref, word, std::string(kNegativeName),
                 ReviewCategory::kNegativeTrigger, share, why});
  }

  std::map<TypeId, std::set<std::string>> cohort_triggers;
  for (const auto &[word, entry] : index.by_trigger) {
    Count positive = entry.positive_total();
    if (positive == 0 || positive < config.min_instances) continue;
    for (const auto &[id, c] : entry.per_event_counts)
      cohort_triggers[id].insert(word);

    DominanceEntry d = dominance_of(index, entry, config.dominance_ratio);
    if (!d.dominant || d.single_event()) continue;
    for (const auto &[id, c] : entry.per_event_counts) {
      std::string name = index.label_name(id);
      if (name == d.dominant_event || c > config.rare_event_max) continue;
      double score = 1.0 - safe_fraction(c, positive);
      std::string why = "'" + word + "' is dominated by " + d.dominant_event +
                        " (" + std::to_string(d.top_count) + ") but labeled " +
                        name + " " + std::to_string(c) + " time(s)";
      for (const auto &ref : entry.instance_refs.at(id))
        found.add({ref, word, name, ReviewCategory::kTriggerWrongEvent, score,
                   why});
    }
  }

  for (auto a = cohort_triggers.begin(); a != cohort_triggers.end(); ++a) {
    for (auto b = std::next(a); b != cohort_triggers.end(); ++b) {
      std::vector<std::string> shared;
      std::set_intersection(a->second.begin(), a->second.end(),
                            b->second.begin(), b->second.end(),
                            std::back_inserter(shared));
      if (shared.empty()) continue;
      Count unions = static_cast<Count>(a->second.size() + b->second.size() -
                                        shared.size());
      double jaccard = safe_fraction(static_cast<Count>(shared.size()), unions);
      if (jaccard < config.ambiguity_jaccard) continue;
      std::string name_a = index.label_name(a->first);
      std::string name_b = index.label_name(b->first);
      for (const auto &word : shared) {
        const TriggerEntry &entry = index.by_trigger.at(word);
        Count ca = entry.per_event_counts.at(a->first);
        Count cb = entry.per_event_counts.at(b->first);
        // Minority side; on a tie the larger name is the minority.
        bool a_minor = ca < cb || (ca == cb && name_a > name_b);
        TypeId minor = a_minor ? a->first : b->first;
        const std::string &minor_name = a_minor ? name_a : name_b;
        const std::string &major_name = a_minor ? name_b : name_a;
        std::string why = "'" + word + "' is shared by " + name_a + " and " +
                          name_b + " (trigger Jaccard " +
                          detail::percent(jaccard) + "); minority label " +
                          minor_name + " vs " + major_name;
        for (const auto &ref : entry.instance_refs.at(minor))
          found.add({ref, word, minor_name, ReviewCategory::kEventAmbiguity,
                     jaccard, why});
      }
    }
  }
  return std::move(found).sorted();
}

}  // namespace edx

#endif  // EDX_ANALYTICS_HPP
