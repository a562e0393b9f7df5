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

// Event annotators. The Annotator interface is what the service and CLI
// call; LexiconAnnotator is the baseline implementation, a trigger lexicon
// trained from a TriggerIndex that predicts each matched trigger's most
// frequent event.
//
// Text tokenization (annotate only; corpus tokens are never re-tokenized):
// whitespace separates tokens, ASCII punctuation is split off as its own
// token except for '-' and '\'' between letters/digits and '.' or ','
// between digits. A sentence ends after a run of '.', '!' or '?'.

#ifndef EDX_ANNOTATOR_HPP
#define EDX_ANNOTATOR_HPP

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "edx/error.hpp"
#include "edx/index.hpp"
#include "edx/model.hpp"

namespace edx {

inline constexpr int kModelSchemaVersion = 1;

struct Thresholds {
  double tau_neg = 0.5;    // minimum positive share P / (P + N)
  double tau_event = 0.5;  // minimum top-event share of P

  void check() const {
    if (!(tau_neg >= 0.0 && tau_neg <= 1.0))
      throw_invalid("tau_neg must be in [0, 1]");
    if (!(tau_event >= 0.0 && tau_event <= 1.0))
      throw_invalid("tau_event must be in [0, 1]");
  }

  friend bool operator==(const Thresholds &, const Thresholds &) = default;
};

struct LexiconEntry {
  std::map<std::string, Count> per_event_counts;  // by event name
  Count negative_count = 0;

  Count positive_total() const {
    Count n = 0;
    for (const auto &[e, c] : per_event_counts) n += c;
    return n;
  }

  // Most frequent event; ties resolve to the smaller name (map order).
  std::pair<std::string, Count> top_event() const {
    std::pair<std::string, Count> best{"", -1};
    for (const auto &[e, c] : per_event_counts)
      if (c > best.second) best = {e, c};
    return best;
  }

  friend bool operator==(const LexiconEntry &, const LexiconEntry &) = default;
};

struct LexiconModel {
  int max_trigger_tokens = 0;
  std::map<std::string, LexiconEntry> entries;
  Thresholds thresholds;
  std::string source_corpus;
  std::string build_timestamp;

  friend bool operator==(const LexiconModel &, const LexiconModel &) = default;
};

struct PredictedSpan {
  Span interval;
  std::string trigger;
  std::string event;
  double confidence = 0.0;

  friend bool operator==(const PredictedSpan &, const PredictedSpan &) = default;
};

struct AnnotatedSentence {
  std::vector<std::string> tokens;
  std::vector<PredictedSpan> spans;

  friend bool operator==(const AnnotatedSentence &, const AnnotatedSentence &) =
      default;
};

struct AnnotatedText {
  std::vector<AnnotatedSentence> sentences;

  friend bool operator==(const AnnotatedText &, const AnnotatedText &) = default;
};

inline int token_count(std::string_view normalized) {
  return 1 + static_cast<int>(std::count(normalized.begin(), normalized.end(), ' '));
}

// All positive triggers of the index become lexicon entries.
inline LexiconModel train_lexicon(const TriggerIndex &index,
                                  const Thresholds &thresholds = {},
                                  std::string build_timestamp = {}) {
  thresholds.check();
  if (index.totals.positive_triggers == 0)
    throw_invalid("cannot train a lexicon: index has no positive triggers");
  LexiconModel model;
  model.thresholds = thresholds;
  model.source_corpus = index.corpus_name;
  model.build_timestamp = std::move(build_timestamp);
  for (const auto &[word, entry] : index.by_trigger) {
    if (entry.per_event_counts.empty()) continue;
    LexiconEntry le;
    for (const auto &[id, c] : entry.per_event_counts)
      le.per_event_counts[index.label_name(id)] = c;
    le.negative_count = entry.negative_count;
    model.entries.emplace(word, std::move(le));
    model.max_trigger_tokens = std::max(model.max_trigger_tokens, token_count(word));
  }
  return model;
}

namespace detail {

inline bool word_char(char c) {
  return !std::ispunct(static_cast<unsigned char>(c)) && !is_space(c);
}

inline bool digit(char c) { return c >= '0' && c <= '9'; }

inline bool terminal(std::string_view tok) {
  return tok == "." || tok == "!" || tok == "?";
}

}  // namespace detail

inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (is_space(c)) {
      flush();
      continue;
    }
    if (detail::word_char(c)) {
      current.push_back(c);
      continue;
    }
    char prev = i > 0 ? text[i - 1] : ' ';
    char next = i + 1 < text.size() ? text[i + 1] : ' ';
    bool joins_words = (c == '-' || c == '\'') && !current.empty() &&
                       detail::word_char(prev) && detail::word_char(next);
    bool joins_digits = (c == '.' || c == ',') && !current.empty() &&
                        detail::digit(prev) && detail::digit(next);
    if (joins_words || joins_digits) {
      current.push_back(c);
      continue;
    }
    flush();
    tokens.emplace_back(1, c);
  }
  flush();
  return tokens;
}

inline std::vector<std::vector<std::string>> split_sentences(std::string_view text) {
  std::vector<std::string> tokens = tokenize(text);
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> current;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    current.push_back(tokens[i]);
    bool end = detail::terminal(tokens[i]) &&
               (i + 1 == tokens.size() || !detail::terminal(tokens[i + 1]));
    if (end) out.push_back(std::move(current)), current.clear();
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

class Annotator {
 public:
  virtual ~Annotator() = default;

  // Predicts spans over already tokenized text.
  virtual std::vector<PredictedSpan> predict(
      const std::vector<std::string> &tokens) const = 0;

  AnnotatedText annotate(std::string_view text) const {
    AnnotatedText out;
    for (auto &tokens : split_sentences(text)) {
      AnnotatedSentence s;
      s.spans = predict(tokens);
      s.tokens = std::move(tokens);
      out.sentences.push_back(std::move(s));
    }
    return out;
  }
};

// Greedy longest-leftmost lexicon matcher. The longest lexicon match at a
// position always consumes its tokens, even when the thresholds reject it,
// so raising a threshold can only remove spans.
class LexiconAnnotator : public Annotator {
 public:
  explicit LexiconAnnotator(LexiconModel model) : model_(std::move(model)) {
    model_.thresholds.check();
  }

  const LexiconModel &model() const { return model_; }

  std::vector<PredictedSpan> predict(
      const std::vector<std::string> &tokens) const override {
    std::vector<PredictedSpan> out;
    const int n = static_cast<int>(tokens.size());
    int i = 0;
    while (i < n) {
      int longest = std::min(model_.max_trigger_tokens, n - i);
      bool matched = false;
      for (int len = longest; len >= 1 && !matched; --len) {
        std::string key;
        for (int j = i; j < i + len; ++j) {
          if (j > i) key.push_back(' ');
          for (char c : tokens[static_cast<std::size_t>(j)])
            key.push_back(ascii_lower(c));
        }
        auto it = model_.entries.find(key);
        if (it == model_.entries.end()) continue;
        matched = true;
        if (auto span = decide(it->first, it->second, {i, i + len}))
          out.push_back(std::move(*span));
        i += len;
      }
      if (!matched) ++i;
    }
    return out;
  }

 private:
  std::optional<PredictedSpan> decide(const std::string &trigger,
                                      const LexiconEntry &entry,
                                      Span interval) const {
    Count positive = entry.positive_total();
    if (positive == 0) return std::nullopt;
    double share = static_cast<double>(positive) /
                   static_cast<double>(positive + entry.negative_count);
    auto [event, top] = entry.top_event();
    double confidence = static_cast<double>(top) / static_cast<double>(positive);
    if (share < model_.thresholds.tau_neg ||
        confidence < model_.thresholds.tau_event)
      return std::nullopt;
    return PredictedSpan{interval, trigger, event, confidence};
  }

  LexiconModel model_;
};

inline AnnotatedText annotate(const LexiconModel &model, std::string_view text) {
  return LexiconAnnotator(model).annotate(text);
}

// ---------------------------------------------------------------------------
// Evaluation

struct Prf {
  Count true_positives = 0;
  Count false_positives = 0;
  Count false_negatives = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  void finish() {
    Count predicted = true_positives + false_positives;
    Count gold = true_positives + false_negatives;
    precision = predicted ? static_cast<double>(true_positives) / predicted : 0.0;
    recall = gold ? static_cast<double>(true_positives) / gold : 0.0;
    f1 = precision + recall > 0 ? 2 * precision * recall / (precision + recall)
                                : 0.0;
  }

  friend bool operator==(const Prf &, const Prf &) = default;
};

struct EvaluationReport {
  std::map<std::string, Prf> per_event;
  Prf micro;

  friend bool operator==(const EvaluationReport &, const EvaluationReport &) =
      default;
};

// A prediction is correct iff a gold mention has the identical span and
// event. Negative gold mentions are not part of the gold set.
inline EvaluationReport evaluate(const Annotator &annotator,
                                 const Corpus &corpus) {
  require_valid(corpus);
  EvaluationReport report;
  Count gold_total = 0;
  for (const auto &doc : corpus.documents) {
    for (const auto &sentence : doc.sentences) {
      std::set<std::tuple<Span, std::string>> gold;
      for (const auto &m : doc.mentions)
        if (m.sent_idx == sentence.sent_idx && !m.negative())
          gold.emplace(m.span, corpus.label_name(m.label));
      gold_total += static_cast<Count>(gold.size());

      for (const auto &p : annotator.predict(sentence.tokens)) {
        auto it = gold.find({p.interval, p.event});
        if (it != gold.end()) {
          ++report.per_event[p.event].true_positives;
          gold.erase(it);
        } else {
          ++report.per_event[p.event].false_positives;
        }
      }
      for (const auto &[span, event] : gold)
        ++report.per_event[event].false_negatives;
    }
  }
  if (gold_total == 0) throw_invalid("evaluation corpus has no gold event mentions");
  for (auto &[event, prf] : report.per_event) {
    report.micro.true_positives += prf.true_positives;
    report.micro.false_positives += prf.false_positives;
    report.micro.false_negatives += prf.false_negatives;
    prf.finish();
  }
  report.micro.finish();
  return report;
}

inline EvaluationReport evaluate(const LexiconModel &model, const Corpus &corpus) {
  return evaluate(LexiconAnnotator(model), corpus);
}

// ---------------------------------------------------------------------------
// Model file: one JSON document.

inline nlohmann::ordered_json model_to_json(const LexiconModel &model) {
  nlohmann::ordered_json j;
  j["schema_version"] = kModelSchemaVersion;
  j["source_corpus"] = model.source_corpus;
  j["build_timestamp"] = model.build_timestamp;
  j["max_trigger_tokens"] = model.max_trigger_tokens;
  j["thresholds"] = {{"tau_neg", model.thresholds.tau_neg},
                     {"tau_event", model.thresholds.tau_event}};
  nlohmann::ordered_json entries = nlohmann::ordered_json::object();
  for (const auto &[word, e] : model.entries) {
    nlohmann::ordered_json events = nlohmann::ordered_json::object();
    for (const auto &[name, c] : e.per_event_counts) events[name] = c;
    entries[word] = {{"events", std::move(events)}, {"negative", e.negative_count}};
  }
  j["entries"] = std::move(entries);
  return j;
}

inline LexiconModel model_from_json(const nlohmann::json &j) {
  try {
    if (j.at("schema_version").get<int>() != kModelSchemaVersion)
      throw Error(ErrorCode::kFormatMismatch, "unsupported model schema_version");
    LexiconModel m;
    m.source_corpus = j.at("source_corpus").get<std::string>();
    m.build_timestamp = j.at("build_timestamp").get<std::string>();
    m.max_trigger_tokens = j.at("max_trigger_tokens").get<int>();
    m.thresholds.tau_neg = j.at("thresholds").at("tau_neg").get<double>();
    m.thresholds.tau_event = j.at("thresholds").at("tau_event").get<double>();
    m.thresholds.check();
    int longest = 0;
    for (const auto &[word, e] : j.at("entries").items()) {
      LexiconEntry le;
      for (const auto &[name, c] : e.at("events").items())
        le.per_event_counts[name] = c.get<Count>();
      le.negative_count = e.at("negative").get<Count>();
      if (le.positive_total() <= 0)
        throw Error(ErrorCode::kFormatMismatch,
                    "model entry without positive counts: " + word);
      longest = std::max(longest, token_count(word));
      m.entries.emplace(word, std::move(le));
    }
    if (longest != m.max_trigger_tokens)
      throw Error(ErrorCode::kFormatMismatch,
                  "max_trigger_tokens does not match entries");
    return m;
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kFormatMismatch, std::string("invalid model: ") + e.what());
  }
}

inline void save_model(const LexiconModel &model, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_io("cannot write " + path.string());
  out << model_to_json(model).dump(1) << '\n';
  if (!out) throw_io("write failed: " + path.string());
}

inline LexiconModel load_model(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot open " + path.string());
  try {
    return model_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kFormatMismatch,
                path.string() + ": invalid JSON: " + e.what());
  }
}

}  // namespace edx

#endif  // EDX_ANNOTATOR_HPP
