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

// Dataset readers. Every supported format is line-delimited JSON, one
// record per line:
//
//   unified  line 1 is a header {schema_version, name, domain, event_types};
//            each further line is {doc_id, title, topic?, sentences,
//            mentions: [{id, sent, start, end, type_name}]} with type_name
//            "NEGATIVE" for negative triggers.
//   maven    the public MAVEN release: {id, title, content: [{tokens}],
//            events: [{type, type_id, mention: [{id, sent_id, offset}]}],
//            negative_triggers: [{id, sent_id, offset}]}. Records without
//            events/negative_triggers (test split) load with no mentions.
//   rams     {doc_key, sentences, evt_triggers: [[first, last, [[type, p]]]]}
//            with inclusive document-level token offsets.
//   aldg     {id, tokens, trigger: [start, end), event_type, title?, topic?};
//            one single-sentence document per record.
//
// Malformed records are skipped and counted; more than 10% malformed
// records fails the whole file.

#ifndef EDX_INGEST_HPP
#define EDX_INGEST_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "edx/error.hpp"
#include "edx/model.hpp"

namespace edx {

inline constexpr int kUnifiedSchemaVersion = 1;

enum class Format { kMaven, kRams, kAldg, kUnified };

inline Format parse_format(std::string_view name) {
  if (name == "maven") return Format::kMaven;
  if (name == "rams") return Format::kRams;
  if (name == "aldg") return Format::kAldg;
  if (name == "unified") return Format::kUnified;
  throw_invalid("unsupported format: " + std::string(name));
}

inline std::string_view format_name(Format f) {
  switch (f) {
    case Format::kMaven: return "maven";
    case Format::kRams: return "rams";
    case Format::kAldg: return "aldg";
    case Format::kUnified: return "unified";
  }
  return "unknown";
}

struct SkippedRecord {
  std::size_t line = 0;
  std::string reason;

  friend bool operator==(const SkippedRecord &, const SkippedRecord &) =
      default;
};

struct IngestStats {
  std::size_t records = 0;
  std::size_t documents = 0;
  std::size_t sentences = 0;
  std::size_t event_types = 0;
  std::size_t event_mentions = 0;
  std::size_t negative_mentions = 0;
  std::size_t unlabeled_documents = 0;
  std::size_t skipped_records = 0;
  std::vector<SkippedRecord> skipped;

  friend bool operator==(const IngestStats &, const IngestStats &) = default;
};

struct IngestResult {
  Corpus corpus;
  IngestStats stats;
};

namespace detail {

using nlohmann::json;

// Thrown inside a record parser; turns into a skipped record.
struct RecordError {
  std::string reason;
};

[[noreturn]] inline void bad_record(std::string reason) {
  throw RecordError{std::move(reason)};
}

inline const json &field(const json &obj, const char *key) {
  auto it = obj.find(key);
  if (it == obj.end()) bad_record(std::string("missing field '") + key + "'");
  return *it;
}

inline std::string string_field(const json &obj, const char *key) {
  const json &v = field(obj, key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  bad_record(std::string("field '") + key + "' is not a string");
}

inline int int_value(const json &v, const char *what) {
  if (!v.is_number_integer()) bad_record(std::string(what) + " is not an integer");
  return v.get<int>();
}

inline std::optional<std::string> optional_string(const json &obj,
                                                  const char *key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string())
    bad_record(std::string("field '") + key + "' is not a string");
  return it->get<std::string>();
}

inline std::vector<std::string> token_list(const json &v) {
  if (!v.is_array()) bad_record("token list is not an array");
  std::vector<std::string> tokens;
  tokens.reserve(v.size());
  for (const auto &t : v) {
    if (!t.is_string()) bad_record("token is not a string");
    tokens.push_back(t.get<std::string>());
  }
  return tokens;
}

// Maps event type names to ids while reading. Formats that carry explicit
// ids pin them; the rest are numbered by sorted name once reading is done.
class TypeTable {
 public:
  explicit TypeTable(bool explicit_ids) : explicit_ids_(explicit_ids) {}

  void declare(const std::string &name, TypeId id) {
    if (name.empty()) bad_record("empty event type name");
    if (name == kNegativeTag || name == kNegativeName)
      bad_record("reserved event type name " + name);
    if (id < 1) bad_record("event type id must be >= 1");
    auto by_name = ids_.find(name);
    if (by_name != ids_.end()) {
      if (by_name->second != id)
        bad_record("event type " + name + " has conflicting ids");
      return;
    }
    for (const auto &[other, other_id] : ids_)
      if (other_id == id)
        bad_record("event type id " + std::to_string(id) +
                   " used by both " + other + " and " + name);
    ids_.emplace(name, id);
  }

  // Resolves a name for a mention, registering it when ids are implicit.
  TypeId resolve(const std::string &name) {
    if (name == kNegativeTag) return kNegative;
    auto it = ids_.find(name);
    if (it != ids_.end()) return it->second;
    if (explicit_ids_) bad_record("undeclared event type " + name);
    if (name.empty() || name == kNegativeName)
      bad_record("invalid event type name '" + name + "'");
    TypeId id = static_cast<TypeId>(ids_.size()) + 1;
    ids_.emplace(name, id);
    return id;
  }

  // Renumbers implicit ids by name order and returns old id -> new id.
  std::map<TypeId, TypeId> finalize() {
    std::map<TypeId, TypeId> remap;
    if (explicit_ids_) return remap;
    TypeId next = 1;
    for (auto &[name, id] : ids_) {  // std::map iterates in name order
      remap[id] = next;
      id = next++;
    }
    return remap;
  }

  std::vector<EventType> types() const {
    std::vector<EventType> out;
    for (const auto &[name, id] : ids_) out.push_back({id, name});
    std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
      return a.type_id < b.type_id;
    });
    return out;
  }

  bool explicit_ids() const { return explicit_ids_; }

 private:
  bool explicit_ids_;
  std::map<std::string, TypeId> ids_;
};

inline Document new_document(std::string doc_id, std::string title,
                             std::optional<std::string> topic,
                             const std::vector<std::vector<std::string>> &sents) {
  Document doc;
  doc.doc_id = std::move(doc_id);
  doc.title = std::move(title);
  doc.topic = std::move(topic);
  for (std::size_t i = 0; i < sents.size(); ++i)
    doc.sentences.push_back({doc.doc_id, static_cast<int>(i), sents[i]});
  return doc;
}

inline void add_mention(Document &doc, std::string id, int sent, Span span,
                        TypeId label) {
  if (sent < 0 || sent >= static_cast<int>(doc.sentences.size()))
    bad_record("mention " + id + " references unknown sentence " +
               std::to_string(sent));
  const Sentence &s = doc.sentences[static_cast<std::size_t>(sent)];
  if (span.start < 0 || span.start >= span.end ||
      span.end > static_cast<int>(s.tokens.size()))
    bad_record("mention " + id + " has invalid span [" +
               std::to_string(span.start) + "," + std::to_string(span.end) +
               ")");
  doc.mentions.push_back(make_mention(std::move(id), s, span, label));
}

inline Span offset_pair(const json &v) {
  if (!v.is_array() || v.size() != 2) bad_record("offset is not a pair");
  return {int_value(v[0], "offset"), int_value(v[1], "offset")};
}

struct Parsed {
  Document doc;
  bool unlabeled = false;
};

inline Parsed parse_unified(const json &rec, TypeTable &types) {
  Parsed out;
  std::vector<std::vector<std::string>> sents;
  const json &js = field(rec, "sentences");
  if (!js.is_array()) bad_record("sentences is not an array");
  for (const auto &s : js) sents.push_back(token_list(s));
  out.doc = new_document(string_field(rec, "doc_id"),
                         rec.contains("title") ? string_field(rec, "title") : "",
                         optional_string(rec, "topic"), sents);
  const json &ms = field(rec, "mentions");
  if (!ms.is_array()) bad_record("mentions is not an array");
  for (const auto &m : ms) {
    TypeId label = types.resolve(string_field(m, "type_name"));
    add_mention(out.doc, string_field(m, "id"), int_value(field(m, "sent"), "sent"),
                {int_value(field(m, "start"), "start"),
                 int_value(field(m, "end"), "end")},
                label);
  }
  return out;
}

inline Parsed parse_maven(const json &rec, TypeTable &types) {
  Parsed out;
  std::vector<std::vector<std::string>> sents;
  const json &content = field(rec, "content");
  if (!content.is_array()) bad_record("content is not an array");
  for (const auto &s : content) sents.push_back(token_list(field(s, "tokens")));
  out.doc = new_document(string_field(rec, "id"),
                         rec.contains("title") ? string_field(rec, "title") : "",
                         optional_string(rec, "topic"), sents);
  bool has_events = rec.contains("events");
  bool has_negatives = rec.contains("negative_triggers");
  out.unlabeled = !has_events && !has_negatives;
  if (has_events) {
    const json &events = rec["events"];
    if (!events.is_array()) bad_record("events is not an array");
    for (const auto &ev : events) {
      std::string type = string_field(ev, "type");
      TypeId label;
      if (ev.contains("type_id")) {
        label = int_value(ev["type_id"], "type_id");
        types.declare(type, label);
      } else {
        label = types.resolve(type);
      }
      const json &mentions = field(ev, "mention");
      if (!mentions.is_array()) bad_record("mention is not an array");
      for (const auto &m : mentions)
        add_mention(out.doc, string_field(m, "id"),
                    int_value(field(m, "sent_id"), "sent_id"),
                    offset_pair(field(m, "offset")), label);
    }
  }
  if (has_negatives) {
    const json &negs = rec["negative_triggers"];
    if (!negs.is_array()) bad_record("negative_triggers is not an array");
    for (const auto &m : negs)
      add_mention(out.doc, string_field(m, "id"),
                  int_value(field(m, "sent_id"), "sent_id"),
                  offset_pair(field(m, "offset")), kNegative);
  }
  return out;
}

inline Parsed parse_rams(const json &rec, TypeTable &types) {
  Parsed out;
  std::vector<std::vector<std::string>> sents;
  const json &js = field(rec, "sentences");
  if (!js.is_array()) bad_record("sentences is not an array");
  for (const auto &s : js) sents.push_back(token_list(s));
  std::string key = string_field(rec, "doc_key");
  out.doc = new_document(key, key, optional_string(rec, "topic"), sents);

  const json &triggers = field(rec, "evt_triggers");
  if (!triggers.is_array()) bad_record("evt_triggers is not an array");
  for (std::size_t i = 0; i < triggers.size(); ++i) {
    const json &t = triggers[i];
    if (!t.is_array() || t.size() < 3 || !t[2].is_array() || t[2].empty() ||
        !t[2][0].is_array() || t[2][0].empty())
      bad_record("malformed evt_trigger");
    int first = int_value(t[0], "trigger start");
    int last = int_value(t[1], "trigger end");
    TypeId label = types.resolve(t[2][0][0].is_string()
                                     ? t[2][0][0].get<std::string>()
                                     : std::string());
    // Convert the document-level inclusive span to a sentence-local one.
    int offset = 0;
    int sent = -1;
    for (std::size_t s = 0; s < sents.size(); ++s) {
      int len = static_cast<int>(sents[s].size());
      if (first >= offset && first < offset + len) {
        sent = static_cast<int>(s);
        break;
      }
      offset += len;
    }
    if (sent < 0) bad_record("trigger offset outside document");
    add_mention(out.doc, key + "-t" + std::to_string(i), sent,
                {first - offset, last + 1 - offset}, label);
  }
  return out;
}

inline Parsed parse_aldg(const json &rec, TypeTable &types) {
  Parsed out;
  std::vector<std::vector<std::string>> sents{token_list(field(rec, "tokens"))};
  std::string id = string_field(rec, "id");
  out.doc = new_document(id, rec.contains("title") ? string_field(rec, "title") : "",
                         optional_string(rec, "topic"), sents);
  TypeId label = types.resolve(string_field(rec, "event_type"));
  add_mention(out.doc, id + "-t0", 0, offset_pair(field(rec, "trigger")), label);
  return out;
}

inline void read_unified_header(const json &rec, const std::string &source,
                                Corpus &corpus, TypeTable &types) {
  try {
    int version = int_value(rec["schema_version"], "schema_version");
    if (version != kUnifiedSchemaVersion)
      bad_record("unsupported schema_version " + std::to_string(version));
    if (rec.contains("name")) corpus.name = string_field(rec, "name");
    if (rec.contains("domain")) corpus.domain = string_field(rec, "domain");
    if (rec.contains("event_types")) {
      const json &list = rec["event_types"];
      if (!list.is_array()) bad_record("event_types is not an array");
      TypeTable declared(true);
      for (const auto &t : list)
        declared.declare(string_field(t, "name"),
                         int_value(field(t, "type_id"), "type_id"));
      types = std::move(declared);
    }
  } catch (const RecordError &e) {
    throw Error(ErrorCode::kFormatMismatch,
                source + ": invalid unified header: " + e.reason);
  }
}

inline void relabel(Corpus &corpus, const std::map<TypeId, TypeId> &remap) {
  if (remap.empty()) return;
  for (auto &doc : corpus.documents)
    for (auto &m : doc.mentions)
      if (m.label != kNegative) m.label = remap.at(m.label);
}

}  // namespace detail

// Parses `input` line by line. `source` names the stream in error messages
// and provides the default corpus name.
inline IngestResult ingest_stream(std::istream &input, Format format,
                                  const std::string &source) {
  using detail::json;
  IngestResult result;
  Corpus &corpus = result.corpus;
  IngestStats &stats = result.stats;
  corpus.name = std::filesystem::path(source).stem().string();
  corpus.domain = "";

  detail::TypeTable types(format == Format::kMaven);
  std::set<std::string> doc_ids;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::optional<SkippedRecord> first_bad;

  while (std::getline(input, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (std::all_of(line.begin(), line.end(), is_space)) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception &e) {
      ++stats.records;
      SkippedRecord bad{line_no, std::string("invalid JSON: ") + e.what()};
      if (!first_bad) first_bad = bad;
      stats.skipped.push_back(std::move(bad));
      continue;
    }

    if (format == Format::kUnified && !header_seen && stats.records == 0 &&
        rec.is_object() && rec.contains("schema_version")) {
      header_seen = true;
      read_unified_header(rec, source, corpus, types);
      continue;
    }

    ++stats.records;
    try {
      if (!rec.is_object()) detail::bad_record("record is not a JSON object");
      detail::TypeTable scratch = types;
      detail::Parsed parsed;
      switch (format) {
        case Format::kUnified: parsed = detail::parse_unified(rec, scratch); break;
        case Format::kMaven: parsed = detail::parse_maven(rec, scratch); break;
        case Format::kRams: parsed = detail::parse_rams(rec, scratch); break;
        case Format::kAldg: parsed = detail::parse_aldg(rec, scratch); break;
      }
      if (doc_ids.count(parsed.doc.doc_id))
        detail::bad_record("duplicate doc_id " + parsed.doc.doc_id);

      // Record-local invariants; types are checked once the table is final.
      Corpus probe;
      probe.event_types = scratch.types();
      ValidationReport report;
      validate_document(probe, parsed.doc, report);
      if (!report.empty())
        detail::bad_record(report.front().message +
                           (report.front().mention_id.empty()
                                ? ""
                                : " (mention " + report.front().mention_id + ")"));

      types = std::move(scratch);
      doc_ids.insert(parsed.doc.doc_id);
      if (parsed.unlabeled) ++stats.unlabeled_documents;
      corpus.documents.push_back(std::move(parsed.doc));
    } catch (const detail::RecordError &e) {
      SkippedRecord bad{line_no, e.reason};
      if (!first_bad) first_bad = bad;
      stats.skipped.push_back(std::move(bad));
    } catch (const json::exception &e) {
      SkippedRecord bad{line_no, std::string("invalid record: ") + e.what()};
      if (!first_bad) first_bad = bad;
      stats.skipped.push_back(std::move(bad));
    }
  }
  if (input.bad()) throw_io(source + ": read error");

  stats.skipped_records = stats.skipped.size();
  if (stats.skipped_records * 10 > stats.records)
    throw Error(ErrorCode::kFormatMismatch,
                source + ": " + std::to_string(stats.skipped_records) + " of " +
                    std::to_string(stats.records) + " records malformed for format " +
                    std::string(format_name(format)) + "; first at line " +
                    std::to_string(first_bad->line) + ": " + first_bad->reason);

  detail::relabel(corpus, types.finalize());
  corpus.event_types = types.types();

  stats.documents = corpus.documents.size();
  stats.event_types = corpus.event_types.size();
  for (const auto &doc : corpus.documents) {
    stats.sentences += doc.sentences.size();
    for (const auto &m : doc.mentions)
      ++(m.negative() ? stats.negative_mentions : stats.event_mentions);
  }
  require_valid(corpus);
  return result;
}

inline IngestResult ingest(const std::filesystem::path &path, Format format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot open " + path.string());
  return ingest_stream(in, format, path.string());
}

inline nlohmann::ordered_json unified_header(const Corpus &corpus) {
  nlohmann::ordered_json header;
  header["schema_version"] = kUnifiedSchemaVersion;
  header["name"] = corpus.name;
  header["domain"] = corpus.domain;
  nlohmann::ordered_json types = nlohmann::ordered_json::array();
  for (const auto &t : corpus.event_types)
    types.push_back({{"type_id", t.type_id}, {"name", t.name}});
  header["event_types"] = std::move(types);
  return header;
}

inline nlohmann::ordered_json unified_record(const Corpus &corpus,
                                             const Document &doc) {
  nlohmann::ordered_json rec;
  rec["doc_id"] = doc.doc_id;
  rec["title"] = doc.title;
  if (doc.topic) rec["topic"] = *doc.topic;
  nlohmann::ordered_json sents = nlohmann::ordered_json::array();
  for (const auto &s : doc.sentences) sents.push_back(s.tokens);
  rec["sentences"] = std::move(sents);
  nlohmann::ordered_json mentions = nlohmann::ordered_json::array();
  for (const auto &m : doc.mentions) {
    const EventType *t = corpus.find_type(m.label);
    mentions.push_back({{"id", m.mention_id},
                        {"sent", m.sent_idx},
                        {"start", m.span.start},
                        {"end", m.span.end},
                        {"type_name", t ? t->name : std::string(kNegativeTag)}});
  }
  rec["mentions"] = std::move(mentions);
  return rec;
}

// Writes the header line plus one record per document. Returns the number
// of document records written.
inline std::size_t export_unified(const Corpus &corpus, std::ostream &out) {
  require_valid(corpus);
  out << unified_header(corpus).dump() << '\n';
  for (const auto &doc : corpus.documents)
    out << unified_record(corpus, doc).dump() << '\n';
  return corpus.documents.size();
}

inline std::size_t export_unified(const Corpus &corpus,
                                  const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_io("cannot write " + path.string());
  std::size_t n = export_unified(corpus, out);
  out.flush();
  if (!out) throw_io("write failed: " + path.string());
  return n;
}

}  // namespace edx

#endif  // EDX_INGEST_HPP
