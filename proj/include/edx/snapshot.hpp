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

// Snapshot file: a corpus together with its TriggerIndex, so the service
// and the report commands start without re-parsing raw data.
//
// Layout: the 8-byte magic "EDXSNAP\n" followed by one CBOR document
//   {format: "edx-snapshot", version, corpus: {header, documents},
//    index: {corpus_name, event_types, totals, triggers, events}}.
// Documents use the unified record encoding. Loading re-validates the
// corpus and checks the stored index against a rebuild.

#ifndef EDX_SNAPSHOT_HPP
#define EDX_SNAPSHOT_HPP

#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "edx/error.hpp"
#include "edx/index.hpp"
#include "edx/ingest.hpp"
#include "edx/model.hpp"

namespace edx {

inline constexpr std::string_view kSnapshotMagic = "EDXSNAP\n";
inline constexpr int kSnapshotVersion = 1;

struct Snapshot {
  Corpus corpus;
  TriggerIndex index;

  friend bool operator==(const Snapshot &, const Snapshot &) = default;
};

inline Snapshot make_snapshot(Corpus corpus) {
  Snapshot s;
  s.index = build_index(corpus);
  s.corpus = std::move(corpus);
  return s;
}

namespace detail {

using nlohmann::json;

inline json ref_json(const InstanceRef &r) {
  return json::array({r.doc_id, r.sent_idx, r.start, r.mention_id, r.label});
}

inline InstanceRef ref_from(const json &j) {
  return {j.at(0).get<std::string>(), j.at(1).get<int>(), j.at(2).get<int>(),
          j.at(3).get<std::string>(), j.at(4).get<TypeId>()};
}

inline json refs_json(const std::vector<InstanceRef> &refs) {
  json out = json::array();
  for (const auto &r : refs) out.push_back(ref_json(r));
  return out;
}

inline std::vector<InstanceRef> refs_from(const json &j) {
  std::vector<InstanceRef> out;
  out.reserve(j.size());
  for (const auto &r : j) out.push_back(ref_from(r));
  return out;
}

inline json index_json(const TriggerIndex &index) {
  json types = json::array();
  for (const auto &t : index.event_types) types.push_back({t.type_id, t.name});
  json triggers = json::array();
  for (const auto &[word, e] : index.by_trigger) {
    json counts = json::array();
    for (const auto &[id, c] : e.per_event_counts) counts.push_back({id, c});
    json refs = json::array();
    for (const auto &[id, list] : e.instance_refs)
      refs.push_back({id, refs_json(list)});
    triggers.push_back({word, counts, e.negative_count, refs});
  }
  json events = json::array();
  for (const auto &[id, e] : index.by_event) {
    json counts = json::array();
    for (const auto &[word, c] : e.trigger_counts) counts.push_back({word, c});
    events.push_back({id, e.event.name, e.mention_count, counts,
                      refs_json(e.instance_refs)});
  }
  return {{"corpus_name", index.corpus_name},
          {"event_types", types},
          {"totals",
           {index.totals.candidate_triggers, index.totals.positive_triggers,
            index.totals.annotated_instances, index.totals.negative_instances}},
          {"triggers", triggers},
          {"events", events}};
}

inline TriggerIndex index_from(const json &j) {
  TriggerIndex index;
  index.corpus_name = j.at("corpus_name").get<std::string>();
  for (const auto &t : j.at("event_types"))
    index.event_types.push_back({t.at(0).get<TypeId>(), t.at(1).get<std::string>()});
  const json &totals = j.at("totals");
  index.totals = {totals.at(0).get<Count>(), totals.at(1).get<Count>(),
                  totals.at(2).get<Count>(), totals.at(3).get<Count>()};
  for (const auto &t : j.at("triggers")) {
    TriggerEntry e;
    e.normalized = t.at(0).get<std::string>();
    for (const auto &c : t.at(1))
      e.per_event_counts[c.at(0).get<TypeId>()] = c.at(1).get<Count>();
    e.negative_count = t.at(2).get<Count>();
    for (const auto &r : t.at(3))
      e.instance_refs[r.at(0).get<TypeId>()] = refs_from(r.at(1));
    index.by_trigger.emplace(e.normalized, std::move(e));
  }
  for (const auto &ev : j.at("events")) {
    EventEntry e;
    e.event = {ev.at(0).get<TypeId>(), ev.at(1).get<std::string>()};
    e.mention_count = ev.at(2).get<Count>();
    for (const auto &c : ev.at(3))
      e.trigger_counts[c.at(0).get<std::string>()] = c.at(1).get<Count>();
    e.instance_refs = refs_from(ev.at(4));
    index.by_event.emplace(e.event.type_id, std::move(e));
  }
  return index;
}

inline json corpus_json(const Corpus &corpus) {
  json docs = json::array();
  for (const auto &doc : corpus.documents)
    docs.push_back(json(unified_record(corpus, doc)));
  return {{"header", json(unified_header(corpus))}, {"documents", std::move(docs)}};
}

inline Corpus corpus_from(const json &j) {
  const json &header = j.at("header");
  Corpus corpus;
  TypeTable types(true);
  read_unified_header(header, "snapshot", corpus, types);
  corpus.event_types = types.types();
  for (const auto &rec : j.at("documents")) {
    try {
      corpus.documents.push_back(parse_unified(rec, types).doc);
    } catch (const RecordError &e) {
      throw Error(ErrorCode::kFormatMismatch, "snapshot document: " + e.reason);
    }
  }
  return corpus;
}

}  // namespace detail

inline std::vector<std::uint8_t> encode_snapshot(const Snapshot &snapshot) {
  nlohmann::json doc = {{"format", "edx-snapshot"},
                        {"version", kSnapshotVersion},
                        {"corpus", detail::corpus_json(snapshot.corpus)},
                        {"index", detail::index_json(snapshot.index)}};
  std::vector<std::uint8_t> bytes(kSnapshotMagic.begin(), kSnapshotMagic.end());
  nlohmann::json::to_cbor(doc, bytes);
  return bytes;
}

inline Snapshot decode_snapshot(const std::vector<std::uint8_t> &bytes) {
  if (bytes.size() < kSnapshotMagic.size() ||
      !std::equal(kSnapshotMagic.begin(), kSnapshotMagic.end(), bytes.begin()))
    throw Error(ErrorCode::kFormatMismatch, "not an edx snapshot (bad magic)");
  Snapshot s;
  try {
    nlohmann::json doc = nlohmann::json::from_cbor(
        bytes.begin() + static_cast<std::ptrdiff_t>(kSnapshotMagic.size()),
        bytes.end());
    if (doc.at("format") != "edx-snapshot")
      throw Error(ErrorCode::kFormatMismatch, "not an edx snapshot");
    if (doc.at("version").get<int>() != kSnapshotVersion)
      throw Error(ErrorCode::kFormatMismatch,
                  "unsupported snapshot version " + doc.at("version").dump());
    s.corpus = detail::corpus_from(doc.at("corpus"));
    s.index = detail::index_from(doc.at("index"));
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kFormatMismatch, std::string("corrupt snapshot: ") + e.what());
  }
  require_valid(s.corpus);
  if (!(build_index(s.corpus) == s.index))
    throw Error(ErrorCode::kFormatMismatch, "snapshot index does not match its corpus");
  return s;
}

inline void save_snapshot(const Snapshot &snapshot, const std::filesystem::path &path) {
  std::vector<std::uint8_t> bytes = encode_snapshot(snapshot);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_io("cannot write " + path.string());
  out.write(reinterpret_cast<const char *>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw_io("write failed: " + path.string());
}

inline Snapshot load_snapshot(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw_io("read failed: " + path.string());
  return decode_snapshot(bytes);
}

}  // namespace edx

#endif  // EDX_SNAPSHOT_HPP
