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

#include <random>

#include <gtest/gtest.h>

#include "edx/model.hpp"
#include "fixtures.hpp"

namespace edx {
namespace {

Corpus one_doc() {
  testing::CorpusBuilder b;
  int s = b.sentence("d1", {"The", "Storm", "hit", "."});
  b.mention("d1", s, {1, 2}, "Catastrophe");
  b.mention("d1", s, {2, 3}, "");
  return b.build();
}

TEST(NormalizeTrigger, CaseFold) { EXPECT_EQ(normalize_trigger("Storm"), "storm"); }

TEST(NormalizeTrigger, CollapsesWhitespace) {
  EXPECT_EQ(normalize_trigger("Set  Up"), "set up");
  EXPECT_EQ(normalize_trigger("  set\t\nup "), "set up");
}

TEST(NormalizeTrigger, NoStemming) {
  EXPECT_EQ(normalize_trigger("buildings"), "buildings");
}

TEST(NormalizeTrigger, EmptyIsInvalid) {
  EXPECT_THROW(normalize_trigger(""), Error);
  EXPECT_THROW(normalize_trigger("   "), Error);
  try {
    normalize_trigger("");
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(NormalizeTrigger, Idempotent) {
  std::mt19937 rng(7);
  const std::string alphabet = "aBc Z\t\n-x";
  for (int i = 0; i < 500; ++i) {
    std::string s;
    int len = std::uniform_int_distribution<int>(1, 12)(rng);
    for (int j = 0; j < len; ++j)
      s.push_back(alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)]);
    bool blank = s.find_first_not_of(" \t\n") == std::string::npos;
    if (blank) continue;
    std::string once = normalize_trigger(s);
    EXPECT_EQ(normalize_trigger(once), once) << "input '" << s << "'";
  }
}

TEST(Validate, WellFormedCorpusIsEmpty) { EXPECT_TRUE(validate(one_doc()).empty()); }

TEST(Validate, ReversedSpan) {
  Corpus c = one_doc();
  c.documents[0].mentions[0].span = {3, 2};
  auto report = validate(c);
  ASSERT_EQ(report.size(), 1u);
  EXPECT_EQ(report[0].message, "span start >= end");
  EXPECT_EQ(report[0].doc_id, "d1");
  EXPECT_EQ(report[0].mention_id, c.documents[0].mentions[0].mention_id);
}

TEST(Validate, UnknownEventType) {
  Corpus c = one_doc();
  c.documents[0].mentions[0].label = 999;
  auto report = validate(c);
  ASSERT_EQ(report.size(), 1u);
  EXPECT_EQ(report[0].message.rfind("unknown event type", 0), 0u);
}

TEST(Validate, SurfaceMustMatchTokens) {
  Corpus c = one_doc();
  c.documents[0].mentions[0].surface = "Rain";
  auto report = validate(c);
  ASSERT_EQ(report.size(), 1u);
  EXPECT_EQ(report[0].message, "surface does not match sentence tokens");
}

TEST(Validate, DuplicateSpanAndLabel) {
  Corpus c = one_doc();
  Mention dup = c.documents[0].mentions[0];
  dup.mention_id = "other";
  c.documents[0].mentions.push_back(dup);
  auto report = validate(c);
  ASSERT_EQ(report.size(), 1u);
  EXPECT_EQ(report[0].message, "duplicate (span, label) in sentence");
}

TEST(Validate, SameSpanDifferentLabelIsAllowed) {
  Corpus c = one_doc();
  Mention neg = c.documents[0].mentions[0];
  neg.mention_id = "neg";
  neg.label = kNegative;
  c.documents[0].mentions.push_back(neg);
  EXPECT_TRUE(validate(c).empty());
}

TEST(Validate, StructuralViolations) {
  Corpus c = one_doc();
  c.documents.push_back(c.documents[0]);  // duplicate doc id
  c.event_types.push_back({0, "Zero"});
  c.event_types.push_back({7, "Negative Trigger"});
  c.documents[0].sentences[0].sent_idx = 4;
  c.documents[0].mentions[1].sent_idx = 9;
  auto report = validate(c);
  std::set<std::string> messages;
  for (const auto &v : report) messages.insert(v.message);
  EXPECT_TRUE(messages.count("duplicate doc_id"));
  EXPECT_TRUE(messages.count("event type id must be >= 1: Zero"));
  EXPECT_TRUE(messages.count("reserved event type name Negative Trigger"));
  EXPECT_TRUE(messages.count("sent_idx not contiguous at 0"));
  EXPECT_TRUE(messages.count("unknown sentence 9"));
}

TEST(Validate, OutOfBoundsSpan) {
  Corpus c = one_doc();
  c.documents[0].mentions[0].span = {2, 9};
  auto report = validate(c);
  ASSERT_EQ(report.size(), 1u);
  EXPECT_EQ(report[0].message, "span out of sentence bounds");
  EXPECT_THROW(require_valid(c), Error);
}

TEST(Validate, SurfaceRoundTripsOnRandomCorpora) {
  std::mt19937 rng(11);
  for (int i = 0; i < 200; ++i) {
    Corpus c = testing::random_corpus(rng);
    ASSERT_TRUE(validate(c).empty());
    for (const auto &d : c.documents)
      for (const auto &m : d.mentions) {
        const auto &tokens = d.sentences[static_cast<std::size_t>(m.sent_idx)].tokens;
        EXPECT_EQ(m.surface, join_tokens(tokens, m.span));
      }
  }
}

TEST(Corpus, LabelNames) {
  Corpus c = one_doc();
  EXPECT_EQ(c.label_name(kNegative), "Negative Trigger");
  EXPECT_EQ(c.label_name(1), "Catastrophe");
  EXPECT_EQ(c.mention_count(), 2u);
}

}  // namespace
}  // namespace edx
