// Copyright 2026 The Slotforge Authors.
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

#include "seqgen.h"

#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "error.h"
#include "test_util.h"

namespace slotforge {
namespace {

using testing::data_path;

TEST(RenderSource, MatchesTemplate) {
  EXPECT_EQ(render_source("i tested positive today", "who is tested positive?",
                          {"author of the tweet", "not specified"}),
            "context: i tested positive today question: who is tested positive? "
            "choices: author of the tweet ||| not specified");
}

TEST(RenderSource, EmptyChoicesEndWithChoicesField) {
  const std::string s = render_source("ctx", "q?", {});
  EXPECT_EQ(s, "context: ctx question: q? choices: ");
  auto parsed = parse_source(s);
  ASSERT_TRUE(parsed);
  EXPECT_TRUE(parsed->choices.empty());
}

TEST(RenderSource, ContextMayContainDelimiterWords) {
  const std::vector<std::string> choices = {"the author", "not specified"};
  const std::string context =
      "quick question: anyone know choices: for testing? question: where";
  const std::string s = render_source(context, "who is sick?", choices);
  auto parsed = parse_source(s);
  ASSERT_TRUE(parsed);
  EXPECT_EQ(parsed->context, context);
  EXPECT_EQ(parsed->question, "who is sick?");
  EXPECT_EQ(parsed->choices, choices);
}

TEST(RenderSource, RejectsAmbiguousOrEmptyFields) {
  EXPECT_THROW(render_source("", "q", {"a"}), Error);
  EXPECT_THROW(render_source("c", "", {"a"}), Error);
  EXPECT_THROW(render_source("c", "q", {""}), Error);
  EXPECT_THROW(render_source("c", "q", {"a", "b choices: c"}), Error);
  EXPECT_THROW(render_source("c", "q", {"a choices: b"}), Error);
  EXPECT_THROW(render_source("c", "q", {"a ||| b"}), Error);
}

TEST(RenderSource, DelimiterWordsInsideQuestionRoundTrip) {
  const std::string s = render_source("c", "q choices: x", {"a"});
  const auto f = parse_source(s);
  ASSERT_TRUE(f);
  EXPECT_EQ(f->question, "q choices: x");
  EXPECT_EQ(f->choices, std::vector<std::string>{"a"});
}

TEST(ParseSource, RejectsForeignText) {
  EXPECT_FALSE(parse_source("hello"));
  EXPECT_FALSE(parse_source("context: x question: y"));
  EXPECT_FALSE(parse_source("context: x choices: y"));
}

// Fields drawn from fragments that include delimiter words, whitespace and
// non-ASCII text. Every successful render must parse back to its fields, and
// render must succeed whenever question and choices avoid delimiter text.
TEST(RenderSource, RoundTripProperty) {
  const std::vector<std::string> fragments = {
      "a", "question:", "choices:", " ", "|||", "|", "context:", "é", "’", "😷",
      "covid", "?", ".", "\t", "  ", "x y"};
  std::mt19937_64 rng(2024);
  auto field = [&](size_t max_pieces) {
    std::string s;
    const size_t n = 1 + rng() % max_pieces;
    for (size_t i = 0; i < n; ++i) s += fragments[rng() % fragments.size()];
    return s;
  };
  auto has_delimiter_text = [](const std::string& s) {
    const std::string padded = " " + s + " ";
    return padded.find(" question: ") != std::string::npos ||
           padded.find(" choices: ") != std::string::npos ||
           padded.find(" ||| ") != std::string::npos || padded.find("|||") != std::string::npos;
  };
  int rendered = 0;
  for (int trial = 0; trial < 5000; ++trial) {
    const std::string context = field(10);
    const std::string question = field(4);
    std::vector<std::string> choices;
    const size_t nc = rng() % 4;
    for (size_t i = 0; i < nc; ++i) choices.push_back(field(3));
    bool clean = !has_delimiter_text(question);
    for (const auto& c : choices) clean = clean && !has_delimiter_text(c);
    for (const auto& c : choices) clean = clean && c.front() != ' ' && c.back() != ' ';
    clean = clean && question.back() != ' ';
    try {
      const std::string s = render_source(context, question, choices);
      ++rendered;
      auto parsed = parse_source(s);
      ASSERT_TRUE(parsed) << s;
      EXPECT_EQ(parsed->context, context);
      EXPECT_EQ(parsed->question, question);
      EXPECT_EQ(parsed->choices, choices);
    } catch (const Error&) {
      EXPECT_FALSE(clean) << "rejected clean fields: [" << question << "]";
    }
  }
  EXPECT_GT(rendered, 1000);
}

TEST(QuestionBank, DefaultsCoverAllEvents) {
  const auto bank = QuestionBank::defaults();
  EXPECT_TRUE(bank.covers_all());
  EXPECT_EQ(bank.question(EventType::kDeath),
            "Does this tweet report death from coronavirus?");
}

TEST(QuestionBank, OverlayAndStrictLoading) {
  const auto bank = QuestionBank::from_json({{"death", "Did someone die?"}});
  EXPECT_EQ(bank.question(EventType::kDeath), "Did someone die?");
  EXPECT_EQ(bank.question(EventType::kTestedPositive),
            QuestionBank::defaults().question(EventType::kTestedPositive));
  EXPECT_THROW(QuestionBank::from_json({{"death", "Did someone die?"}}, false), Error);
  EXPECT_THROW(QuestionBank::from_json({{"flu", "x"}}), Error);
  EXPECT_THROW(QuestionBank().question(EventType::kDeath), Error);
}

Tweet death_tweet() {
  Tweet t;
  t.id = "d1";
  t.text = "two nurses died";
  t.event = EventType::kDeath;
  t.slots.push_back({"who", "Who is dead?", {"two nurses", "not specified"}, {"two nurses"}});
  return t;
}

TEST(EventExample, TargetsYesForOwnEvent) {
  const auto bank = QuestionBank::defaults();
  const Example ex = build_event_example(death_tweet(), bank);
  EXPECT_EQ(ex.key.kind, ExampleKind::kEvent);
  EXPECT_EQ(ex.target, "yes");
  EXPECT_EQ(ex.candidates, (std::vector<std::string>{"yes", "no"}));
  EXPECT_EQ(ex.source,
            "context: two nurses died question: Does this tweet report death from "
            "coronavirus? choices: yes ||| no");
}

TEST(EventExample, TargetsNoForOtherEvent) {
  const Example ex = build_event_example(death_tweet(), QuestionBank::defaults(),
                                         EventType::kCureAndPrevention);
  EXPECT_EQ(ex.target, "no");
}

TEST(EventExample, AllFiveQuestionsGiveExactlyOneYes) {
  int yes = 0;
  for (EventType e : kAllEvents) {
    yes += build_event_example(death_tweet(), QuestionBank::defaults(), e).target == "yes";
  }
  EXPECT_EQ(yes, 1);
}

TEST(SlotExample, SingleGold) {
  Tweet t;
  t.id = "1";
  t.text = "i tested positive today";
  SlotAnnotation s{"who", "who is tested positive?",
                   {"author of the tweet", "not specified"}, {"author of the tweet"}};
  const Example ex = build_slot_example(t, s);
  EXPECT_EQ(ex.key, (ExampleKey{"1", ExampleKind::kSlot, "who"}));
  EXPECT_EQ(ex.target, "author of the tweet");
  EXPECT_EQ(ex.source, render_source(t.text, s.question, s.candidates));
  EXPECT_EQ(ex.candidates, s.candidates);
}

TEST(SlotExample, EmptyGoldTargetsNullChoice) {
  Tweet t = death_tweet();
  SlotAnnotation s{"where", "Where?", {"Seattle", "not specified"}, {}};
  EXPECT_EQ(build_slot_example(t, s).target, "not specified");
  SlotAnnotation none{"where", "Where?", {"Seattle"}, {}};
  EXPECT_THROW(build_slot_example(t, none), Error);
}

TEST(SlotExample, MultipleGoldJoinInCandidateOrder) {
  Tweet t = death_tweet();
  SlotAnnotation s{"where", "Where?", {"St. Mary's", "Seattle", "Ohio", "not specified"},
                   {"Ohio", "St. Mary's"}};
  EXPECT_EQ(build_slot_example(t, s).target, "St. Mary's ||| Ohio");
}

TEST(BuildAll, FixtureGivesFifteenInCorpusOrder) {
  const Corpus c = load_corpus(data_path("corpus_3x4.jsonl"));
  const auto examples = build_all(c, QuestionBank::defaults());
  ASSERT_EQ(examples.size(), 15u);
  EXPECT_EQ(examples.size(), c.stats().total_examples);
  EXPECT_EQ(examples[0].key.kind, ExampleKind::kEvent);
  EXPECT_EQ(examples[0].key.tweet_id, "1001");
  EXPECT_EQ(examples[1].key.slot_name, "who");
  EXPECT_EQ(examples[5].key.kind, ExampleKind::kEvent);
  EXPECT_EQ(examples[5].key.tweet_id, "1002");
  EXPECT_EQ(examples[4].target, "not specified");  // recent_travel has no gold
  EXPECT_EQ(examples[7].target, "St. Mary's ||| Seattle");
  for (size_t i : {0u, 5u, 10u}) EXPECT_EQ(examples[i].target, "yes");
  EXPECT_EQ(build_all(c, QuestionBank::defaults()), examples);
}

TEST(BuildAll, EmptyCorpus) {
  EXPECT_TRUE(build_all(Corpus(), QuestionBank::defaults()).empty());
}

TEST(BuildAll, AllQuestionsModeAsksFivePerTweet) {
  const Corpus c = load_corpus(data_path("corpus_3x4.jsonl"));
  BuildOptions options;
  options.all_event_questions = true;
  const auto examples = build_all(c, QuestionBank::defaults(), options);
  EXPECT_EQ(examples.size(), 3u * (5 + 4));
  for (const auto& tweet : c.tweets()) {
    int yes = 0;
    for (const auto& ex : examples) {
      if (ex.key.tweet_id == tweet.id && ex.key.kind == ExampleKind::kEvent) {
        yes += ex.target == "yes";
      }
    }
    EXPECT_EQ(yes, 1) << tweet.id;
  }
}

TEST(ProfileLengths, CountsWhitespaceTokens) {
  EXPECT_EQ(proxy_token_count("a b c"), 3u);
  EXPECT_EQ(proxy_token_count("  a\tb\n"), 2u);
  EXPECT_EQ(proxy_token_count(""), 0u);
  EXPECT_EQ(profile_lengths({}), LengthProfile{});
}

TEST(ProfileLengths, HandCountedFixture) {
  Example shorter;
  shorter.source = render_source("a b", "who?", {"x", "not specified"});
  shorter.target = "x";
  Example longest;
  // context: a b c question: who is it? choices: x y ||| z w ||| not specified
  //    1     3        1        3          1       8               = 17
  longest.source = render_source("a b c", "who is it?", {"x y", "z w", "not specified"});
  longest.target = "x y ||| z w";
  const std::vector<Example> examples = {shorter, longest};
  const LengthProfile p = profile_lengths(examples);
  EXPECT_EQ(p.max_source_tokens, 17u);
  EXPECT_EQ(p.max_target_tokens, 5u);
  EXPECT_EQ(p.sources_over_cap, 0u);
}

TEST(ProfileLengths, MergeIsMonotone) {
  LengthProfile a{10, 2, 0, 0};
  const LengthProfile b{7, 9, 1, 0};
  a.merge(b);
  EXPECT_EQ(a, (LengthProfile{10, 9, 1, 0}));
}

TEST(ExamplesFile, RoundTrip) {
  const Corpus c = load_corpus(data_path("corpus_3x4.jsonl"));
  const auto examples = build_all(c, QuestionBank::defaults());
  std::ostringstream out;
  write_examples(examples, out);
  std::istringstream in(out.str());
  EXPECT_EQ(parse_examples(in), examples);
  const std::string first = out.str().substr(0, out.str().find('\n'));
  EXPECT_NE(first.find(R"("slot_name":null)"), std::string::npos) << first;
}

TEST(ExamplesFile, RejectsUnknownKind) {
  std::istringstream in(
      R"({"key": {"tweet_id": "1", "kind": "other", "slot_name": null}, "source": "s", "target": "t", "candidates": []})");
  EXPECT_THROW(parse_examples(in), Error);
}

}  // namespace
}  // namespace slotforge
