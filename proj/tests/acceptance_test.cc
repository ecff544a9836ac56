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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "corpus.h"
#include "editdist.h"
#include "metrics.h"
#include "oracles.h"
#include "predict.h"
#include "seqgen.h"
#include "test_util.h"

namespace slotforge {
namespace {

using testing::data_path;
using testing::slurp;
using testing::TempDir;

// Collects failure messages for one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++count_;
  }
  bool ok() const { return count_ == 0; }
  std::string summary() const {
    std::string s = std::to_string(count_) + " failure(s)";
    for (const auto& f : failures_) s += "; " + f;
    return s;
  }

 private:
  std::vector<std::string> failures_;
  size_t count_ = 0;
};

struct Outcome {
  bool pass;
  std::string detail;
};

std::u32string random_string(std::mt19937_64& rng, const std::u32string& alphabet,
                             size_t max_len) {
  std::u32string s;
  for (size_t n = rng() % (max_len + 1); n > 0; --n) s += alphabet[rng() % alphabet.size()];
  return s;
}

std::string utf8(const std::u32string& s) { return to_utf8(s); }

// 1. Levenshtein agrees with the recursive oracle (and the edit-graph BFS)
// on every pair of strings of length <= 5 over {a,b,c}, and on 10,000 random
// pairs of length <= 12.
Outcome levenshtein_oracle() {
  Check check;
  const testing::EditGraphOracle graph("abc", 5);
  const auto& strings = graph.strings();
  size_t pairs = 0;
  for (const auto& a : strings) {
    const auto bfs = graph.distances_from(a);
    const std::u32string ua = to_scalars(a);
    for (const auto& b : strings) {
      const std::u32string ub = to_scalars(b);
      const size_t got = levenshtein(ua, ub);
      check.expect(got == testing::recursive_levenshtein(ua, ub),
                   "recursive oracle mismatch on (" + a + ", " + b + ")");
      check.expect(got == bfs[graph.id(b)], "edit-graph mismatch on (" + a + ", " + b + ")");
      ++pairs;
    }
  }
  std::mt19937_64 rng(20201);
  const std::u32string alphabet = U"abcdxyz é’";
  for (int i = 0; i < 10000; ++i) {
    const auto a = random_string(rng, alphabet, 12);
    const auto b = random_string(rng, alphabet, 12);
    check.expect(levenshtein(a, b) == testing::recursive_levenshtein(a, b),
                 "random pair mismatch on (" + utf8(a) + ", " + utf8(b) + ")");
  }
  return {check.ok(), check.ok() ? std::to_string(pairs) + " enumerated pairs + 10000 random"
                                 : check.summary()};
}

// 2. Non-negativity, symmetry, identity of indiscernibles and the triangle
// inequality on random triples.
Outcome metric_axioms() {
  Check check;
  std::mt19937_64 rng(777);
  const std::u32string alphabet = U"abc d’😷";
  for (int i = 0; i < 10000; ++i) {
    const auto x = random_string(rng, alphabet, 10);
    const auto y = (i % 10 == 0) ? x : random_string(rng, alphabet, 10);
    const auto z = random_string(rng, alphabet, 10);
    const size_t xy = levenshtein(x, y), yx = levenshtein(y, x);
    const size_t yz = levenshtein(y, z), xz = levenshtein(x, z);
    const std::string tag = "(" + utf8(x) + ", " + utf8(y) + ", " + utf8(z) + ")";
    // Non-negativity, plus the upper bound |x| + |y|.
    check.expect(static_cast<long long>(xy) >= 0 && xy <= x.size() + y.size(),
                 "out of range " + tag);
    check.expect(xy == yx, "asymmetric " + tag);
    check.expect((xy == 0) == (x == y), "identity " + tag);
    check.expect(xz <= xy + yz, "triangle " + tag);
  }
  return {check.ok(), check.ok() ? "10000 triples" : check.summary()};
}

// 3. The mismatch-table examples: 1-3 snap onto their gold answer, 4-5 snap
// onto a candidate that still differs from gold.
Outcome transm_fixtures() {
  Check check;
  const Corpus corpus = load_corpus(data_path("mismatch_examples.jsonl"));
  const auto raw = load_predictions(data_path("mismatch_predictions.jsonl"));
  const TransformResult r = transform_run(raw, corpus);
  check.expect(r.errors.empty() && r.snapped.size() == 5, "unexpected transform result");
  if (!check.ok()) return {false, check.summary()};
  const std::vector<std::string> expected = {
      "virus. sanitation, mask,  alertness, yoga and healthy food",
      ". provide healthcare facilities",
      "@realdonaldtrump they’re drinking bleach",
      "a military base",
      "year olds",
  };
  for (size_t i = 0; i < 5; ++i) {
    const auto& s = r.snapped[i];
    const SlotAnnotation* slot = corpus.find_slot(s.key.tweet_id, s.key.slot);
    const std::string gold = join(slot->gold);
    check.expect(s.snapped == expected[i], describe(s.key) + " snapped to '" + s.snapped + "'");
    if (i < 3) {
      check.expect(s.snapped == gold, describe(s.key) + " should equal gold");
    } else {
      check.expect(s.snapped != gold, describe(s.key) + " should still differ from gold");
    }
  }
  return {check.ok(), check.ok() ? "examples 1-3 exact, 4-5 still mismatched" : check.summary()};
}

// 4. A near miss costs one FP and one FN; (1,1,1) scores 0.5000 everywhere.
Outcome double_penalty() {
  Check check;
  check.expect(score_slot("a military base in texas", {"texas"}) == MatchCounts{0, 1, 1},
               "near miss is not (0,1,1)");
  check.expect(score_slot("4 year olds", {"a few weeks time 4 year olds"}) ==
                   MatchCounts{0, 1, 1},
               "second near miss is not (0,1,1)");
  const EventScore s = score_counts(EventType::kCanNotTest, {1, 1, 1});
  for (const auto& [name, v] : {std::pair{"P", s.precision}, {"R", s.recall}, {"F1", s.f1}}) {
    check.expect(v == Rational(1, 2), std::string(name) + " is not exactly 1/2");
    check.expect(format_fixed(v, 4) == "0.5000", std::string(name) + " does not render 0.5000");
  }
  return {check.ok(), check.ok() ? "(0,1,1); P=R=F1=0.5000" : check.summary()};
}

std::string corrupt(std::mt19937_64& rng, const std::string& text) {
  std::u32string s = to_scalars(text);
  const std::u32string alphabet = U"abcdefghijklmnopqrstuvwxyz ";
  for (size_t edits = rng() % 4; edits > 0; --edits) {
    const size_t op = rng() % 3;
    if (op == 0 || s.empty()) {
      s.insert(s.begin() + static_cast<long>(rng() % (s.size() + 1)),
               alphabet[rng() % alphabet.size()]);
    } else if (op == 1) {
      s.erase(s.begin() + static_cast<long>(rng() % s.size()));
    } else {
      s[rng() % s.size()] = alphabet[rng() % alphabet.size()];
    }
  }
  return to_utf8(s);
}

std::string random_word(std::mt19937_64& rng) {
  static const std::string letters = "abcdefghijklmnopqrstuvwxyz";
  std::string w;
  for (size_t n = 2 + rng() % 10; n > 0; --n) w += letters[rng() % letters.size()];
  if (rng() % 3 == 0) w[0] = static_cast<char>(w[0] - 'a' + 'A');
  if (rng() % 3 == 0) w += " " + random_word(rng);
  return w;
}

Corpus random_corpus(std::mt19937_64& rng) {
  const TextPolicy policy;
  std::vector<Tweet> tweets;
  for (size_t t = 3 + rng() % 10; t > 0; --t) {
    Tweet tweet;
    tweet.id = std::to_string(tweets.size());
    tweet.text = "tweet " + tweet.id;
    tweet.event = kAllEvents[rng() % kAllEvents.size()];
    for (size_t k = 1 + rng() % 4; k > 0; --k) {
      SlotAnnotation slot;
      slot.name = "slot" + std::to_string(tweet.slots.size());
      slot.question = "question?";
      std::set<std::string> seen = {"not specified"};
      for (size_t c = 1 + rng() % 5; c > 0; --c) {
        const std::string w = random_word(rng);
        if (seen.insert(policy.normalize(w)).second) slot.candidates.push_back(w);
      }
      slot.candidates.push_back("not specified");
      for (size_t c = 0; c + 1 < slot.candidates.size(); ++c) {
        if (rng() % 3 == 0) slot.gold.push_back(slot.candidates[c]);
      }
      tweet.slots.push_back(std::move(slot));
    }
    tweets.push_back(std::move(tweet));
  }
  return Corpus(std::move(tweets), policy);
}

// 5. Snapping character-corrupted gold answers never loses a TP and never
// lowers macro F1.
Outcome snapping_improves() {
  Check check;
  std::mt19937_64 rng(424242);
  int64_t raw_tp = 0, post_tp = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Corpus corpus = random_corpus(rng);
    check.expect(validate_corpus(corpus).empty(), "generated corpus invalid");
    std::vector<RawPrediction> preds;
    for (const auto& t : corpus.tweets()) {
      for (const auto& s : t.slots) {
        std::vector<std::string> targets = s.gold;
        if (targets.empty()) targets.push_back("not specified");
        std::vector<std::string> parts;
        for (const auto& g : targets) parts.push_back(corrupt(rng, g));
        preds.push_back({{t.id, s.name}, join(parts)});
      }
    }
    const TransformResult snapped = transform_run(preds, corpus);
    check.expect(snapped.errors.empty(), "transform errors");
    std::map<PredictionKey, std::string> raw_map, post_map;
    for (const auto& p : preds) raw_map[p.key] = p.text;
    for (const auto& s : snapped.snapped) post_map[s.key] = s.snapped;
    const auto raw = evaluate_run(corpus, raw_map, "raw");
    const auto post = evaluate_run(corpus, post_map, "post");
    const std::string tag = "trial " + std::to_string(trial);
    check.expect(post.total().tp >= raw.total().tp, tag + ": TP decreased");
    check.expect(post.macro.f1 >= raw.macro.f1, tag + ": macro F1 decreased");
    raw_tp += raw.total().tp;
    post_tp += post.total().tp;
  }
  return {check.ok(), check.ok() ? "1000 corpora; TP " + std::to_string(raw_tp) + " -> " +
                                       std::to_string(post_tp)
                                 : check.summary()};
}

size_t expected_examples(const Corpus& corpus) {
  size_t n = 0;
  for (const auto& t : corpus.tweets()) n += 1 + t.slots.size();
  return n;
}

// 6. |build_all| = sum over tweets of (1 + |slots|). A real corpus can be
// supplied through SLOTFORGE_REAL_CORPUS.
Outcome counting_identity() {
  Check check;
  for (const char* name : {"corpus_3x4.jsonl", "mismatch_examples.jsonl"}) {
    const Corpus c = load_corpus(data_path(name));
    const size_t built = build_all(c, QuestionBank::defaults()).size();
    check.expect(built == expected_examples(c), std::string(name) + ": count mismatch");
    check.expect(built == c.stats().total_examples, std::string(name) + ": stats mismatch");
  }
  check.expect(build_all(load_corpus(data_path("corpus_3x4.jsonl")),
                         QuestionBank::defaults())
                       .size() == 15,
               "fixture should yield 15 examples");
  std::string detail = "fixtures: 15 and 10 examples";
  if (const char* real = std::getenv("SLOTFORGE_REAL_CORPUS"); real && *real) {
    const Corpus c = load_corpus(real);
    const size_t built = build_all(c, QuestionBank::defaults()).size();
    check.expect(built == expected_examples(c), "real corpus: count mismatch");
    if (c.size() == 7149) {
      check.expect(built == 34464, "real corpus: expected 34464, got " + std::to_string(built));
    }
    detail += "; real corpus " + std::to_string(c.size()) + " tweets -> " +
              std::to_string(built) + " examples";
  } else {
    detail += "; real corpus not supplied";
  }
  return {check.ok(), check.ok() ? detail : check.summary()};
}

// Half-up rounding of a non-negative fraction to 4 decimals, as an integer.
std::string oracle_fixed4(const Rational& v) {
  const auto num = static_cast<__int128>(v.numerator()) * 10000;
  const auto den = static_cast<__int128>(v.denominator());
  const auto scaled = static_cast<int64_t>((2 * num + den) / (2 * den));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%lld.%04lld", static_cast<long long>(scaled / 10000),
                static_cast<long long>(scaled % 10000));
  return buf;
}

// 7. Macro metrics render with exactly 4 decimals and macro F1 is the exact
// unweighted mean of the five per-event F1 values.
Outcome report_formatting() {
  Check check;
  const std::regex four_decimals(R"(\d\.\d{4})");
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<EventScore> scores;
    Rational sum_f1, sum_p, sum_r;
    for (EventType e : kAllEvents) {
      MatchCounts c{static_cast<int64_t>(rng() % 200), static_cast<int64_t>(rng() % 200),
                    static_cast<int64_t>(rng() % 200)};
      if (rng() % 8 == 0) c = {};
      scores.push_back(score_counts(e, c));
      // Independent F1: 2TP / (2TP + FP + FN).
      const int64_t denom = 2 * c.tp + c.fp + c.fn;
      const Rational f1 = denom == 0 ? Rational(0) : Rational(2 * c.tp, denom);
      check.expect(scores.back().f1 == f1, "per-event F1 disagrees with 2TP/(2TP+FP+FN)");
      sum_f1 += f1;
      sum_p += scores.back().precision;
      sum_r += scores.back().recall;
    }
    const auto report = macro_report(scores);
    check.expect(report.macro.f1 == sum_f1 / 5, "macro F1 is not the exact mean");
    check.expect(report.macro.precision == sum_p / 5, "macro P is not the exact mean");
    check.expect(report.macro.recall == sum_r / 5, "macro R is not the exact mean");
    const auto j = report_to_json(report);
    for (const char* m : {"precision", "recall", "f1"}) {
      const std::string s = j["macro"][m].get<std::string>();
      check.expect(std::regex_match(s, four_decimals), std::string("bad format ") + s);
    }
    check.expect(j["macro"]["f1"] == oracle_fixed4(report.macro.f1),
                 "macro F1 rounding disagrees with oracle");
  }
  // F1 values 3/5, 7/10, 1/2, 4/5, 149/250 average to 0.6392 exactly.
  const std::array<MatchCounts, 5> counts = {
      MatchCounts{3, 2, 2}, {7, 3, 3}, {1, 1, 1}, {4, 1, 1}, {149, 101, 101}};
  std::vector<EventScore> scores;
  for (EventType e : kAllEvents) scores.push_back(score_counts(e, counts[event_index(e)]));
  const auto report = macro_report(scores);
  check.expect(report.macro.f1 == Rational(799, 1250), "fixed fixture mean");
  check.expect(report_to_json(report)["macro"]["f1"] == "0.6392", "fixed fixture render");
  return {check.ok(), check.ok() ? "2000 random reports + fixed fixture" : check.summary()};
}

int run_cli(const std::vector<std::string>& args) {
  std::string cmd = "'" SLOTFORGE_CLI_PATH "'";
  for (const auto& a : args) cmd += " '" + a + "'";
  cmd += " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 8. prepare -> transform -> evaluate twice gives byte-identical files.
Outcome end_to_end_determinism() {
  Check check;
  TempDir root;
  const std::string corpus = data_path("corpus_3x4.jsonl").string();
  const std::string preds = data_path("fixture_predictions.jsonl").string();
  std::vector<std::filesystem::path> dirs = {root / "a", root / "b"};
  for (const auto& dir : dirs) {
    std::filesystem::create_directories(dir);
    check.expect(run_cli({"prepare", "--corpus", corpus, "--split", "0.34", "--seed", "7",
                          "--out", dir.string()}) == 0,
                 "prepare failed");
    check.expect(run_cli({"transform", "--corpus", corpus, "--predictions", preds, "--out",
                          dir.string()}) == 0,
                 "transform failed");
    check.expect(run_cli({"evaluate", "--corpus", corpus, "--predictions", preds,
                          "--snapped", (dir / "snapped.jsonl").string(), "--compare",
                          "raw,post", "--out", dir.string()}) == 0,
                 "evaluate failed");
  }
  const std::vector<std::string> files = {
      "examples.jsonl",   "train.jsonl",       "validation.jsonl", "snapped.jsonl",
      "report_raw.json",  "report_post.json",  "underestimation.json", "unmatched.jsonl"};
  for (const auto& f : files) {
    check.expect(std::filesystem::exists(dirs[0] / f), f + " missing");
    check.expect(slurp(dirs[0] / f) == slurp(dirs[1] / f), f + " differs between runs");
  }
  size_t entries = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dirs[0])) ++entries;
  check.expect(entries == files.size(), "unexpected extra output files");
  return {check.ok(), check.ok() ? std::to_string(files.size()) + " files identical"
                                 : check.summary()};
}

struct Criterion {
  int number;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace slotforge

int main() {
  using namespace slotforge;
  const std::vector<Criterion> criteria = {
      {1, "levenshtein oracle equivalence", 60, levenshtein_oracle},
      {2, "metric axioms", 30, metric_axioms},
      {3, "transm golden fixtures", 1, transm_fixtures},
      {4, "double-penalty law", 1, double_penalty},
      {5, "snapping improves", 120, snapping_improves},
      {6, "counting identity", 60, counting_identity},
      {7, "report formatting", 60, report_formatting},
      {8, "end-to-end determinism", 60, end_to_end_determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > c.limit_seconds) {
      outcome.pass = false;
      outcome.detail += "; exceeded time limit";
    }
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.2fs", seconds);
    std::cout << (outcome.pass ? "PASS" : "FAIL") << " criterion " << c.number << " ("
              << c.name << ", " << timing << "): " << outcome.detail << std::endl;
    if (!outcome.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
