#include "sdst/candidate_set.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "sdst/errors.h"

namespace sdst {
namespace {

ScoredCandidateSet make_set(int k, const std::vector<ScoredCandidate> &entries) {
  ScoredCandidateSet s("time", k);
  for (const auto &e : entries) EXPECT_TRUE(s.try_add(e.value, e.score));
  return s;
}

TEST(UpdateCandidateSetTest, FirstUserMention) {
  const auto r = update_candidate_set(ScoredCandidateSet("restaurant", 7), {"cascal"}, {}, {}, 7);
  EXPECT_EQ(r.set.entries(), (std::vector<ScoredCandidate>{{"cascal", 0.0}}));
  EXPECT_EQ(r.truncated, 0);
}

TEST(UpdateCandidateSetTest, NewMentionGoesFirstAndOldKeepsScore) {
  const auto r = update_candidate_set(make_set(7, {{"6 pm", 0.4}}), {"7 pm"}, {}, {}, 7);
  EXPECT_EQ(r.set.entries(), (std::vector<ScoredCandidate>{{"7 pm", 0.0}, {"6 pm", 0.4}}));
}

TEST(UpdateCandidateSetTest, LowestScoreIsEvicted) {
  const auto r = update_candidate_set(make_set(2, {{"b", 0.3}, {"a", 0.6}}), {"c"}, {}, {}, 2);
  EXPECT_EQ(r.set.entries(), (std::vector<ScoredCandidate>{{"c", 0.0}, {"a", 0.6}}));
  EXPECT_EQ(r.truncated, 0);
}

TEST(UpdateCandidateSetTest, NoMentionsOnEmptyStaysEmpty) {
  EXPECT_TRUE(update_candidate_set(ScoredCandidateSet("x", 7), {}, {}, {}, 7).set.empty());
}

TEST(UpdateCandidateSetTest, MentionedPreviousValueKeepsScore) {
  const auto r = update_candidate_set(make_set(7, {{"a", 0.2}, {"b", 0.7}}), {}, {"a"}, {}, 7);
  EXPECT_EQ(r.set.entries(), (std::vector<ScoredCandidate>{{"a", 0.2}, {"b", 0.7}}));
}

TEST(UpdateCandidateSetTest, DuplicateMentionsInsertOnce) {
  const auto r = update_candidate_set(ScoredCandidateSet("x", 7), {"a", "a"}, {"a", "b"}, {"b"}, 7);
  EXPECT_EQ(r.set.entries(), (std::vector<ScoredCandidate>{{"a", 0.0}, {"b", 0.0}}));
}

TEST(UpdateCandidateSetTest, OverflowKeepsInsertionOrderAndWarns) {
  const auto r = update_candidate_set(make_set(2, {{"z", 0.9}}), {"a", "b"}, {"c"}, {}, 2);
  EXPECT_EQ(r.set.entries(), (std::vector<ScoredCandidate>{{"a", 0.0}, {"b", 0.0}}));
  EXPECT_EQ(r.truncated, 1);
}

TEST(UpdateCandidateSetTest, RepeatedOverflowMentionCountsOnce) {
  const auto r = update_candidate_set(ScoredCandidateSet("x", 1), {"a", "b", "b"}, {"b", "c"}, {}, 1);
  EXPECT_EQ(r.set.entries(), (std::vector<ScoredCandidate>{{"a", 0.0}}));
  EXPECT_EQ(r.truncated, 2);
}

TEST(UpdateCandidateSetTest, EqualScoresKeepPreviousOrder) {
  const auto r = update_candidate_set(make_set(3, {{"a", 0.5}, {"b", 0.5}, {"c", 0.5}}), {}, {}, {}, 3);
  EXPECT_EQ(r.set.entries()[0].value, "a");
  EXPECT_EQ(r.set.entries()[1].value, "b");
  EXPECT_EQ(r.set.entries()[2].value, "c");
}

// Straightforward restatement of the update rule used as an oracle.
std::vector<ScoredCandidate> oracle_update(const std::vector<ScoredCandidate> &prev,
                                           const std::vector<std::string> &user,
                                           const std::vector<std::string> &system, int k) {
  std::vector<ScoredCandidate> out;
  auto has = [&](const std::string &v) {
    return std::any_of(out.begin(), out.end(), [&](const auto &c) { return c.value == v; });
  };
  auto prev_score = [&](const std::string &v) {
    for (const auto &c : prev) {
      if (c.value == v) return c.score;
    }
    return 0.0;
  };
  for (const auto *list : {&user, &system}) {
    for (const auto &v : *list) {
      if (!has(v) && static_cast<int>(out.size()) < k) out.push_back({v, prev_score(v)});
    }
  }
  std::vector<ScoredCandidate> sorted = prev;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto &a, const auto &b) { return a.score > b.score; });
  for (const auto &c : sorted) {
    if (!has(c.value) && static_cast<int>(out.size()) < k) out.push_back(c);
  }
  return out;
}

TEST(UpdateCandidateSetTest, RandomSequencesMatchOracle) {
  std::mt19937_64 rng(11);
  for (int seq = 0; seq < 1000; ++seq) {
    const int k = 1 + static_cast<int>(rng() % 7);
    ScoredCandidateSet cs("s", k);
    for (int t = 0; t < 6; ++t) {
      std::vector<std::string> user, system;
      for (int i = static_cast<int>(rng() % 4); i > 0; --i) user.push_back("v" + std::to_string(rng() % 12));
      for (int i = static_cast<int>(rng() % 3); i > 0; --i) system.push_back("v" + std::to_string(rng() % 12));
      auto r = update_candidate_set(cs, user, system, {}, k);
      ASSERT_EQ(r.set.entries(), oracle_update(cs.entries(), user, system, k));
      for (int i = 0; i < r.set.size(); ++i) r.set.set_score(i, static_cast<double>(rng() % 5) / 5.0);
      cs = r.set;
    }
  }
}

TEST(ValueSlateTest, TwoCandidatesWithKTwo) {
  const ValueSlate slate(make_set(2, {{"6 pm", 0.0}, {"7 pm", 0.0}}));
  EXPECT_EQ(slate.size(), 4);
  EXPECT_EQ(slate.value(0), "6 pm");
  EXPECT_EQ(slate.value(1), "7 pm");
  EXPECT_EQ(slate.dontcare_index(), 2);
  EXPECT_EQ(slate.null_index(), 3);
  EXPECT_EQ(slate.candidate_mask(), (std::vector<bool>{true, true}));
  EXPECT_EQ(slate.mask(), (std::vector<bool>{true, true, true, true}));
}

TEST(ValueSlateTest, PadsTrailCandidates) {
  const ValueSlate slate(make_set(7, {{"x", 0.0}}));
  EXPECT_EQ(slate.size(), 9);
  EXPECT_EQ(slate.candidate_mask(), (std::vector<bool>{true, false, false, false, false, false, false}));
  EXPECT_TRUE(slate.is_pad(1));
  EXPECT_FALSE(slate.is_pad(7));
  EXPECT_EQ(slate.label(1), "<pad>");
  EXPECT_EQ(slate.label(7), "<dontcare>");
  EXPECT_EQ(slate.label(8), "<null>");
  EXPECT_EQ(slate.find("x"), 0);
  EXPECT_EQ(slate.find("y"), -1);
}

TEST(ValueSlateTest, EmptySetIsAllPad) {
  const ValueSlate slate(ScoredCandidateSet("x", 7));
  for (int i = 0; i < 7; ++i) EXPECT_TRUE(slate.is_pad(i));
}

TEST(InitialDistributionTest, AllMassOnNull) {
  const Distribution d = initial_distribution(ValueSlate(ScoredCandidateSet("x", 7)));
  EXPECT_EQ(d.null(), 1.0);
  EXPECT_EQ(d.dontcare(), 0.0);
  double sum = 0.0;
  for (double p : d.probs) sum += p;
  EXPECT_EQ(sum, 1.0);
  EXPECT_THROW(initial_distribution(ValueSlate(make_set(7, {{"a", 0.0}}))), ConfigError);
}

}  // namespace
}  // namespace sdst
