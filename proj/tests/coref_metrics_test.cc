#include "ecie/coref_metrics.h"

#include <random>

#include <gtest/gtest.h>

#include "ecie/assignment.h"
#include "oracles.h"

namespace ecie {
namespace {

constexpr double kEps = 1e-9;

// a=0, b=1, c=2
const Partition kGold({{0, 1, 2}});
const Partition kSplit({{0, 1}, {2}});

TEST(Muc, Examples) {
  const Prf same = Muc(kGold, kGold);
  EXPECT_DOUBLE_EQ(same.f1, 1.0);
  const Prf split = Muc(kGold, kSplit);
  EXPECT_NEAR(split.precision, 1.0, kEps);
  EXPECT_NEAR(split.recall, 0.5, kEps);
  EXPECT_NEAR(split.f1, 0.667, 1e-3);
  const Partition singletons({{0}, {1}, {2}});
  const Prf degenerate = Muc(singletons, singletons);
  EXPECT_EQ(degenerate.precision, 0.0);
  EXPECT_EQ(degenerate.recall, 0.0);
  EXPECT_EQ(degenerate.f1, 0.0);
}

TEST(BCubed, Examples) {
  EXPECT_DOUBLE_EQ(BCubed(kGold, kGold).f1, 1.0);
  const Prf split = BCubed(kGold, kSplit);
  EXPECT_NEAR(split.precision, 1.0, kEps);
  EXPECT_NEAR(split.recall, 5.0 / 9.0, kEps);
  EXPECT_NEAR(split.f1, 0.714, 1e-3);
  const Prf merged = BCubed(Partition({{0}, {1}}), Partition({{0, 1}}));
  EXPECT_NEAR(merged.precision, 0.5, kEps);
  EXPECT_NEAR(merged.recall, 1.0, kEps);
}

TEST(CeafE, Examples) {
  EXPECT_DOUBLE_EQ(CeafE(kGold, kGold).f1, 1.0);
  const Prf split = CeafE(kGold, kSplit);
  EXPECT_NEAR(split.precision, 0.4, kEps);
  EXPECT_NEAR(split.recall, 0.8, kEps);
  EXPECT_NEAR(split.f1, 0.533, 1e-3);
  const Prf disjoint = CeafE(Partition({{0, 1}}), Partition({{5, 6}}));
  EXPECT_EQ(disjoint.f1, 0.0);
}

TEST(AverageCorefF1, Examples) {
  EXPECT_DOUBLE_EQ(AverageCorefF1(kGold, kGold), 1.0);
  EXPECT_NEAR(AverageCorefF1(kGold, kSplit), 0.638, 1e-3);
  const CorefScores scores = ScoreCoreference(kGold, kSplit);
  EXPECT_NEAR(scores.average_f1,
              (scores.muc.f1 + scores.b_cubed.f1 + scores.ceaf_e.f1) / 3, kEps);
}

TEST(Partition, RejectsOverlapAndEmpty) {
  EXPECT_THROW(Partition({{0, 1}, {1}}), Error);
  EXPECT_THROW(Partition(std::vector<std::vector<int>>{{}}), Error);
}

TEST(Muc, MissingMentionsCountAsSingletons) {
  // Response misses mention 2 entirely: its key cluster {0,1,2} splits into
  // {0,1} and the implicit singleton {2}.
  const Prf r = Muc(kGold, Partition({{0, 1}}));
  EXPECT_NEAR(r.recall, 0.5, kEps);
  EXPECT_NEAR(r.precision, 1.0, kEps);
}

TEST(Assignment, OptimalOnSmallMatrix) {
  const std::vector<std::vector<double>> w = {{1, 2, 3}, {2, 4, 6}, {3, 6, 9}};
  const std::vector<int> a = MaxWeightAssignment(w);
  double total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) total += w[i][a[i]];
  EXPECT_NEAR(total, 14.0, kEps);
  // Cross-check by enumeration.
  std::vector<int> perm = {0, 1, 2};
  double best = 0;
  do {
    best = std::max(best, w[0][perm[0]] + w[1][perm[1]] + w[2][perm[2]]);
  } while (std::next_permutation(perm.begin(), perm.end()));
  EXPECT_NEAR(total, best, kEps);
}

TEST(Assignment, RectangularAndRagged) {
  const std::vector<std::vector<double>> wide = {{0, 5, 1}, {4, 0, 0}};
  const auto a = MaxWeightAssignment(wide);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[0], 1);
  EXPECT_EQ(a[1], 0);
  const std::vector<std::vector<double>> tall = {{0, 4}, {5, 0}, {1, 0}};
  const auto b = MaxWeightAssignment(tall);
  ASSERT_EQ(b.size(), 3u);
  EXPECT_EQ(b[0], 1);
  EXPECT_EQ(b[1], 0);
  EXPECT_EQ(b[2], -1);
  EXPECT_THROW(MaxWeightAssignment({{1, 2}, {3}}), Error);
}

TEST(Property, CeafMatchesExhaustiveAlignment) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 500; ++i) {
    const auto g = testing::RandomPartition(rng, 6, 14);
    const auto p = testing::RandomPartition(rng, 6, 14);
    const double best = testing::BruteCeafSimilarity(g, p);
    const Prf got = CeafE(Partition(g), Partition(p));
    EXPECT_NEAR(got.precision, best / p.size(), kEps) << "case " << i;
    EXPECT_NEAR(got.recall, best / g.size(), kEps) << "case " << i;
  }
}

TEST(Property, RefinementAndBounds) {
  std::mt19937_64 rng(19);
  for (int i = 0; i < 300; ++i) {
    const auto g = testing::RandomPartition(rng, 5, 12);
    for (const Prf &prf : {Muc(Partition(g), Partition(g)),
                           BCubed(Partition(g), Partition(g)),
                           CeafE(Partition(g), Partition(g))}) {
      // MUC is 0 on all-singleton partitions by convention.
      EXPECT_TRUE(prf.f1 == 1.0 || prf.f1 == 0.0);
    }
    std::vector<std::vector<int>> refined;
    bool strict = false;
    for (const auto &c : g) {
      if (c.size() >= 2) {
        refined.push_back({c.begin(), c.begin() + 1});
        refined.push_back({c.begin() + 1, c.end()});
        strict = true;
      } else {
        refined.push_back(c);
      }
    }
    if (strict) {
      const Prf muc = Muc(Partition(g), Partition(refined));
      const bool has_links = std::any_of(refined.begin(), refined.end(),
                                         [](const auto &c) { return c.size() >= 2; });
      // Without any predicted link MUC precision is 0 by convention.
      EXPECT_EQ(muc.precision, has_links ? 1.0 : 0.0);
      EXPECT_LT(muc.recall, 1.0);
      EXPECT_EQ(BCubed(Partition(g), Partition(refined)).precision, 1.0);
    }
    const auto p = testing::RandomPartition(rng, 5, 12);
    for (const Prf &prf : {Muc(Partition(g), Partition(p)),
                           BCubed(Partition(g), Partition(p)),
                           CeafE(Partition(g), Partition(p))}) {
      for (double v : {prf.precision, prf.recall, prf.f1}) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0 + kEps);
      }
    }
  }
}

TEST(Property, InvariantUnderRelabeling) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 200; ++i) {
    auto g = testing::RandomPartition(rng, 5, 12);
    auto p = testing::RandomPartition(rng, 5, 12);
    const CorefScores before = ScoreCoreference(Partition(g), Partition(p));
    std::shuffle(g.begin(), g.end(), rng);
    std::shuffle(p.begin(), p.end(), rng);
    for (auto &c : p) std::shuffle(c.begin(), c.end(), rng);
    const CorefScores after = ScoreCoreference(Partition(g), Partition(p));
    EXPECT_NEAR(before.average_f1, after.average_f1, kEps);
    EXPECT_NEAR(before.ceaf_e.f1, after.ceaf_e.f1, kEps);
  }
}

TEST(PartitionOf, DocumentsDoNotShareMentions) {
  Document a, b;
  a.id = "a";
  b.id = "b";
  a.tokens = b.tokens = {"x", "y"};
  a.sentences = b.sentences = {{0, 2}};
  a.clusters = {{"c", {{0, 1}, {1, 2}}, {}, {}}};
  b.clusters = {{"c", {{0, 1}, {1, 2}}, {}, {}}};
  MentionInterner interner;
  const Partition p = PartitionOf({a, b}, interner);
  EXPECT_EQ(p.size(), 2u);
  EXPECT_EQ(p.num_mentions(), 4u);
}

}  // namespace
}  // namespace ecie
