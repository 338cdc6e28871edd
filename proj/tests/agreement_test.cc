#include "ecie/agreement.h"

#include <random>

#include <gtest/gtest.h>

namespace ecie {
namespace {

constexpr double kEps = 1e-12;

AnnotationPair Pair(const std::string &a, const std::string &b) {
  AnnotationPair p;
  for (std::size_t i = 0; i < a.size(); ++i) {
    p.items.emplace_back(std::string(1, a[i]), std::string(1, b[i]));
  }
  return p;
}

TEST(ObservedAgreement, Examples) {
  EXPECT_EQ(ObservedAgreement(Pair("ABAB", "ABAB")), 1.0);
  EXPECT_NEAR(ObservedAgreement(Pair("AAAAAAAAAA", "AAAAAAAABB")), 0.8, kEps);
  EXPECT_EQ(ObservedAgreement(Pair("AAA", "BBB")), 0.0);
  EXPECT_THROW(ObservedAgreement(AnnotationPair{}), Error);
}

TEST(ExpectedAgreement, Examples) {
  EXPECT_NEAR(ExpectedAgreement(Pair("AAAAAABBBB", "AAAAABBBBB")), 0.5, kEps);
  EXPECT_EQ(ExpectedAgreement(Pair("AAA", "AAA")), 1.0);
  EXPECT_NEAR(ExpectedAgreement(Pair("ABCABC", "CBACBA")), 1.0 / 3.0, kEps);
  EXPECT_THROW(ExpectedAgreement(AnnotationPair{}), Error);
}

TEST(CohenKappa, Examples) {
  const AnnotationPair fixture = Pair("AAAAABBBBB", "AAAABABBBB");
  EXPECT_NEAR(ObservedAgreement(fixture), 0.8, kEps);
  EXPECT_NEAR(ExpectedAgreement(fixture), 0.5, kEps);
  EXPECT_NEAR(CohenKappa(fixture), 0.6, kEps);
  EXPECT_EQ(CohenKappa(Pair("ABCA", "ABCA")), 1.0);
  EXPECT_NEAR(CohenKappa(Pair("AABB", "ABAB")), 0.0, kEps);
  EXPECT_EQ(CohenKappa(Pair("AAA", "AAA")), 1.0);
}

TEST(CohenKappa, EmptyPair) {
  try {
    CohenKappa(AnnotationPair{});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), "EMPTY_ANNOTATION");
  }
}

BinaryLabelItems Binary(const std::string &label, const std::string &a,
                        const std::string &b) {
  BinaryLabelItems items{label, {}};
  for (std::size_t i = 0; i < a.size(); ++i) {
    items.items.emplace_back(a[i] == '1', b[i] == '1');
  }
  return items;
}

TEST(MultilabelKappa, Examples) {
  const BinaryLabelItems perfect = Binary("x", "11111100", "11111100");
  const BinaryLabelItems chance = Binary("y", "1100", "1010");
  EXPECT_EQ(perfect.Support(), 12.0);
  EXPECT_EQ(chance.Support(), 4.0);
  EXPECT_NEAR(MultilabelKappa({perfect, chance}), 0.75, kEps);
  EXPECT_NEAR(MultilabelKappa({chance}), CohenKappa(chance.ToPair()), kEps);
  EXPECT_EQ(MultilabelKappa({perfect, Binary("z", "0110", "0110")}), 1.0);
  EXPECT_THROW(MultilabelKappa({}), Error);
}

TEST(Property, PermutationAndRenamingInvariance) {
  std::mt19937_64 rng(11);
  const std::string alphabet = "ABCD";
  for (int trial = 0; trial < 20; ++trial) {
    AnnotationPair pair;
    const int n = std::uniform_int_distribution<int>(2, 40)(rng);
    std::uniform_int_distribution<int> label(0, 3);
    for (int i = 0; i < n; ++i) {
      pair.items.emplace_back(std::string(1, alphabet[label(rng)]),
                              std::string(1, alphabet[label(rng)]));
    }
    const double p_o = ObservedAgreement(pair);
    const double p_e = ExpectedAgreement(pair);
    double kappa = 0;
    bool defined = true;
    try {
      kappa = CohenKappa(pair);
    } catch (const Error &) {
      defined = false;
    }
    if (defined) EXPECT_LE(kappa, p_o + kEps);
    for (int s = 0; s < 100; ++s) {
      AnnotationPair shuffled = pair;
      std::shuffle(shuffled.items.begin(), shuffled.items.end(), rng);
      EXPECT_EQ(ObservedAgreement(shuffled), p_o);
      EXPECT_EQ(ExpectedAgreement(shuffled), p_e);
      if (defined) EXPECT_EQ(CohenKappa(shuffled), kappa);
    }
    AnnotationPair renamed = pair;
    for (auto &[a, b] : renamed.items) {
      a = "label_" + a;
      b = "label_" + b;
    }
    EXPECT_EQ(ObservedAgreement(renamed), p_o);
    EXPECT_EQ(ExpectedAgreement(renamed), p_e);
  }
}

Document Annotated(std::vector<EntityCluster> clusters,
                   std::vector<RelationTriple> relations = {}) {
  Document d;
  d.id = "d";
  d.tokens.assign(10, "w");
  d.sentences = {{0, 10}};
  d.clusters = std::move(clusters);
  d.relations = std::move(relations);
  return d;
}

TEST(CorpusAgreement, SelfAgreementIsPerfect) {
  const Document d = Annotated(
      {{"a", {{0, 1}, {4, 5}}, {"person"}, KbLink::To("A")},
       {"b", {{2, 3}}, {"gpe0"}, KbLink::Nil()},
       {"c", {{6, 7}}, {"person", "politician"}, KbLink::To("C")}},
      {{"a", "citizen_of", "b"}});
  for (auto task : {AgreementTask::kEntity, AgreementTask::kCoref,
                    AgreementTask::kLinking, AgreementTask::kRelation}) {
    for (bool conditioned : {false, true}) {
      const AgreementReport r = CorpusAgreement({d}, {d}, task, conditioned);
      EXPECT_EQ(r.kappa, 1.0);
      EXPECT_EQ(r.p_o, 1.0);
      EXPECT_GT(r.items, 0u);
    }
  }
}

TEST(CorpusAgreement, MissingMentionsAreAbsent) {
  const Document a = Annotated({{"a", {{0, 1}}, {"person"}, {}},
                                {"b", {{2, 3}}, {"gpe0"}, {}}});
  const Document b = Annotated({{"a", {{0, 1}}, {"person"}, {}}});
  const AgreementReport r = CorpusAgreement({a}, {b}, AgreementTask::kEntity);
  EXPECT_EQ(r.items, 2u);
  ASSERT_TRUE(r.has_detection);
  EXPECT_NEAR(r.detection.p_o, 0.5, kEps);
  const AgreementReport c =
      CorpusAgreement({a}, {b}, AgreementTask::kEntity, true);
  EXPECT_EQ(c.kappa, 1.0);
}

TEST(CorpusAgreement, TaskNames) {
  EXPECT_EQ(ParseAgreementTask("coref"), AgreementTask::kCoref);
  EXPECT_THROW(ParseAgreementTask("ner"), Error);
}

}  // namespace
}  // namespace ecie
