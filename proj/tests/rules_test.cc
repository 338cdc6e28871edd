#include "ecie/rules.h"

#include <random>

#include <gtest/gtest.h>

#include "oracles.h"

namespace ecie {
namespace {

const Rule &RuleById(int id) {
  for (const Rule &r : BuiltinRuleset()) {
    if (r.id == id) return r;
  }
  throw std::out_of_range("no rule");
}

Atom Binary(const std::string &p, const std::string &a, const std::string &b) {
  return {p, {{true, a}, {true, b}}};
}

TEST(Ruleset, Builtin) {
  const auto &rules = BuiltinRuleset();
  ASSERT_EQ(rules.size(), 41u);
  for (std::size_t i = 0; i < rules.size(); ++i) {
    EXPECT_EQ(rules[i].id, static_cast<int>(i) + 1);
  }
  const Rule &chain = RuleById(27);
  EXPECT_EQ(chain.body, (std::vector<Atom>{Binary("based_in2", "X", "Z"),
                                           Binary("in0", "Z", "Y")}));
  EXPECT_EQ(chain.head, Binary("based_in0", "X", "Y"));
  const Rule &player = RuleById(35);
  EXPECT_EQ(player.body,
            (std::vector<Atom>{Binary("member_of", "X", "Y"),
                               Atom{"sport_player", {{true, "X"}}}}));
  EXPECT_EQ(player.head, Binary("player_of", "X", "Y"));
}

TEST(Ruleset, FormatRoundTrip) {
  for (const Rule &r : BuiltinRuleset()) {
    const auto again = ParseRules(FormatRule(r));
    ASSERT_EQ(again.size(), 1u);
    EXPECT_EQ(again[0].body, r.body);
    EXPECT_EQ(again[0].head, r.head);
  }
}

TEST(ParseRules, Errors) {
  EXPECT_THROW(ParseRules("in0(X,Y) => gpe0(X)"), ParseError);
  EXPECT_THROW(ParseRules("in0(X,Y) => in0(X,W)"), ParseError);
  EXPECT_THROW(ParseRules("in0(X,Y) in0(Y,X)"), ParseError);
  try {
    ParseRules("# c\nin0(X,Y) => in0(Y,X)\nbad line\n");
    FAIL();
  } catch (const ParseError &e) {
    EXPECT_EQ(e.byte_offset(), 29u);
  }
  const auto rules = ParseRules("\n# comment\nr(X,Y) => s(X,Y)\n");
  ASSERT_EQ(rules.size(), 1u);
  EXPECT_EQ(rules[0].id, 1);
}

TEST(Closure, SingleChainFiring) {
  FactBase facts;
  facts.binary = {{"a", "in2", "b"}, {"b", "in0", "c"}};
  const FactBase closed = Closure(facts, BuiltinRuleset());
  EXPECT_TRUE(closed.binary.count({"a", "in0", "c"}));
}

TEST(Closure, SymmetricRuleTerminates) {
  FactBase facts;
  facts.binary = {{"x", "spouse_of", "y"}};
  ClosureStats stats;
  const FactBase closed = Closure(facts, BuiltinRuleset(), &stats);
  EXPECT_EQ(closed.binary,
            (std::set<BinaryFact>{{"x", "spouse_of", "y"}, {"y", "spouse_of", "x"}}));
  EXPECT_EQ(stats.derived, 1u);
}

TEST(Closure, Empty) {
  EXPECT_EQ(Closure(FactBase{}, BuiltinRuleset()), FactBase{});
}

TEST(Closure, UnaryTagGrounding) {
  FactBase facts;
  facts.binary = {{"a", "agency_of", "c"}};
  EXPECT_FALSE(Closure(facts, BuiltinRuleset()).binary.count({"a", "based_in0", "c"}));
  facts.unary = {{"gpe0", "c"}};
  EXPECT_TRUE(Closure(facts, BuiltinRuleset()).binary.count({"a", "based_in0", "c"}));
}

Document ChainDocument(bool with_head) {
  Document d;
  d.id = "chain";
  d.tokens = {"Siemens", "of", "Munich", "in", "Germany"};
  d.sentences = {{0, 5}};
  d.clusters = {{"o", {{0, 1}}, {"company"}, {}},
                {"c", {{2, 3}}, {"gpe2"}, {}},
                {"g", {{4, 5}}, {"gpe0"}, {}}};
  d.relations = {{"o", "based_in2", "c"}, {"c", "in0", "g"}};
  if (with_head) d.relations.push_back({"o", "based_in0", "g"});
  return d;
}

TEST(CheckViolations, ChainRule) {
  const ViolationReport missing = CheckViolations(ChainDocument(false));
  ASSERT_EQ(missing.violations.size(), 1u);
  EXPECT_EQ(missing.violations[0].rule_id, 27);
  EXPECT_EQ(missing.violations[0].missing, (BinaryFact{"o", "based_in0", "g"}));
  EXPECT_EQ(missing.violations[0].substitution,
            (Substitution{{"X", "o"}, {"Y", "g"}, {"Z", "c"}}));

  const Document complete = ChainDocument(true);
  const ViolationReport ok = CheckViolations(complete);
  EXPECT_TRUE(ok.violations.empty());
  EXPECT_GT(ok.firings, 0u);

  Document bare = complete;
  bare.relations.clear();
  EXPECT_TRUE(CheckViolations(bare).violations.empty());

  EXPECT_EQ(DerivedRelations(ChainDocument(false)),
            (std::vector<RelationTriple>{{"o", "based_in0", "g"}}));
}

FactBase RandomFacts(std::mt19937_64 &rng, const std::vector<std::string> &preds,
                     const std::vector<std::string> &tags) {
  auto pick = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  const int entities = pick(1, 6);
  auto entity = [&] { return "e" + std::to_string(pick(0, entities - 1)); };
  FactBase f;
  for (int i = pick(0, 10); i > 0; --i) {
    const std::string h = entity(), t = entity();
    if (h != t) f.binary.insert({h, preds[pick(0, preds.size() - 1)], t});
  }
  for (int i = pick(0, 4); i > 0; --i) {
    f.unary.insert({tags[pick(0, tags.size() - 1)], entity()});
  }
  return f;
}

bool Subset(const FactBase &a, const FactBase &b) {
  return std::includes(b.binary.begin(), b.binary.end(), a.binary.begin(),
                       a.binary.end()) &&
         std::includes(b.unary.begin(), b.unary.end(), a.unary.begin(),
                       a.unary.end());
}

TEST(Property, ClosureAgainstNaiveRescan) {
  const std::vector<std::string> preds = {"in0",       "in2",    "based_in2",
                                          "based_in0", "gpe0",   "spouse_of",
                                          "member_of", "in0-x"};
  const std::vector<std::string> tags = {"gpe0", "sport_player"};
  std::mt19937_64 rng(41);
  for (int i = 0; i < 1000; ++i) {
    const FactBase facts = RandomFacts(rng, preds, tags);
    const FactBase closed = Closure(facts, BuiltinRuleset());
    EXPECT_EQ(closed, testing::NaiveClosure(facts, BuiltinRuleset())) << i;
    EXPECT_EQ(Closure(closed, BuiltinRuleset()), closed) << i;
    EXPECT_TRUE(Subset(facts, closed)) << i;

    FactBase more = facts;
    const FactBase extra = RandomFacts(rng, preds, tags);
    more.binary.insert(extra.binary.begin(), extra.binary.end());
    more.unary.insert(extra.unary.begin(), extra.unary.end());
    EXPECT_TRUE(Subset(closed, Closure(more, BuiltinRuleset()))) << i;

    // No violations exactly when the closure adds nothing.
    EXPECT_EQ(CheckViolations(facts, BuiltinRuleset()).violations.empty(),
              closed.binary == facts.binary)
        << i;
  }
}

}  // namespace
}  // namespace ecie
