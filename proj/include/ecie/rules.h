#ifndef ECIE_RULES_H_
#define ECIE_RULES_H_

// Horn-style relation consistency rules and a forward-chaining closure.
//
// Rule text, one rule per line:
//   based_in2(X,Z) & in0(Z,Y) => based_in0(X,Y)
// Binary atoms are relations between entity clusters; unary atoms such as
// gpe0(Y) hold when the cluster carries that tag. Terms starting with an
// uppercase letter are variables, all others are cluster-id constants.
// Blank lines and lines starting with '#' are ignored; rules are numbered
// 1, 2, ... in file order.

#include <compare>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ecie/corpus.h"

namespace ecie {

struct Term {
  bool variable = false;
  std::string name;

  friend bool operator==(const Term &, const Term &) = default;
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;  // arity 1 or 2

  friend bool operator==(const Atom &, const Atom &) = default;
};

struct Rule {
  int id = 0;
  std::vector<Atom> body;  // conjunction
  Atom head;               // always binary

  friend bool operator==(const Rule &, const Rule &) = default;
};

std::string FormatAtom(const Atom &atom);
std::string FormatRule(const Rule &rule);

// Throws ParseError (byte offset of the offending character) on malformed text,
// and for rules whose head is not binary or uses a variable absent from the
// body.
std::vector<Rule> ParseRules(std::string_view text);

// The bundled consistency rules (41 of them).
const std::vector<Rule> &BuiltinRuleset();

struct BinaryFact {
  std::string head;
  std::string predicate;
  std::string tail;

  friend auto operator<=>(const BinaryFact &, const BinaryFact &) = default;
};

struct UnaryFact {
  std::string predicate;
  std::string entity;

  friend auto operator<=>(const UnaryFact &, const UnaryFact &) = default;
};

struct FactBase {
  std::set<BinaryFact> binary;
  std::set<UnaryFact> unary;

  friend bool operator==(const FactBase &, const FactBase &) = default;
};

// Relations become binary facts, cluster tags become unary facts.
FactBase FactsFromDocument(const Document &document);

using Substitution = std::map<std::string, std::string>;

// A satisfied rule body together with its grounded head.
struct Firing {
  int rule_id = 0;
  Substitution substitution;
  BinaryFact head;
};

// Every grounding of every rule body against `facts`. Groundings whose head
// would relate an entity to itself are skipped.
std::vector<Firing> Fire(const FactBase &facts, const std::vector<Rule> &rules);

struct ClosureStats {
  int rounds = 0;
  std::size_t derived = 0;
};

// Least fixpoint of `rules` over `facts`. Throws Error("CLOSURE_CAP") if the
// iteration exceeds the number of facts that could possibly be added.
FactBase Closure(const FactBase &facts, const std::vector<Rule> &rules,
                 ClosureStats *stats = nullptr);

struct Violation {
  int rule_id = 0;
  BinaryFact missing;
  Substitution substitution;
};

struct ViolationReport {
  std::vector<Violation> violations;
  std::size_t firings = 0;
};

// Firings on the annotated facts whose head relation is not annotated.
ViolationReport CheckViolations(const FactBase &facts,
                                const std::vector<Rule> &rules);
ViolationReport CheckViolations(
    const Document &document,
    const std::vector<Rule> &rules = BuiltinRuleset());

// Relations added by the closure, in sorted order.
std::vector<RelationTriple> DerivedRelations(
    const Document &document,
    const std::vector<Rule> &rules = BuiltinRuleset());

}  // namespace ecie

#endif  // ECIE_RULES_H_
