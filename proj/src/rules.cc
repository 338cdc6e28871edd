#include "ecie/rules.h"

#include <cctype>
#include <unordered_map>

#include "ecie/resources.h"

namespace ecie {

namespace {

bool IsIdentifierChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
         c == '.' || c == ':';
}

// Recursive-descent parser over one rule line.
class RuleParser {
 public:
  RuleParser(std::string_view line, std::size_t line_offset)
      : line_(line), base_(line_offset) {}

  Rule Parse() {
    Rule rule;
    rule.body.push_back(ParseAtom());
    SkipSpace();
    while (Consume("&")) {
      rule.body.push_back(ParseAtom());
      SkipSpace();
    }
    if (!Consume("=>")) Fail("expected '&' or '=>'");
    rule.head = ParseAtom();
    SkipSpace();
    if (pos_ != line_.size()) Fail("trailing characters");
    return rule;
  }

 private:
  [[noreturn]] void Fail(const std::string &message) {
    throw ParseError("rule: " + message, base_ + pos_);
  }

  void SkipSpace() {
    while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_]))) {
      ++pos_;
    }
  }

  bool Consume(std::string_view token) {
    SkipSpace();
    if (line_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  std::string Identifier() {
    SkipSpace();
    std::size_t start = pos_;
    while (pos_ < line_.size() && IsIdentifierChar(line_[pos_])) ++pos_;
    if (start == pos_) Fail("expected identifier");
    return std::string(line_.substr(start, pos_ - start));
  }

  Atom ParseAtom() {
    Atom atom;
    atom.predicate = Identifier();
    if (!Consume("(")) Fail("expected '('");
    do {
      std::string name = Identifier();
      bool variable = std::isupper(static_cast<unsigned char>(name[0]));
      atom.args.push_back({variable, std::move(name)});
    } while (Consume(","));
    if (!Consume(")")) Fail("expected ')'");
    if (atom.args.size() > 2) Fail("atoms take one or two arguments");
    return atom;
  }

  std::string_view line_;
  std::size_t base_;
  std::size_t pos_ = 0;
};

std::string TermText(const Term &term) { return term.name; }

// Fact indexes keyed by predicate.
struct FactIndex {
  std::unordered_map<std::string, std::vector<std::pair<std::string, std::string>>>
      binary;
  std::unordered_map<std::string, std::vector<std::string>> unary;

  explicit FactIndex(const FactBase &facts) {
    for (const BinaryFact &f : facts.binary) {
      binary[f.predicate].emplace_back(f.head, f.tail);
    }
    for (const UnaryFact &f : facts.unary) unary[f.predicate].push_back(f.entity);
  }
};

// Binds `term` to `value` under `sub`. Returns false on conflict; sets
// `bound` when a new binding was introduced.
bool Unify(const Term &term, const std::string &value, Substitution &sub,
           bool &bound) {
  bound = false;
  if (!term.variable) return term.name == value;
  auto it = sub.find(term.name);
  if (it != sub.end()) return it->second == value;
  sub.emplace(term.name, value);
  bound = true;
  return true;
}

std::string Resolve(const Term &term, const Substitution &sub) {
  if (!term.variable) return term.name;
  return sub.at(term.name);
}

void Ground(const Rule &rule, const FactIndex &index, std::size_t atom_index,
            Substitution &sub, std::vector<Firing> &out) {
  if (atom_index == rule.body.size()) {
    BinaryFact head{Resolve(rule.head.args[0], sub), rule.head.predicate,
                    Resolve(rule.head.args[1], sub)};
    if (head.head == head.tail) return;
    out.push_back({rule.id, sub, std::move(head)});
    return;
  }
  const Atom &atom = rule.body[atom_index];
  if (atom.args.size() == 1) {
    auto it = index.unary.find(atom.predicate);
    if (it == index.unary.end()) return;
    for (const std::string &entity : it->second) {
      bool bound = false;
      if (!Unify(atom.args[0], entity, sub, bound)) continue;
      Ground(rule, index, atom_index + 1, sub, out);
      if (bound) sub.erase(atom.args[0].name);
    }
    return;
  }
  auto it = index.binary.find(atom.predicate);
  if (it == index.binary.end()) return;
  for (const auto &[head, tail] : it->second) {
    bool bound_head = false, bound_tail = false;
    if (Unify(atom.args[0], head, sub, bound_head) &&
        Unify(atom.args[1], tail, sub, bound_tail)) {
      Ground(rule, index, atom_index + 1, sub, out);
    }
    if (bound_tail) sub.erase(atom.args[1].name);
    if (bound_head) sub.erase(atom.args[0].name);
  }
}

}  // namespace

std::string FormatAtom(const Atom &atom) {
  std::string text = atom.predicate + "(";
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    if (i > 0) text += ",";
    text += TermText(atom.args[i]);
  }
  return text + ")";
}

std::string FormatRule(const Rule &rule) {
  std::string text;
  for (std::size_t i = 0; i < rule.body.size(); ++i) {
    if (i > 0) text += " & ";
    text += FormatAtom(rule.body[i]);
  }
  return text + " => " + FormatAtom(rule.head);
}

std::vector<Rule> ParseRules(std::string_view text) {
  std::vector<Rule> rules;
  std::size_t offset = 0;
  while (offset < text.size()) {
    std::size_t newline = text.find('\n', offset);
    std::size_t end = newline == std::string_view::npos ? text.size() : newline;
    std::string_view line = text.substr(offset, end - offset);
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first != std::string_view::npos && line[first] != '#') {
      Rule rule = RuleParser(line, offset).Parse();
      if (rule.head.args.size() != 2) {
        throw ParseError("rule: head must be a binary atom", offset);
      }
      for (const Term &term : rule.head.args) {
        if (!term.variable) continue;
        bool found = false;
        for (const Atom &atom : rule.body) {
          for (const Term &t : atom.args) found |= t.variable && t.name == term.name;
        }
        if (!found) {
          throw ParseError("rule: head variable " + term.name +
                               " does not occur in the body",
                           offset);
        }
      }
      rule.id = static_cast<int>(rules.size()) + 1;
      rules.push_back(std::move(rule));
    }
    offset = end + 1;
  }
  return rules;
}

const std::vector<Rule> &BuiltinRuleset() {
  static const std::vector<Rule> rules =
      ParseRules(resources::ConsistencyRules());
  return rules;
}

FactBase FactsFromDocument(const Document &document) {
  FactBase facts;
  for (const RelationTriple &r : document.relations) {
    facts.binary.insert({r.head, r.type, r.tail});
  }
  for (const EntityCluster &cluster : document.clusters) {
    for (const std::string &tag : cluster.tags) {
      facts.unary.insert({tag, cluster.id});
    }
  }
  return facts;
}

std::vector<Firing> Fire(const FactBase &facts,
                         const std::vector<Rule> &rules) {
  FactIndex index(facts);
  std::vector<Firing> firings;
  Substitution sub;
  for (const Rule &rule : rules) Ground(rule, index, 0, sub, firings);
  return firings;
}

FactBase Closure(const FactBase &facts, const std::vector<Rule> &rules,
                 ClosureStats *stats) {
  // Upper bound on facts the closure can add: head predicates times ordered
  // pairs of distinct entities (constants in heads included).
  std::set<std::string> entities;
  for (const BinaryFact &f : facts.binary) {
    entities.insert(f.head);
    entities.insert(f.tail);
  }
  for (const UnaryFact &f : facts.unary) entities.insert(f.entity);
  std::set<std::string> head_predicates;
  for (const Rule &rule : rules) {
    head_predicates.insert(rule.head.predicate);
    for (const Term &t : rule.head.args) {
      if (!t.variable) entities.insert(t.name);
    }
  }
  const std::size_t n = entities.size();
  const std::size_t cap = head_predicates.size() * n * (n > 0 ? n - 1 : 0) + 1;

  FactBase closed = facts;
  ClosureStats local;
  while (true) {
    if (static_cast<std::size_t>(local.rounds) > cap) {
      throw Error("CLOSURE_CAP", "closure did not converge within " +
                                     std::to_string(cap) + " rounds");
    }
    ++local.rounds;
    std::size_t added = 0;
    for (Firing &firing : Fire(closed, rules)) {
      added += closed.binary.insert(std::move(firing.head)).second;
    }
    local.derived += added;
    if (added == 0) break;
  }
  if (stats != nullptr) *stats = local;
  return closed;
}

ViolationReport CheckViolations(const FactBase &facts,
                                const std::vector<Rule> &rules) {
  ViolationReport report;
  std::vector<Firing> firings = Fire(facts, rules);
  report.firings = firings.size();
  for (Firing &firing : firings) {
    if (facts.binary.count(firing.head)) continue;
    report.violations.push_back(
        {firing.rule_id, std::move(firing.head), std::move(firing.substitution)});
  }
  return report;
}

ViolationReport CheckViolations(const Document &document,
                                const std::vector<Rule> &rules) {
  return CheckViolations(FactsFromDocument(document), rules);
}

std::vector<RelationTriple> DerivedRelations(const Document &document,
                                             const std::vector<Rule> &rules) {
  FactBase facts = FactsFromDocument(document);
  FactBase closed = Closure(facts, rules);
  std::vector<RelationTriple> derived;
  for (const BinaryFact &f : closed.binary) {
    if (!facts.binary.count(f)) derived.push_back({f.head, f.predicate, f.tail});
  }
  return derived;
}

}  // namespace ecie
