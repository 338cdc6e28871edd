#ifndef ECIE_IE_METRICS_H_
#define ECIE_IE_METRICS_H_

// Mention-level, hard entity-level and soft entity-level precision, recall
// and F1 for multi-label NER and relation extraction.
//
// Every label l induces four sets. For NER an instance is a mention span and
// a "cluster" is an entity cluster; for RE an instance is an ordered mention
// pair and a "cluster" is the full cross product of the mentions of two
// related entity clusters.
//
//   predicted clusters   P_C(l)   gold clusters   G_C(l)
//   predicted instances  P_M(l)   gold instances  G_M(l)
//
// Soft credit:
//   tp_p(l) = sum over C_p in P_C(l) of |C_p ∩ G_M(l)| / |C_p|
//   tp_g(l) = sum over C_g in G_C(l) of |C_g ∩ P_M(l)| / |C_g|
//   fp(l)   = |P_C(l)| - tp_p(l),   fn(l) = |G_C(l)| - tp_g(l)
// and precision/recall are micro-averaged over labels.
//
// Degenerate denominators: a side whose denominator is zero scores 1.0 when
// both prediction and gold are empty at that level, else 0.0. F1 is 0 when
// precision + recall is 0.

#include <compare>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ecie/corpus.h"

namespace ecie {

enum class Task { kNer, kRe };
enum class Level { kMention, kHard, kSoft };

std::string_view TaskName(Task task);
std::string_view LevelName(Level level);

// NER instances leave `tail` at its default value.
struct Instance {
  Mention head;
  Mention tail;

  friend auto operator<=>(const Instance &, const Instance &) = default;
};

using InstanceSet = std::set<Instance>;

struct LabelView {
  std::vector<InstanceSet> predicted_clusters;  // P_C(l)
  std::vector<InstanceSet> gold_clusters;       // G_C(l)
  InstanceSet predicted_instances;              // P_M(l)
  InstanceSet gold_instances;                   // G_M(l)
};

using EvalView = std::map<std::string, LabelView>;

// A group of instances carrying a set of labels: one entity cluster (NER) or
// one related cluster pair (RE).
struct LabeledGroup {
  InstanceSet instances;
  std::set<std::string> labels;
};

EvalView BuildEvalView(const std::vector<LabeledGroup> &gold,
                       const std::vector<LabeledGroup> &predicted);

// Throws Error("TOKEN_SPACE_MISMATCH") when the prediction carries a token
// sequence of a different length, or mentions beyond the gold tokens.
EvalView BuildEvalView(const Document &gold, const Document &predicted,
                       Task task);

std::vector<LabeledGroup> LabeledGroups(const Document &document, Task task);

// Additive counts from which P/R/F1 are derived. Precision is
// credited_predicted / predicted, recall is credited_gold / gold.
struct Counts {
  double credited_predicted = 0;
  double predicted = 0;
  double credited_gold = 0;
  double gold = 0;

  Counts &operator+=(const Counts &other);
};

struct Prf {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

struct PRFReport : Prf {
  Level level = Level::kMention;
  Task task = Task::kNer;
};

double HarmonicMean(double precision, double recall);
Prf PrfFromCounts(const Counts &counts);

Counts MentionCounts(const LabelView &view);
Counts HardEntityCounts(const LabelView &view);
Counts SoftEntityCounts(const LabelView &view);
Counts LevelCounts(const LabelView &view, Level level);

// Per-label soft quantities; tp_p + fp == |P_C(l)| and tp_g + fn == |G_C(l)|.
struct SoftLabelCounts {
  double tp_p = 0;
  double tp_g = 0;
  double fp = 0;
  double fn = 0;
};

// Labels absent from the view yield all zeros.
SoftLabelCounts SoftEntityLabelCounts(const EvalView &view,
                                      const std::string &label);

PRFReport MentionPrf(const EvalView &view, Task task);
PRFReport HardEntityPrf(const EvalView &view, Task task);
PRFReport SoftEntityPrf(const EvalView &view, Task task);

// Corpus-level accumulator: counts are summed over documents and labels
// before P/R/F1 is taken (micro-averaging).
class CorpusScorer {
 public:
  explicit CorpusScorer(Task task) : task_(task) {}

  void Add(const EvalView &view);
  void Add(const Document &gold, const Document &predicted);

  PRFReport Report(Level level) const;
  PRFReport LabelReport(const std::string &label, Level level) const;
  std::vector<std::string> Labels() const;
  const Counts &Total(Level level) const;

 private:
  Task task_;
  std::map<Level, Counts> total_;
  std::map<std::string, std::map<Level, Counts>> per_label_;
};

}  // namespace ecie

#endif  // ECIE_IE_METRICS_H_
