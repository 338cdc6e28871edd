#include "ecie/ie_metrics.h"

#include <algorithm>

namespace ecie {

namespace {

std::size_t IntersectionSize(const InstanceSet &a, const InstanceSet &b) {
  const InstanceSet &small = a.size() <= b.size() ? a : b;
  const InstanceSet &large = a.size() <= b.size() ? b : a;
  std::size_t n = 0;
  for (const Instance &x : small) n += large.count(x);
  return n;
}

double Ratio(double numerator, double denominator, bool both_empty) {
  if (denominator > 0) return numerator / denominator;
  return both_empty ? 1.0 : 0.0;
}

const Counts kZeroCounts{};

}  // namespace

std::string_view TaskName(Task task) {
  return task == Task::kNer ? "ner" : "re";
}

std::string_view LevelName(Level level) {
  switch (level) {
    case Level::kMention:
      return "mention";
    case Level::kHard:
      return "hard";
    case Level::kSoft:
      return "soft";
  }
  return "mention";
}

EvalView BuildEvalView(const std::vector<LabeledGroup> &gold,
                       const std::vector<LabeledGroup> &predicted) {
  EvalView view;
  for (const LabeledGroup &group : gold) {
    if (group.instances.empty()) continue;
    for (const std::string &label : group.labels) {
      LabelView &lv = view[label];
      lv.gold_clusters.push_back(group.instances);
      lv.gold_instances.insert(group.instances.begin(), group.instances.end());
    }
  }
  for (const LabeledGroup &group : predicted) {
    if (group.instances.empty()) continue;
    for (const std::string &label : group.labels) {
      LabelView &lv = view[label];
      lv.predicted_clusters.push_back(group.instances);
      lv.predicted_instances.insert(group.instances.begin(),
                                    group.instances.end());
    }
  }
  return view;
}

std::vector<LabeledGroup> LabeledGroups(const Document &document, Task task) {
  std::vector<LabeledGroup> groups;
  if (task == Task::kNer) {
    for (const EntityCluster &cluster : document.clusters) {
      LabeledGroup group;
      for (Mention m : cluster.mentions) group.instances.insert({m, {}});
      group.labels.insert(cluster.tags.begin(), cluster.tags.end());
      groups.push_back(std::move(group));
    }
    return groups;
  }
  std::map<std::pair<std::string, std::string>, std::set<std::string>> pairs;
  for (const RelationTriple &r : document.relations) {
    pairs[{r.head, r.tail}].insert(r.type);
  }
  for (const auto &[pair, types] : pairs) {
    const EntityCluster *head = document.FindCluster(pair.first);
    const EntityCluster *tail = document.FindCluster(pair.second);
    if (head == nullptr || tail == nullptr) {
      throw Error("DANGLING_RELATION",
                  document.id + ": relation references a missing cluster");
    }
    LabeledGroup group;
    for (Mention h : head->mentions) {
      for (Mention t : tail->mentions) group.instances.insert({h, t});
    }
    group.labels = types;
    groups.push_back(std::move(group));
  }
  return groups;
}

EvalView BuildEvalView(const Document &gold, const Document &predicted,
                       Task task) {
  const int num_tokens = static_cast<int>(gold.tokens.size());
  if (!predicted.tokens.empty() &&
      predicted.tokens.size() != gold.tokens.size()) {
    throw Error("TOKEN_SPACE_MISMATCH",
                gold.id + ": prediction has " +
                    std::to_string(predicted.tokens.size()) +
                    " tokens, gold has " + std::to_string(num_tokens));
  }
  for (const EntityCluster &cluster : predicted.clusters) {
    for (Mention m : cluster.mentions) {
      if (m.end > num_tokens) {
        throw Error("TOKEN_SPACE_MISMATCH",
                    gold.id + ": predicted mention ends at token " +
                        std::to_string(m.end) + " beyond " +
                        std::to_string(num_tokens) + " gold tokens");
      }
    }
  }
  return BuildEvalView(LabeledGroups(gold, task),
                       LabeledGroups(predicted, task));
}

Counts &Counts::operator+=(const Counts &other) {
  credited_predicted += other.credited_predicted;
  predicted += other.predicted;
  credited_gold += other.credited_gold;
  gold += other.gold;
  return *this;
}

double HarmonicMean(double precision, double recall) {
  if (precision + recall <= 0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

Prf PrfFromCounts(const Counts &counts) {
  const bool both_empty = counts.predicted == 0 && counts.gold == 0;
  Prf prf;
  prf.precision =
      Ratio(counts.credited_predicted, counts.predicted, both_empty);
  prf.recall = Ratio(counts.credited_gold, counts.gold, both_empty);
  prf.f1 = HarmonicMean(prf.precision, prf.recall);
  return prf;
}

Counts MentionCounts(const LabelView &view) {
  double tp = static_cast<double>(
      IntersectionSize(view.predicted_instances, view.gold_instances));
  return {tp, static_cast<double>(view.predicted_instances.size()), tp,
          static_cast<double>(view.gold_instances.size())};
}

Counts HardEntityCounts(const LabelView &view) {
  // Clusters under one label are disjoint, so an exact match pairs at most
  // one predicted cluster with one gold cluster.
  std::set<InstanceSet> gold(view.gold_clusters.begin(),
                             view.gold_clusters.end());
  double tp = 0;
  for (const InstanceSet &cluster : view.predicted_clusters) {
    tp += gold.count(cluster) ? 1 : 0;
  }
  return {tp, static_cast<double>(view.predicted_clusters.size()), tp,
          static_cast<double>(view.gold_clusters.size())};
}

Counts SoftEntityCounts(const LabelView &view) {
  Counts counts;
  for (const InstanceSet &cluster : view.predicted_clusters) {
    counts.credited_predicted +=
        static_cast<double>(IntersectionSize(cluster, view.gold_instances)) /
        static_cast<double>(cluster.size());
  }
  for (const InstanceSet &cluster : view.gold_clusters) {
    counts.credited_gold +=
        static_cast<double>(
            IntersectionSize(cluster, view.predicted_instances)) /
        static_cast<double>(cluster.size());
  }
  counts.predicted = static_cast<double>(view.predicted_clusters.size());
  counts.gold = static_cast<double>(view.gold_clusters.size());
  return counts;
}

Counts LevelCounts(const LabelView &view, Level level) {
  switch (level) {
    case Level::kMention:
      return MentionCounts(view);
    case Level::kHard:
      return HardEntityCounts(view);
    case Level::kSoft:
      return SoftEntityCounts(view);
  }
  return {};
}

SoftLabelCounts SoftEntityLabelCounts(const EvalView &view,
                                      const std::string &label) {
  auto it = view.find(label);
  if (it == view.end()) return {};
  Counts c = SoftEntityCounts(it->second);
  return {c.credited_predicted, c.credited_gold,
          c.predicted - c.credited_predicted, c.gold - c.credited_gold};
}

namespace {

PRFReport ViewReport(const EvalView &view, Task task, Level level) {
  Counts total;
  for (const auto &[label, lv] : view) total += LevelCounts(lv, level);
  PRFReport report;
  static_cast<Prf &>(report) = PrfFromCounts(total);
  report.level = level;
  report.task = task;
  return report;
}

}  // namespace

PRFReport MentionPrf(const EvalView &view, Task task) {
  return ViewReport(view, task, Level::kMention);
}

PRFReport HardEntityPrf(const EvalView &view, Task task) {
  return ViewReport(view, task, Level::kHard);
}

PRFReport SoftEntityPrf(const EvalView &view, Task task) {
  return ViewReport(view, task, Level::kSoft);
}

void CorpusScorer::Add(const EvalView &view) {
  for (const auto &[label, lv] : view) {
    for (Level level : {Level::kMention, Level::kHard, Level::kSoft}) {
      Counts c = LevelCounts(lv, level);
      total_[level] += c;
      per_label_[label][level] += c;
    }
  }
}

void CorpusScorer::Add(const Document &gold, const Document &predicted) {
  Add(BuildEvalView(gold, predicted, task_));
}

const Counts &CorpusScorer::Total(Level level) const {
  auto it = total_.find(level);
  return it == total_.end() ? kZeroCounts : it->second;
}

PRFReport CorpusScorer::Report(Level level) const {
  PRFReport report;
  static_cast<Prf &>(report) = PrfFromCounts(Total(level));
  report.level = level;
  report.task = task_;
  return report;
}

PRFReport CorpusScorer::LabelReport(const std::string &label,
                                    Level level) const {
  Counts counts;
  if (auto it = per_label_.find(label); it != per_label_.end()) {
    if (auto jt = it->second.find(level); jt != it->second.end()) {
      counts = jt->second;
    }
  }
  PRFReport report;
  static_cast<Prf &>(report) = PrfFromCounts(counts);
  report.level = level;
  report.task = task_;
  return report;
}

std::vector<std::string> CorpusScorer::Labels() const {
  std::vector<std::string> labels;
  for (const auto &[label, counts] : per_label_) labels.push_back(label);
  return labels;
}

}  // namespace ecie
