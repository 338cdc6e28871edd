#include "ecie/agreement.h"

#include <map>
#include <set>
#include <tuple>

namespace ecie {

namespace {

constexpr char kAbsent[] = "absent";

void RequireItems(std::size_t n) {
  if (n == 0) throw Error("EMPTY_ANNOTATION", "no annotated items");
}

KappaRow RowFor(const BinaryLabelItems &items) {
  AnnotationPair pair = items.ToPair();
  return {items.label, items.Support(), ObservedAgreement(pair),
          ExpectedAgreement(pair), CohenKappa(pair)};
}

// Per-label presence over `keys`, given each side's label sets.
template <typename Key>
std::vector<BinaryLabelItems> PresenceByLabel(
    const std::vector<Key> &keys,
    const std::map<Key, std::set<std::string>> &a,
    const std::map<Key, std::set<std::string>> &b) {
  static const std::set<std::string> kNone;
  auto labels_of = [](const auto &side, const Key &key) -> const auto & {
    auto it = side.find(key);
    return it == side.end() ? kNone : it->second;
  };
  std::set<std::string> labels;
  for (const Key &key : keys) {
    const auto &la = labels_of(a, key);
    const auto &lb = labels_of(b, key);
    labels.insert(la.begin(), la.end());
    labels.insert(lb.begin(), lb.end());
  }
  std::vector<BinaryLabelItems> result;
  for (const std::string &label : labels) {
    BinaryLabelItems items{label, {}};
    for (const Key &key : keys) {
      items.items.emplace_back(labels_of(a, key).count(label) > 0,
                               labels_of(b, key).count(label) > 0);
    }
    result.push_back(std::move(items));
  }
  return result;
}

// Multi-label layer: detection over the union of items, per-label presence
// over the union (or the intersection when conditioned).
template <typename Key>
AgreementReport MultilabelReport(
    const std::map<Key, std::set<std::string>> &a,
    const std::map<Key, std::set<std::string>> &b, bool conditioned) {
  std::set<Key> all;
  for (const auto &[key, labels] : a) all.insert(key);
  for (const auto &[key, labels] : b) all.insert(key);
  RequireItems(all.size());

  AgreementReport report;
  AnnotationPair detection;
  std::vector<Key> scored;
  for (const Key &key : all) {
    const bool in_a = a.count(key) > 0, in_b = b.count(key) > 0;
    detection.items.emplace_back(in_a ? "annotated" : kAbsent,
                                 in_b ? "annotated" : kAbsent);
    if (!conditioned || (in_a && in_b)) scored.push_back(key);
  }
  report.has_detection = true;
  report.detection = {"detection", static_cast<double>(all.size()),
                      ObservedAgreement(detection),
                      ExpectedAgreement(detection), CohenKappa(detection)};
  report.items = scored.size();
  RequireItems(scored.size());

  std::vector<BinaryLabelItems> labels = PresenceByLabel(scored, a, b);
  double total = 0;
  for (const BinaryLabelItems &items : labels) {
    KappaRow row = RowFor(items);
    report.p_o += row.support * row.p_o;
    report.p_e += row.support * row.p_e;
    total += row.support;
    report.per_label.push_back(std::move(row));
  }
  if (total > 0) {
    report.p_o /= total;
    report.p_e /= total;
    report.kappa = MultilabelKappa(labels);
  } else {
    // No labels on any scored item: both sides agree trivially.
    report.p_o = 1.0;
    report.p_e = 1.0;
    report.kappa = 1.0;
  }
  return report;
}

AgreementReport CategoricalReport(const AnnotationPair &pair) {
  RequireItems(pair.items.size());
  AgreementReport report;
  report.items = pair.items.size();
  report.p_o = ObservedAgreement(pair);
  report.p_e = ExpectedAgreement(pair);
  report.kappa = CohenKappa(pair);
  std::set<std::string> labels;
  for (const auto &[x, y] : pair.items) {
    labels.insert(x);
    labels.insert(y);
  }
  for (const std::string &label : labels) {
    BinaryLabelItems items{label, {}};
    for (const auto &[x, y] : pair.items) {
      items.items.emplace_back(x == label, y == label);
    }
    report.per_label.push_back(RowFor(items));
  }
  return report;
}

using MentionKey = std::pair<std::string, Mention>;
using PairKey = std::tuple<std::string, Mention, Mention>;

std::map<MentionKey, std::set<std::string>> MentionTags(
    const std::vector<Document> &docs) {
  std::map<MentionKey, std::set<std::string>> out;
  for (const Document &d : docs) {
    for (const EntityCluster &c : d.clusters) {
      for (Mention m : c.mentions) {
        out[{d.id, m}].insert(c.tags.begin(), c.tags.end());
      }
    }
  }
  return out;
}

std::map<PairKey, std::set<std::string>> RelationPairs(
    const std::vector<Document> &docs) {
  std::map<PairKey, std::set<std::string>> out;
  for (const Document &d : docs) {
    for (const RelationTriple &r : d.relations) {
      const EntityCluster *head = d.FindCluster(r.head);
      const EntityCluster *tail = d.FindCluster(r.tail);
      if (head == nullptr || tail == nullptr) continue;
      for (Mention h : head->mentions) {
        for (Mention t : tail->mentions) out[{d.id, h, t}].insert(r.type);
      }
    }
  }
  return out;
}

std::string LinkLabel(const KbLink &link) {
  switch (link.state) {
    case KbLink::State::kUnannotated:
      return "unlinked";
    case KbLink::State::kNil:
      return "NIL";
    case KbLink::State::kEntity:
      return link.id;
  }
  return "unlinked";
}

std::map<MentionKey, std::string> MentionLinks(
    const std::vector<Document> &docs) {
  std::map<MentionKey, std::string> out;
  for (const Document &d : docs) {
    for (const EntityCluster &c : d.clusters) {
      for (Mention m : c.mentions) out[{d.id, m}] = LinkLabel(c.link);
    }
  }
  return out;
}

AnnotationPair LinkingPair(const std::vector<Document> &a,
                           const std::vector<Document> &b) {
  auto la = MentionLinks(a), lb = MentionLinks(b);
  std::set<MentionKey> keys;
  for (const auto &[k, v] : la) keys.insert(k);
  for (const auto &[k, v] : lb) keys.insert(k);
  AnnotationPair pair;
  for (const MentionKey &k : keys) {
    auto ia = la.find(k), ib = lb.find(k);
    pair.items.emplace_back(ia == la.end() ? kAbsent : ia->second,
                            ib == lb.end() ? kAbsent : ib->second);
  }
  return pair;
}

AnnotationPair CorefPair(const std::vector<Document> &a,
                         const std::vector<Document> &b) {
  // (document, mention) -> cluster index per side.
  auto owners = [](const std::vector<Document> &docs) {
    std::map<MentionKey, int> out;
    for (const Document &d : docs) {
      for (std::size_t i = 0; i < d.clusters.size(); ++i) {
        for (Mention m : d.clusters[i].mentions) {
          out[{d.id, m}] = static_cast<int>(i);
        }
      }
    }
    return out;
  };
  auto oa = owners(a), ob = owners(b);
  std::map<std::string, std::set<Mention>> mentions;
  for (const auto &[k, v] : oa) mentions[k.first].insert(k.second);
  for (const auto &[k, v] : ob) mentions[k.first].insert(k.second);

  auto label = [](const std::map<MentionKey, int> &owner, const MentionKey &x,
                  const MentionKey &y) -> std::string {
    auto ix = owner.find(x), iy = owner.find(y);
    if (ix == owner.end() || iy == owner.end()) return kAbsent;
    return ix->second == iy->second ? "same" : "different";
  };
  AnnotationPair pair;
  for (const auto &[doc, spans] : mentions) {
    std::vector<Mention> list(spans.begin(), spans.end());
    for (std::size_t i = 0; i < list.size(); ++i) {
      for (std::size_t j = i + 1; j < list.size(); ++j) {
        MentionKey x{doc, list[i]}, y{doc, list[j]};
        pair.items.emplace_back(label(oa, x, y), label(ob, x, y));
      }
    }
  }
  return pair;
}

}  // namespace

double ObservedAgreement(const AnnotationPair &pair) {
  RequireItems(pair.items.size());
  std::size_t agree = 0;
  for (const auto &[x, y] : pair.items) agree += x == y;
  return static_cast<double>(agree) / static_cast<double>(pair.items.size());
}

double ExpectedAgreement(const AnnotationPair &pair) {
  RequireItems(pair.items.size());
  std::map<std::string, std::pair<double, double>> counts;
  for (const auto &[x, y] : pair.items) {
    counts[x].first += 1;
    counts[y].second += 1;
  }
  const double n = static_cast<double>(pair.items.size());
  double p_e = 0;
  for (const auto &[label, c] : counts) p_e += (c.first / n) * (c.second / n);
  return p_e;
}

double CohenKappa(const AnnotationPair &pair) {
  const double p_o = ObservedAgreement(pair);
  const double p_e = ExpectedAgreement(pair);
  if (p_e >= 1.0) {
    if (p_o >= 1.0) return 1.0;
    throw Error("KAPPA_UNDEFINED", "kappa undefined: chance agreement is 1");
  }
  return (p_o - p_e) / (1.0 - p_e);
}

double BinaryLabelItems::Support() const {
  double support = 0;
  for (const auto &[x, y] : items) support += x + y;
  return support;
}

AnnotationPair BinaryLabelItems::ToPair() const {
  AnnotationPair pair;
  pair.items.reserve(items.size());
  for (const auto &[x, y] : items) {
    pair.items.emplace_back(x ? "1" : "0", y ? "1" : "0");
  }
  return pair;
}

double MultilabelKappa(const std::vector<BinaryLabelItems> &labels) {
  if (labels.empty()) throw Error("EMPTY_ANNOTATION", "no labels");
  double weighted = 0, total = 0;
  for (const BinaryLabelItems &items : labels) {
    const double support = items.Support();
    if (support == 0) continue;
    weighted += support * CohenKappa(items.ToPair());
    total += support;
  }
  if (total == 0) throw Error("EMPTY_ANNOTATION", "no label occurrences");
  return weighted / total;
}

AgreementTask ParseAgreementTask(std::string_view name) {
  if (name == "entity") return AgreementTask::kEntity;
  if (name == "coref") return AgreementTask::kCoref;
  if (name == "linking") return AgreementTask::kLinking;
  if (name == "relation") return AgreementTask::kRelation;
  throw Error("USAGE", "unknown agreement task '" + std::string(name) + "'");
}

AgreementReport CorpusAgreement(const std::vector<Document> &a,
                                const std::vector<Document> &b,
                                AgreementTask task, bool conditioned) {
  switch (task) {
    case AgreementTask::kEntity:
      return MultilabelReport(MentionTags(a), MentionTags(b), conditioned);
    case AgreementTask::kRelation:
      return MultilabelReport(RelationPairs(a), RelationPairs(b), conditioned);
    case AgreementTask::kCoref:
      return CategoricalReport(CorefPair(a, b));
    case AgreementTask::kLinking:
      return CategoricalReport(LinkingPair(a, b));
  }
  throw Error("USAGE", "unknown agreement task");
}

}  // namespace ecie
