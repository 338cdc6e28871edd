#include "ecie/coref_metrics.h"

#include <set>

#include "ecie/assignment.h"

namespace ecie {

namespace {

double SafeDivide(double numerator, double denominator) {
  return denominator > 0 ? numerator / denominator : 0.0;
}

Prf MakePrf(double precision, double recall) {
  return {precision, recall, HarmonicMean(precision, recall)};
}

// MUC recall of `key` against `response`: each key cluster is split into the
// parts lying in distinct response clusters, with every mention missing from
// the response counted as a part of its own.
double MucRecall(const Partition &key, const Partition &response) {
  double numerator = 0, denominator = 0;
  for (const auto &cluster : key.clusters()) {
    std::set<int> parts;
    int missing = 0;
    for (int mention : cluster) {
      int c = response.ClusterOf(mention);
      if (c < 0) {
        ++missing;
      } else {
        parts.insert(c);
      }
    }
    const double size = static_cast<double>(cluster.size());
    numerator += size - static_cast<double>(parts.size() + missing);
    denominator += size - 1;
  }
  return SafeDivide(numerator, denominator);
}

double BCubedPrecisionOf(const Partition &response, const Partition &key) {
  double sum = 0;
  for (const auto &cluster : response.clusters()) {
    std::map<int, std::size_t> shared;
    for (int mention : cluster) {
      int c = key.ClusterOf(mention);
      if (c >= 0) ++shared[c];
    }
    double cluster_sum = 0;
    for (const auto &[c, n] : shared) {
      cluster_sum += static_cast<double>(n) * static_cast<double>(n);
    }
    sum += cluster_sum / static_cast<double>(cluster.size());
  }
  return SafeDivide(sum, static_cast<double>(response.num_mentions()));
}

}  // namespace

Partition::Partition(std::vector<std::vector<int>> clusters)
    : clusters_(std::move(clusters)) {
  for (std::size_t i = 0; i < clusters_.size(); ++i) {
    if (clusters_[i].empty()) throw Error("PARTITION", "empty cluster");
    for (int mention : clusters_[i]) {
      if (!cluster_of_.emplace(mention, static_cast<int>(i)).second) {
        throw Error("PARTITION", "mention " + std::to_string(mention) +
                                     " appears in two clusters");
      }
    }
  }
}

int Partition::ClusterOf(int mention) const {
  auto it = cluster_of_.find(mention);
  return it == cluster_of_.end() ? -1 : it->second;
}

Prf Muc(const Partition &gold, const Partition &predicted) {
  return MakePrf(MucRecall(predicted, gold), MucRecall(gold, predicted));
}

Prf BCubed(const Partition &gold, const Partition &predicted) {
  return MakePrf(BCubedPrecisionOf(predicted, gold),
                 BCubedPrecisionOf(gold, predicted));
}

Prf CeafE(const Partition &gold, const Partition &predicted) {
  const auto &g = gold.clusters();
  const auto &p = predicted.clusters();
  if (g.empty() || p.empty()) return {};

  // phi4 is zero between clusters sharing no mention, so the optimal
  // alignment decomposes over connected components of the overlap graph.
  // Nodes 0..|g|-1 are gold clusters, |g|.. are predicted clusters.
  const int num_gold = static_cast<int>(g.size());
  std::vector<int> parent(g.size() + p.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  auto find = [&parent](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<std::map<int, double>> shared(g.size());
  for (int i = 0; i < num_gold; ++i) {
    for (int mention : g[i]) {
      int j = predicted.ClusterOf(mention);
      if (j < 0) continue;
      shared[i][j] += 1;
      parent[find(i)] = find(num_gold + j);
    }
  }

  std::map<int, std::pair<std::vector<int>, std::vector<int>>> components;
  for (int i = 0; i < num_gold; ++i) {
    if (!shared[i].empty()) components[find(i)].first.push_back(i);
  }
  for (int j = 0; j < static_cast<int>(p.size()); ++j) {
    auto it = components.find(find(num_gold + j));
    if (it != components.end()) it->second.second.push_back(j);
  }

  double similarity = 0;
  for (const auto &[root, members] : components) {
    const auto &[rows, cols] = members;
    std::vector<std::vector<double>> weights(rows.size(),
                                             std::vector<double>(cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t c = 0; c < cols.size(); ++c) {
        auto it = shared[rows[r]].find(cols[c]);
        if (it == shared[rows[r]].end()) continue;
        weights[r][c] = 2.0 * it->second /
                        static_cast<double>(g[rows[r]].size() +
                                            p[cols[c]].size());
      }
    }
    std::vector<int> assignment = MaxWeightAssignment(weights);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (assignment[r] >= 0) similarity += weights[r][assignment[r]];
    }
  }
  return MakePrf(similarity / static_cast<double>(p.size()),
                 similarity / static_cast<double>(g.size()));
}

double AverageCorefF1(const Partition &gold, const Partition &predicted) {
  return ScoreCoreference(gold, predicted).average_f1;
}

CorefScores ScoreCoreference(const Partition &gold,
                             const Partition &predicted) {
  CorefScores scores;
  scores.muc = Muc(gold, predicted);
  scores.b_cubed = BCubed(gold, predicted);
  scores.ceaf_e = CeafE(gold, predicted);
  scores.average_f1 =
      (scores.muc.f1 + scores.b_cubed.f1 + scores.ceaf_e.f1) / 3.0;
  return scores;
}

int MentionInterner::Intern(const std::string &document_id, Mention mention) {
  auto [it, inserted] =
      ids_.emplace(std::make_pair(document_id, mention),
                   static_cast<int>(ids_.size()));
  return it->second;
}

Partition PartitionOf(const std::vector<Document> &documents,
                      MentionInterner &interner) {
  std::vector<std::vector<int>> clusters;
  for (const Document &document : documents) {
    for (const EntityCluster &cluster : document.clusters) {
      std::vector<int> ids;
      for (Mention m : cluster.mentions) {
        ids.push_back(interner.Intern(document.id, m));
      }
      clusters.push_back(std::move(ids));
    }
  }
  return Partition(std::move(clusters));
}

}  // namespace ecie
