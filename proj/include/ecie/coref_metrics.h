#ifndef ECIE_COREF_METRICS_H_
#define ECIE_COREF_METRICS_H_

// MUC, B-cubed and entity-based CEAF (phi4) with singletons retained, plus
// their average F1. Mentions are opaque integer ids; gold and predicted
// partitions may cover different mention sets (end-to-end setting).
//
// Conventions:
//   metric  side       zero denominator ->
//   MUC     P or R     0
//   B3      P or R     0 (no predicted / gold mentions)
//   CEAFe   P or R     0 (no predicted / gold clusters)

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ecie/corpus.h"
#include "ecie/ie_metrics.h"

namespace ecie {

class Partition {
 public:
  Partition() = default;
  // Throws Error("PARTITION") on an empty cluster or a mention listed twice.
  explicit Partition(std::vector<std::vector<int>> clusters);

  const std::vector<std::vector<int>> &clusters() const { return clusters_; }
  std::size_t size() const { return clusters_.size(); }
  // Index of the cluster holding `mention`, or -1.
  int ClusterOf(int mention) const;
  std::size_t num_mentions() const { return cluster_of_.size(); }

 private:
  std::vector<std::vector<int>> clusters_;
  std::map<int, int> cluster_of_;
};

Prf Muc(const Partition &gold, const Partition &predicted);
Prf BCubed(const Partition &gold, const Partition &predicted);
Prf CeafE(const Partition &gold, const Partition &predicted);

struct CorefScores {
  Prf muc;
  Prf b_cubed;
  Prf ceaf_e;
  double average_f1 = 0;
};

double AverageCorefF1(const Partition &gold, const Partition &predicted);
CorefScores ScoreCoreference(const Partition &gold,
                             const Partition &predicted);

// Assigns dense ids to (document id, span) keys so that a corpus becomes one
// partition over the disjoint union of per-document mention sets.
class MentionInterner {
 public:
  int Intern(const std::string &document_id, Mention mention);

 private:
  std::map<std::pair<std::string, Mention>, int> ids_;
};

Partition PartitionOf(const std::vector<Document> &documents,
                      MentionInterner &interner);

}  // namespace ecie

#endif  // ECIE_COREF_METRICS_H_
