#ifndef ECIE_KERNELS_H_
#define ECIE_KERNELS_H_

// Reference kernels for the span-based joint model: span counting, pruner
// score augmentation, losses, coreference confidences and the attention,
// coreference and relation graph-propagation updates.
//
// Conventions: pruned spans are indexed 0..|P|-1 in text order. Pairwise
// matrices are indexed (i, j) with i the antecedent (or source) span and j
// the target span. Span vectors are stored one per row (|P| x n).

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace ecie {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Number of spans of width 1..max_width over num_tokens tokens, summed
// exactly. Throws Error("SPAN_COUNT") unless 1 <= max_width <= num_tokens.
std::int64_t SpanCount(std::int64_t num_tokens, std::int64_t max_width);

struct ScoreSet {
  Matrix mention;               // |S| x L_T
  Matrix coref;                 // |P| x |P|; only i <= j is meaningful
  std::vector<Matrix> relation; // L_R matrices, each |P| x |P|
  Vector pruner;                // |S|
  Matrix attention;             // |P| x |P|
  // S index of each pruned span; empty means pruned span i is span i.
  std::vector<int> pruned;

  Eigen::Index num_spans() const { return pruner.size(); }
  Eigen::Index num_pruned() const { return coref.rows(); }
  int SpanIndex(Eigen::Index p) const {
    return pruned.empty() ? static_cast<int>(p) : pruned[p];
  }
  // Throws Error("SHAPE") on inconsistent dimensions or bad pruned indices.
  void CheckShapes() const;
};

// Adds the pruner score of span s_i to its mention scores and to every
// coreference and relation score where s_i is the first argument.
ScoreSet AugmentWithPruner(const ScoreSet &scores);

// Sum of per-cell binary cross-entropy; numerically stable for large |score|.
// Throws Error("SHAPE"), Error("NON_FINITE") or Error("INDICATOR") (values
// other than 0 and 1).
double MultilabelBceLoss(const Matrix &scores, const Matrix &indicators);

// Relation loss: MultilabelBceLoss summed over the per-type matrices.
double RelationLoss(const std::vector<Matrix> &scores,
                    const std::vector<Matrix> &indicators);

// Negative marginal log-likelihood of the gold antecedents. gold[j] lists the
// gold antecedents of span j (indices <= j; j itself marks a singleton or an
// invalid span). Throws Error("EMPTY_GOLD") if some gold[j] is empty and
// Error("ANTECEDENT") for an index outside 0..j.
double CorefMarginalLoss(const Matrix &coref,
                         const std::vector<std::vector<int>> &gold);

struct LossWeights {
  double mention = 1.0;
  double coref = 1.0;
  double relation = 1.0;
};

double JointLoss(double mention_loss, double coref_loss, double relation_loss,
                 const LossWeights &weights);

// Softmax of column j over antecedents 0..j; entries i > j are exactly 0.
Vector CorefConfidence(const Matrix &coref, Eigen::Index j);

// Weighted average of span vectors 0..j. Throws Error("SHAPE").
Vector CorefUpdateVector(const Vector &confidence, const Matrix &spans,
                         Eigen::Index j);

// Sum over source spans i of (projection * relu(relation(i, j))) ⊙ g_i, with
// projection n x L_R. Throws Error("SHAPE").
Vector RelationUpdateVector(const std::vector<Matrix> &relation,
                            const Matrix &projection, const Matrix &spans,
                            Eigen::Index j);

// Each row mapped to its softmax.
Matrix RowSoftmax(const Matrix &scores);

// Single-layer gate network over [g; u]: weight n x 2n, bias n.
struct GateTransform {
  Matrix weight;
  Vector bias;

  static GateTransform Zero(Eigen::Index n);
  Eigen::Index dim() const { return bias.size(); }
};

// g' = f ⊙ g + (1 - f) ⊙ u with f = sigmoid(weight * [g; u] + bias).
Vector GatedSpanUpdate(const Vector &g, const Vector &u,
                       const GateTransform &gate);

// One iteration of each propagation kind over all pruned spans.
Matrix AttentionPropagation(const Matrix &spans, const Matrix &attention,
                            const GateTransform &gate);
Matrix CorefPropagation(const Matrix &spans, const Matrix &coref,
                        const GateTransform &gate);
Matrix RelationPropagation(const Matrix &spans,
                           const std::vector<Matrix> &relation,
                           const Matrix &projection, const GateTransform &gate);

// Iterated propagation; the scorer is re-evaluated on the current span
// vectors before every iteration.
using PairScorer = std::function<Matrix(const Matrix &spans)>;
using RelationScorer = std::function<std::vector<Matrix>(const Matrix &spans)>;

Matrix RunAttentionPropagation(Matrix spans, int iterations,
                               const PairScorer &scorer,
                               const GateTransform &gate);
Matrix RunCorefPropagation(Matrix spans, int iterations,
                           const PairScorer &scorer, const GateTransform &gate);
Matrix RunRelationPropagation(Matrix spans, int iterations,
                              const RelationScorer &scorer,
                              const Matrix &projection,
                              const GateTransform &gate);

// Indices of the k highest pruner scores (ties to the lower index), returned
// in ascending index order. k is clamped to the number of spans.
std::vector<int> PruneTopK(const Vector &pruner, int k);

}  // namespace ecie

#endif  // ECIE_KERNELS_H_
