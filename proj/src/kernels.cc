#include "ecie/kernels.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ecie/error.h"

namespace ecie {

namespace {

[[noreturn]] void ShapeError(const std::string &what) {
  throw Error("SHAPE", "shape mismatch: " + what);
}

double Softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void RequireSquare(const Matrix &m, Eigen::Index n, const char *name) {
  if (m.rows() != n || m.cols() != n) {
    ShapeError(std::string(name) + " must be " + std::to_string(n) + "x" +
               std::to_string(n));
  }
}

void RequireIndex(Eigen::Index j, Eigen::Index n) {
  if (j < 0 || j >= n) {
    ShapeError("span index " + std::to_string(j) + " outside 0.." +
               std::to_string(n - 1));
  }
}

void RequireGate(const GateTransform &gate, Eigen::Index n) {
  if (gate.bias.size() != n || gate.weight.rows() != n ||
      gate.weight.cols() != 2 * n) {
    ShapeError("gate transform must be n x 2n with n = " + std::to_string(n));
  }
}

}  // namespace

std::int64_t SpanCount(std::int64_t num_tokens, std::int64_t max_width) {
  if (max_width < 1 || max_width > num_tokens) {
    throw Error("SPAN_COUNT", "span count needs 1 <= w_max <= |T|, got w_max=" +
                                  std::to_string(max_width) +
                                  ", |T|=" + std::to_string(num_tokens));
  }
  std::int64_t count = 0;
  for (std::int64_t k = 1; k <= max_width; ++k) count += num_tokens - k + 1;
  return count;
}

void ScoreSet::CheckShapes() const {
  const Eigen::Index s = num_spans();
  const Eigen::Index p = num_pruned();
  if (mention.rows() != s) ShapeError("mention scores need one row per span");
  RequireSquare(coref, p, "coref scores");
  if (attention.size() != 0) RequireSquare(attention, p, "attention scores");
  for (const Matrix &m : relation) RequireSquare(m, p, "relation scores");
  if (pruned.empty()) {
    if (p > s) ShapeError("more pruned spans than spans");
    return;
  }
  if (static_cast<Eigen::Index>(pruned.size()) != p) {
    ShapeError("pruned index needs one entry per pruned span");
  }
  for (int idx : pruned) {
    if (idx < 0 || idx >= s) ShapeError("pruned index out of range");
  }
}

ScoreSet AugmentWithPruner(const ScoreSet &scores) {
  scores.CheckShapes();
  ScoreSet out = scores;
  out.mention.colwise() += scores.pruner;
  for (Eigen::Index i = 0; i < scores.num_pruned(); ++i) {
    const double shift = scores.pruner(scores.SpanIndex(i));
    out.coref.row(i).array() += shift;
    for (Matrix &m : out.relation) m.row(i).array() += shift;
  }
  return out;
}

double MultilabelBceLoss(const Matrix &scores, const Matrix &indicators) {
  if (scores.rows() != indicators.rows() || scores.cols() != indicators.cols()) {
    ShapeError("scores and indicators differ");
  }
  if (!scores.allFinite()) throw Error("NON_FINITE", "non-finite score");
  double loss = 0;
  for (Eigen::Index c = 0; c < scores.cols(); ++c) {
    for (Eigen::Index r = 0; r < scores.rows(); ++r) {
      const double y = indicators(r, c);
      if (y != 0.0 && y != 1.0) {
        throw Error("INDICATOR", "indicators must be 0 or 1");
      }
      // -log sigmoid(x) = softplus(-x); -log(1 - sigmoid(x)) = softplus(x)
      loss += y == 1.0 ? Softplus(-scores(r, c)) : Softplus(scores(r, c));
    }
  }
  return loss;
}

double RelationLoss(const std::vector<Matrix> &scores,
                    const std::vector<Matrix> &indicators) {
  if (scores.size() != indicators.size()) {
    ShapeError("relation scores and indicators differ in type count");
  }
  double loss = 0;
  for (std::size_t l = 0; l < scores.size(); ++l) {
    loss += MultilabelBceLoss(scores[l], indicators[l]);
  }
  return loss;
}

double CorefMarginalLoss(const Matrix &coref,
                         const std::vector<std::vector<int>> &gold) {
  const Eigen::Index p = coref.rows();
  RequireSquare(coref, p, "coref scores");
  if (static_cast<Eigen::Index>(gold.size()) != p) {
    ShapeError("gold antecedents need one set per pruned span");
  }
  if (!coref.allFinite()) throw Error("NON_FINITE", "non-finite score");
  double loss = 0;
  for (Eigen::Index j = 0; j < p; ++j) {
    if (gold[j].empty()) {
      throw Error("EMPTY_GOLD",
                  "span " + std::to_string(j) + " has no gold antecedent");
    }
    const auto antecedents = coref.col(j).head(j + 1).array();
    const double top = antecedents.maxCoeff();
    const double denominator = (antecedents - top).exp().sum();
    double numerator = 0;
    for (int i : gold[j]) {
      if (i < 0 || i > j) {
        throw Error("ANTECEDENT", "gold antecedent " + std::to_string(i) +
                                      " of span " + std::to_string(j) +
                                      " is not in 0.." + std::to_string(j));
      }
      numerator += std::exp(coref(i, j) - top);
    }
    loss += std::log(denominator) - std::log(numerator);
  }
  return std::max(loss, 0.0);
}

double JointLoss(double mention_loss, double coref_loss, double relation_loss,
                 const LossWeights &weights) {
  return weights.mention * mention_loss + weights.coref * coref_loss +
         weights.relation * relation_loss;
}

Vector CorefConfidence(const Matrix &coref, Eigen::Index j) {
  RequireSquare(coref, coref.rows(), "coref scores");
  RequireIndex(j, coref.rows());
  Vector out = Vector::Zero(coref.rows());
  const auto antecedents = coref.col(j).head(j + 1).array();
  const Eigen::ArrayXd e = (antecedents - antecedents.maxCoeff()).exp();
  out.head(j + 1) = (e / e.sum()).matrix();
  return out;
}

Vector CorefUpdateVector(const Vector &confidence, const Matrix &spans,
                         Eigen::Index j) {
  RequireIndex(j, spans.rows());
  if (confidence.size() != spans.rows()) {
    ShapeError("confidence vector needs one entry per pruned span");
  }
  return spans.topRows(j + 1).transpose() * confidence.head(j + 1);
}

Vector RelationUpdateVector(const std::vector<Matrix> &relation,
                            const Matrix &projection, const Matrix &spans,
                            Eigen::Index j) {
  const Eigen::Index p = spans.rows();
  const Eigen::Index n = spans.cols();
  const auto labels = static_cast<Eigen::Index>(relation.size());
  RequireIndex(j, p);
  if (projection.rows() != n || projection.cols() != labels) {
    ShapeError("relation projection must be n x L_R");
  }
  for (const Matrix &m : relation) RequireSquare(m, p, "relation scores");
  Vector u = Vector::Zero(n);
  Vector activated(labels);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index l = 0; l < labels; ++l) {
      activated(l) = std::max(relation[l](i, j), 0.0);
    }
    u.array() += (projection * activated).array() * spans.row(i).transpose().array();
  }
  return u;
}

Matrix RowSoftmax(const Matrix &scores) {
  Matrix out(scores.rows(), scores.cols());
  for (Eigen::Index r = 0; r < scores.rows(); ++r) {
    const Eigen::ArrayXd row = scores.row(r).transpose().array();
    const Eigen::ArrayXd e = (row - row.maxCoeff()).exp();
    out.row(r) = (e / e.sum()).matrix().transpose();
  }
  return out;
}

GateTransform GateTransform::Zero(Eigen::Index n) {
  return {Matrix::Zero(n, 2 * n), Vector::Zero(n)};
}

Vector GatedSpanUpdate(const Vector &g, const Vector &u,
                       const GateTransform &gate) {
  if (g.size() != u.size()) ShapeError("span and update vectors differ");
  RequireGate(gate, g.size());
  Vector stacked(2 * g.size());
  stacked << g, u;
  const Vector pre = gate.weight * stacked + gate.bias;
  const Vector f = pre.unaryExpr([](double x) { return Sigmoid(x); });
  return (f.array() * g.array() + (1.0 - f.array()) * u.array()).matrix();
}

Matrix AttentionPropagation(const Matrix &spans, const Matrix &attention,
                            const GateTransform &gate) {
  RequireSquare(attention, spans.rows(), "attention scores");
  RequireGate(gate, spans.cols());
  const Matrix updates = RowSoftmax(attention) * spans;
  Matrix out(spans.rows(), spans.cols());
  for (Eigen::Index i = 0; i < spans.rows(); ++i) {
    out.row(i) = GatedSpanUpdate(spans.row(i).transpose(),
                                 updates.row(i).transpose(), gate)
                     .transpose();
  }
  return out;
}

Matrix CorefPropagation(const Matrix &spans, const Matrix &coref,
                        const GateTransform &gate) {
  RequireSquare(coref, spans.rows(), "coref scores");
  RequireGate(gate, spans.cols());
  Matrix out(spans.rows(), spans.cols());
  for (Eigen::Index j = 0; j < spans.rows(); ++j) {
    const Vector u = CorefUpdateVector(CorefConfidence(coref, j), spans, j);
    out.row(j) = GatedSpanUpdate(spans.row(j).transpose(), u, gate).transpose();
  }
  return out;
}

Matrix RelationPropagation(const Matrix &spans,
                           const std::vector<Matrix> &relation,
                           const Matrix &projection,
                           const GateTransform &gate) {
  RequireGate(gate, spans.cols());
  Matrix out(spans.rows(), spans.cols());
  for (Eigen::Index j = 0; j < spans.rows(); ++j) {
    const Vector u = RelationUpdateVector(relation, projection, spans, j);
    out.row(j) = GatedSpanUpdate(spans.row(j).transpose(), u, gate).transpose();
  }
  return out;
}

Matrix RunAttentionPropagation(Matrix spans, int iterations,
                               const PairScorer &scorer,
                               const GateTransform &gate) {
  for (int t = 0; t < iterations; ++t) {
    spans = AttentionPropagation(spans, scorer(spans), gate);
  }
  return spans;
}

Matrix RunCorefPropagation(Matrix spans, int iterations,
                           const PairScorer &scorer, const GateTransform &gate) {
  for (int t = 0; t < iterations; ++t) {
    spans = CorefPropagation(spans, scorer(spans), gate);
  }
  return spans;
}

Matrix RunRelationPropagation(Matrix spans, int iterations,
                              const RelationScorer &scorer,
                              const Matrix &projection,
                              const GateTransform &gate) {
  for (int t = 0; t < iterations; ++t) {
    spans = RelationPropagation(spans, scorer(spans), projection, gate);
  }
  return spans;
}

std::vector<int> PruneTopK(const Vector &pruner, int k) {
  const int n = static_cast<int>(pruner.size());
  k = std::clamp(k, 0, n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return pruner(a) > pruner(b); });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace ecie
