#include "ecie/kernel_selftest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace ecie {

oracle::Mat ToNested(const Matrix &m) {
  oracle::Mat out(m.rows(), oracle::Vec(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out[r][c] = m(r, c);
  }
  return out;
}

oracle::Vec ToNested(const Vector &v) { return {v.data(), v.data() + v.size()}; }

std::vector<oracle::Mat> ToNested(const std::vector<Matrix> &ms) {
  std::vector<oracle::Mat> out;
  for (const Matrix &m : ms) out.push_back(ToNested(m));
  return out;
}

double MaxAbsDiff(const Matrix &a, const oracle::Mat &b) {
  double worst = 0;
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      worst = std::max(worst, std::abs(a(r, c) - b[r][c]));
    }
  }
  return worst;
}

double MaxAbsDiff(const Vector &a, const oracle::Vec &b) {
  double worst = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a(i) - b[i]));
  }
  return worst;
}

std::vector<KernelCheck> RunKernelSelftest(int cases_per_kernel,
                                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> value(-3.0, 3.0);
  auto dim = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  auto random_matrix = [&](int rows, int cols) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = value(rng);
    return m;
  };
  auto random_vector = [&](int n) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = value(rng);
    return v;
  };

  std::map<std::string, KernelCheck> checks;
  auto record = [&](const std::string &name, double deviation) {
    KernelCheck &check = checks[name];
    check.kernel = name;
    check.cases += 1;
    check.max_abs_deviation = std::max(check.max_abs_deviation, deviation);
  };

  for (int t = 1; t <= 50; ++t) {
    for (int w = 1; w <= std::min(t, 5); ++w) {
      record("span_count", std::abs(static_cast<double>(
                               SpanCount(t, w) - oracle::EnumerateSpans(t, w))));
    }
  }
  record("span_count", std::abs(static_cast<double>(
                           SpanCount(100, 5) - oracle::EnumerateSpans(100, 5))));

  for (int c = 0; c < cases_per_kernel; ++c) {
    const int p = dim(1, 4);
    const int s = p + dim(0, 3);
    const int n = dim(1, 3);
    const int lt = dim(1, 3);
    const int lr = dim(1, 3);

    ScoreSet scores;
    scores.mention = random_matrix(s, lt);
    scores.coref = random_matrix(p, p);
    for (int l = 0; l < lr; ++l) scores.relation.push_back(random_matrix(p, p));
    scores.pruner = random_vector(s);
    std::vector<int> all(s);
    for (int i = 0; i < s; ++i) all[i] = i;
    std::shuffle(all.begin(), all.end(), rng);
    scores.pruned.assign(all.begin(), all.begin() + p);
    std::sort(scores.pruned.begin(), scores.pruned.end());
    {
      const ScoreSet augmented = AugmentWithPruner(scores);
      oracle::Mat mention = ToNested(scores.mention);
      oracle::Mat coref = ToNested(scores.coref);
      std::vector<oracle::Mat> relation = ToNested(scores.relation);
      oracle::AugmentWithPruner(mention, coref, relation,
                                ToNested(scores.pruner), scores.pruned);
      double deviation = std::max(MaxAbsDiff(augmented.mention, mention),
                                  MaxAbsDiff(augmented.coref, coref));
      for (int l = 0; l < lr; ++l) {
        deviation =
            std::max(deviation, MaxAbsDiff(augmented.relation[l], relation[l]));
      }
      record("augment_with_pruner", deviation);
    }

    Matrix indicators(s, lt);
    for (Eigen::Index i = 0; i < indicators.size(); ++i) {
      indicators.data()[i] = static_cast<double>(dim(0, 1));
    }
    record("multilabel_bce_loss",
           std::abs(MultilabelBceLoss(scores.mention, indicators) -
                    oracle::BceLoss(ToNested(scores.mention),
                                    ToNested(indicators))));

    std::vector<std::vector<int>> gold(p);
    for (int j = 0; j < p; ++j) {
      for (int i = 0; i <= j; ++i) {
        if (dim(0, 1) == 1) gold[j].push_back(i);
      }
      if (gold[j].empty()) gold[j].push_back(j);
    }
    record("coref_marginal_loss",
           std::abs(CorefMarginalLoss(scores.coref, gold) -
                    oracle::CorefMarginalLoss(ToNested(scores.coref), gold)));

    const double le = std::abs(value(rng)), lc = std::abs(value(rng)),
                 lrl = std::abs(value(rng));
    const LossWeights weights{std::abs(value(rng)), std::abs(value(rng)),
                              std::abs(value(rng))};
    record("joint_loss",
           std::abs(JointLoss(le, lc, lrl, weights) -
                    oracle::JointLoss(le, lc, lrl, weights.mention,
                                      weights.coref, weights.relation)));

    const Matrix spans = random_matrix(p, n);
    const oracle::Mat nested_spans = ToNested(spans);
    for (int j = 0; j < p; ++j) {
      const Vector conf = CorefConfidence(scores.coref, j);
      record("coref_confidence",
             MaxAbsDiff(conf, oracle::CorefConfidence(ToNested(scores.coref), j)));
      record("coref_update_vector",
             MaxAbsDiff(CorefUpdateVector(conf, spans, j),
                        oracle::CorefUpdateVector(ToNested(conf), nested_spans,
                                                  j)));
    }

    const Matrix projection = random_matrix(n, lr);
    for (int j = 0; j < p; ++j) {
      record("relation_update_vector",
             MaxAbsDiff(RelationUpdateVector(scores.relation, projection, spans, j),
                        oracle::RelationUpdateVector(ToNested(scores.relation),
                                                     ToNested(projection),
                                                     nested_spans, j)));
    }

    const Matrix attention = random_matrix(p, p);
    record("row_softmax", MaxAbsDiff(RowSoftmax(attention),
                                     oracle::RowSoftmax(ToNested(attention))));

    const GateTransform gate{random_matrix(n, 2 * n), random_vector(n)};
    const oracle::Mat weight = ToNested(gate.weight);
    const oracle::Vec bias = ToNested(gate.bias);
    const Vector g = random_vector(n), u = random_vector(n);
    record("gated_span_update",
           MaxAbsDiff(GatedSpanUpdate(g, u, gate),
                      oracle::GatedSpanUpdate(ToNested(g), ToNested(u), weight,
                                              bias)));
    record("attention_propagation",
           MaxAbsDiff(AttentionPropagation(spans, attention, gate),
                      oracle::AttentionPropagation(nested_spans,
                                                   ToNested(attention), weight,
                                                   bias)));
    record("coref_propagation",
           MaxAbsDiff(CorefPropagation(spans, scores.coref, gate),
                      oracle::CorefPropagation(nested_spans,
                                               ToNested(scores.coref), weight,
                                               bias)));
    record("relation_propagation",
           MaxAbsDiff(RelationPropagation(spans, scores.relation, projection, gate),
                      oracle::RelationPropagation(
                          nested_spans, ToNested(scores.relation),
                          ToNested(projection), weight, bias)));
  }

  std::vector<KernelCheck> out;
  for (auto &[name, check] : checks) out.push_back(check);
  return out;
}

}  // namespace ecie
