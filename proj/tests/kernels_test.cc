#include "ecie/kernels.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include <gtest/gtest.h>
#include "json.hpp"

#include "ecie/error.h"
#include "ecie/kernel_oracle.h"
#include "ecie/kernel_selftest.h"

namespace ecie {
namespace {

constexpr double kTol = 1e-9;
using nlohmann::json;

Matrix MatrixOf(const json &rows) {
  Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j].get<double>();
  }
  return m;
}

Vector VectorOf(const json &values) {
  Vector v(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) v(i) = values[i].get<double>();
  return v;
}

const json &Fixtures() {
  static const json fixtures = [] {
    std::ifstream in(std::string(ECIE_FIXTURE_DIR) + "/kernels.json");
    return json::parse(in);
  }();
  return fixtures;
}

void ExpectClose(const Vector &got, const Vector &want) {
  ASSERT_EQ(got.size(), want.size());
  EXPECT_LE((got - want).cwiseAbs().maxCoeff(), kTol) << got.transpose();
}

TEST(Fixtures, SpanCount) {
  for (const json &c : Fixtures()["span_count"]) {
    EXPECT_EQ(SpanCount(c["num_tokens"], c["max_width"]), c["expected"].get<std::int64_t>());
  }
  EXPECT_THROW(SpanCount(3, 4), Error);
  EXPECT_THROW(SpanCount(3, 0), Error);
}

TEST(Fixtures, Losses) {
  for (const json &c : Fixtures()["bce_loss"]) {
    EXPECT_NEAR(MultilabelBceLoss(MatrixOf(c["scores"]), MatrixOf(c["indicators"])),
                c["expected"].get<double>(), kTol);
  }
  for (const json &c : Fixtures()["coref_marginal_loss"]) {
    const auto gold = c["gold"].get<std::vector<std::vector<int>>>();
    EXPECT_NEAR(CorefMarginalLoss(MatrixOf(c["coref"]), gold),
                c["expected"].get<double>(), kTol);
  }
  for (const json &c : Fixtures()["joint_loss"]) {
    const auto l = c["losses"].get<std::vector<double>>();
    const auto w = c["weights"].get<std::vector<double>>();
    EXPECT_NEAR(JointLoss(l[0], l[1], l[2], {w[0], w[1], w[2]}),
                c["expected"].get<double>(), kTol);
  }
}

TEST(Fixtures, Propagation) {
  for (const json &c : Fixtures()["coref_confidence"]) {
    ExpectClose(CorefConfidence(MatrixOf(c["coref"]), c["j"]), VectorOf(c["expected"]));
  }
  for (const json &c : Fixtures()["coref_update"]) {
    ExpectClose(CorefUpdateVector(VectorOf(c["confidence"]), MatrixOf(c["spans"]), c["j"]),
                VectorOf(c["expected"]));
  }
  for (const json &c : Fixtures()["relation_update"]) {
    std::vector<Matrix> relation;
    for (const json &m : c["relation"]) relation.push_back(MatrixOf(m));
    ExpectClose(RelationUpdateVector(relation, MatrixOf(c["projection"]),
                                     MatrixOf(c["spans"]), c["j"]),
                VectorOf(c["expected"]));
  }
  for (const json &c : Fixtures()["attention_propagation"]) {
    const Matrix spans = MatrixOf(c["spans"]);
    const Matrix got = AttentionPropagation(spans, MatrixOf(c["attention"]),
                                            GateTransform::Zero(spans.cols()));
    EXPECT_LE((got - MatrixOf(c["expected"])).cwiseAbs().maxCoeff(), kTol);
  }
  for (const json &c : Fixtures()["gated_update"]) {
    const Vector g = VectorOf(c["g"]);
    ExpectClose(GatedSpanUpdate(g, VectorOf(c["u"]), GateTransform::Zero(g.size())),
                VectorOf(c["expected"]));
  }
}

TEST(SpanCount, MatchesEnumeration) {
  for (int t = 1; t <= 50; ++t) {
    for (int w = 1; w <= std::min(t, 5); ++w) {
      EXPECT_EQ(SpanCount(t, w), oracle::EnumerateSpans(t, w)) << t << "," << w;
    }
  }
  EXPECT_EQ(oracle::EnumerateSpans(100, 5), 490);
}

TEST(AugmentWithPruner, Examples) {
  ScoreSet s;
  s.mention = Matrix::Constant(1, 1, -1.0);
  s.coref = Matrix::Zero(1, 1);
  s.relation = {Matrix::Zero(1, 1)};
  s.attention = Matrix::Zero(1, 1);
  s.pruner = Vector::Constant(1, 2.0);
  EXPECT_DOUBLE_EQ(AugmentWithPruner(s).mention(0, 0), 1.0);

  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  ScoreSet r;
  r.mention = Matrix::NullaryExpr(5, 3, [&] { return normal(rng); });
  r.coref = Matrix::NullaryExpr(3, 3, [&] { return normal(rng); });
  r.relation = {Matrix::NullaryExpr(3, 3, [&] { return normal(rng); })};
  r.attention = Matrix::Zero(3, 3);
  r.pruned = {4, 0, 2};
  r.pruner = Vector::Zero(5);
  const ScoreSet same = AugmentWithPruner(r);
  EXPECT_EQ(same.mention, r.mention);
  EXPECT_EQ(same.coref, r.coref);

  r.pruner = Vector::NullaryExpr(5, [&] { return normal(rng); });
  const ScoreSet a = AugmentWithPruner(r);
  for (int i = 0; i < 5; ++i) {
    for (int l = 0; l < 3; ++l) {
      EXPECT_EQ(a.mention(i, l), r.mention(i, l) + r.pruner(i));
    }
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      EXPECT_EQ(a.coref(i, j), r.coref(i, j) + r.pruner(r.pruned[i]));
      EXPECT_EQ(a.relation[0](i, j), r.relation[0](i, j) + r.pruner(r.pruned[i]));
    }
  }

  ScoreSet bad = r;
  bad.pruner = Vector::Zero(4);
  EXPECT_THROW(AugmentWithPruner(bad), Error);
}

TEST(AugmentWithPruner, ConstantShiftKeepsAntecedentArgmax) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  ScoreSet s;
  s.mention = Matrix::Zero(4, 1);
  s.coref = Matrix::NullaryExpr(4, 4, [&] { return normal(rng); });
  s.attention = Matrix::Zero(4, 4);
  s.pruner = Vector::Constant(4, 3.5);
  const ScoreSet a = AugmentWithPruner(s);
  for (int j = 0; j < 4; ++j) {
    Eigen::Index before, after;
    s.coref.col(j).head(j + 1).maxCoeff(&before);
    a.coref.col(j).head(j + 1).maxCoeff(&after);
    EXPECT_EQ(before, after);
  }
}

TEST(Losses, Errors) {
  EXPECT_THROW(MultilabelBceLoss(Matrix::Zero(2, 2), Matrix::Zero(2, 3)), Error);
  Matrix inf = Matrix::Zero(1, 1);
  inf(0, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(MultilabelBceLoss(inf, Matrix::Ones(1, 1)), Error);
  EXPECT_THROW(MultilabelBceLoss(Matrix::Zero(1, 1), Matrix::Constant(1, 1, 0.5)), Error);
  EXPECT_THROW(CorefMarginalLoss(Matrix::Zero(2, 2), {{0}, {}}), Error);
  EXPECT_THROW(CorefMarginalLoss(Matrix::Zero(2, 2), {{1}, {0}}), Error);
}

TEST(Losses, SaturationAndSign) {
  EXPECT_LT(MultilabelBceLoss(Matrix::Constant(1, 1, 50.0), Matrix::Ones(1, 1)), 1e-20);
  EXPECT_GT(MultilabelBceLoss(Matrix::Constant(1, 1, -800.0), Matrix::Ones(1, 1)), 799.0);
  std::mt19937_64 rng(6);
  std::normal_distribution<double> normal(0, 3);
  for (int i = 0; i < 200; ++i) {
    const Matrix s = Matrix::NullaryExpr(3, 3, [&] { return normal(rng); });
    const Matrix ind = Matrix::NullaryExpr(3, 3, [&] { return double(normal(rng) > 0); });
    EXPECT_GE(MultilabelBceLoss(s, ind), 0.0);
    EXPECT_GE(CorefMarginalLoss(s, {{0}, {0, 1}, {2}}), 0.0);
  }
}

TEST(Softmax, RowsSumToOne) {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> normal(0, 10);
  for (int i = 0; i < 1000; ++i) {
    const int p = std::uniform_int_distribution<int>(1, 6)(rng);
    const Matrix scores = Matrix::NullaryExpr(p, p, [&] { return normal(rng); });
    const Matrix soft = RowSoftmax(scores);
    for (int r = 0; r < p; ++r) {
      EXPECT_NEAR(soft.row(r).sum(), 1.0, kTol);
      EXPECT_GT(soft.row(r).minCoeff(), 0.0);
    }
    for (int j = 0; j < p; ++j) {
      const Vector c = CorefConfidence(scores, j);
      EXPECT_NEAR(c.sum(), 1.0, kTol);
      for (int k = 0; k < p; ++k) {
        if (k <= j) {
          EXPECT_GT(c(k), 0.0);
        } else {
          EXPECT_EQ(c(k), 0.0);
        }
      }
    }
  }
  const Matrix uniform = CorefConfidence(Matrix::Zero(4, 4), 3);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(uniform(k), 0.25, kTol);
  EXPECT_EQ(RowSoftmax(Matrix::Constant(1, 2, 1000.0)), Matrix::Constant(1, 2, 0.5));
}

TEST(Property, ConvexHull) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> normal(0, 2);
  for (int i = 0; i < 1000; ++i) {
    const int n = std::uniform_int_distribution<int>(1, 4)(rng);
    GateTransform gate;
    gate.weight = Matrix::NullaryExpr(n, 2 * n, [&] { return normal(rng); });
    gate.bias = Vector::NullaryExpr(n, [&] { return normal(rng); });
    const Vector g = Vector::NullaryExpr(n, [&] { return normal(rng); });
    const Vector u = Vector::NullaryExpr(n, [&] { return normal(rng); });
    const Vector out = GatedSpanUpdate(g, u, gate);
    for (int k = 0; k < n; ++k) {
      EXPECT_GE(out(k), std::min(g(k), u(k)));
      EXPECT_LE(out(k), std::max(g(k), u(k)));
    }
    ExpectClose(GatedSpanUpdate(g, g, gate), g);

    const int p = std::uniform_int_distribution<int>(1, 5)(rng);
    const Matrix spans = Matrix::NullaryExpr(p, n, [&] { return normal(rng); });
    const Matrix coref = Matrix::NullaryExpr(p, p, [&] { return normal(rng); });
    const int j = std::uniform_int_distribution<int>(0, p - 1)(rng);
    const Vector uc = CorefUpdateVector(CorefConfidence(coref, j), spans, j);
    for (int k = 0; k < n; ++k) {
      const auto column = spans.col(k).head(j + 1);
      EXPECT_GE(uc(k), column.minCoeff() - kTol);
      EXPECT_LE(uc(k), column.maxCoeff() + kTol);
    }
  }
}

TEST(Propagation, GateSaturationAndIdentitySpans) {
  const Matrix spans = (Matrix(3, 2) << 1, 0, 0, 1, 2, 2).finished();
  GateTransform keep = GateTransform::Zero(2);
  keep.bias.setConstant(50.0);
  const Matrix att = Matrix::Zero(3, 3);
  EXPECT_LE((AttentionPropagation(spans, att, keep) - spans).cwiseAbs().maxCoeff(), 1e-12);

  const Matrix mean = spans.colwise().mean();
  GateTransform take = GateTransform::Zero(2);
  take.bias.setConstant(-50.0);
  const Matrix out = AttentionPropagation(spans, att, take);
  for (int i = 0; i < 3; ++i) {
    EXPECT_LE((out.row(i) - mean).cwiseAbs().maxCoeff(), 1e-12);
  }

  const Matrix same = Matrix::Constant(3, 2, 1.5);
  const Vector conf = (Vector(3) << 0.2, 0.3, 0.5).finished();
  ExpectClose(CorefUpdateVector(conf, same, 2), Vector::Constant(2, 1.5));
}

TEST(Propagation, Drivers) {
  const Matrix spans = (Matrix(2, 2) << 1, 0, 0, 1).finished();
  const GateTransform gate = GateTransform::Zero(2);
  int calls = 0;
  const PairScorer scorer = [&](const Matrix &s) {
    ++calls;
    return Matrix(s * s.transpose());
  };
  const Matrix once = AttentionPropagation(spans, spans * spans.transpose(), gate);
  EXPECT_EQ(RunAttentionPropagation(spans, 1, scorer, gate), once);
  EXPECT_EQ(RunAttentionPropagation(spans, 0, scorer, gate), spans);
  calls = 0;
  RunCorefPropagation(spans, 3, scorer, gate);
  EXPECT_EQ(calls, 3);
  const RelationScorer rel = [](const Matrix &s) {
    return std::vector<Matrix>{s * s.transpose()};
  };
  const Matrix projection = Matrix::Ones(2, 1);
  EXPECT_EQ(RunRelationPropagation(spans, 1, rel, projection, gate),
            RelationPropagation(spans, {spans * spans.transpose()}, projection, gate));
}

TEST(PruneTopK, TiesAndOrder) {
  const Vector s = (Vector(5) << 0.5, 2.0, 0.5, 3.0, -1.0).finished();
  EXPECT_EQ(PruneTopK(s, 2), (std::vector<int>{1, 3}));
  EXPECT_EQ(PruneTopK(s, 3), (std::vector<int>{0, 1, 3}));
  EXPECT_EQ(PruneTopK(s, 10).size(), 5u);
  EXPECT_TRUE(PruneTopK(s, 0).empty());
}

TEST(Oracle, AllKernelsAgree) {
  for (const KernelCheck &check : RunKernelSelftest(300, 777)) {
    EXPECT_GT(check.cases, 0) << check.kernel;
    EXPECT_LE(check.max_abs_deviation, kTol) << check.kernel;
  }
}

}  // namespace
}  // namespace ecie
