#include "ecie/kernel_oracle.h"

#include <cmath>

namespace ecie::oracle {

namespace {

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

std::int64_t EnumerateSpans(int num_tokens, int max_width) {
  std::int64_t count = 0;
  for (int begin = 0; begin < num_tokens; ++begin) {
    for (int end = begin + 1; end <= num_tokens; ++end) {
      if (end - begin <= max_width) ++count;
    }
  }
  return count;
}

void AugmentWithPruner(Mat &mention, Mat &coref, std::vector<Mat> &relation,
                       const Vec &pruner, const std::vector<int> &pruned) {
  for (std::size_t s = 0; s < mention.size(); ++s) {
    for (double &x : mention[s]) x += pruner[s];
  }
  for (std::size_t i = 0; i < coref.size(); ++i) {
    for (std::size_t j = 0; j < coref[i].size(); ++j) {
      coref[i][j] += pruner[pruned[i]];
      for (Mat &m : relation) m[i][j] += pruner[pruned[i]];
    }
  }
}

double BceLoss(const Mat &scores, const Mat &indicators) {
  double loss = 0;
  for (std::size_t r = 0; r < scores.size(); ++r) {
    for (std::size_t c = 0; c < scores[r].size(); ++c) {
      const double p = Sigmoid(scores[r][c]);
      const double y = indicators[r][c];
      loss -= y * std::log(p) + (1 - y) * std::log(1 - p);
    }
  }
  return loss;
}

double CorefMarginalLoss(const Mat &coref,
                         const std::vector<std::vector<int>> &gold) {
  double loss = 0;
  for (std::size_t j = 0; j < coref.size(); ++j) {
    double numerator = 0, denominator = 0;
    for (int i : gold[j]) numerator += std::exp(coref[i][j]);
    for (std::size_t i = 0; i <= j; ++i) denominator += std::exp(coref[i][j]);
    loss -= std::log(numerator / denominator);
  }
  return loss;
}

double JointLoss(double mention, double coref, double relation, double w_e,
                 double w_c, double w_r) {
  return w_e * mention + w_c * coref + w_r * relation;
}

Vec CorefConfidence(const Mat &coref, int j) {
  Vec out(coref.size(), 0.0);
  double denominator = 0;
  for (int i = 0; i <= j; ++i) denominator += std::exp(coref[i][j]);
  for (int i = 0; i <= j; ++i) out[i] = std::exp(coref[i][j]) / denominator;
  return out;
}

Vec CorefUpdateVector(const Vec &confidence, const Mat &spans, int j) {
  Vec u(spans[0].size(), 0.0);
  for (int i = 0; i <= j; ++i) {
    for (std::size_t k = 0; k < u.size(); ++k) u[k] += confidence[i] * spans[i][k];
  }
  return u;
}

Vec RelationUpdateVector(const std::vector<Mat> &relation,
                         const Mat &projection, const Mat &spans, int j) {
  const std::size_t n = spans[0].size();
  Vec u(n, 0.0);
  for (std::size_t i = 0; i < spans.size(); ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      double projected = 0;
      for (std::size_t l = 0; l < relation.size(); ++l) {
        const double score = relation[l][i][j];
        projected += projection[k][l] * (score > 0 ? score : 0.0);
      }
      u[k] += projected * spans[i][k];
    }
  }
  return u;
}

Mat RowSoftmax(const Mat &scores) {
  Mat out = scores;
  for (std::size_t r = 0; r < scores.size(); ++r) {
    double denominator = 0;
    for (double x : scores[r]) denominator += std::exp(x);
    for (std::size_t c = 0; c < scores[r].size(); ++c) {
      out[r][c] = std::exp(scores[r][c]) / denominator;
    }
  }
  return out;
}

Vec GatedSpanUpdate(const Vec &g, const Vec &u, const Mat &weight,
                    const Vec &bias) {
  const std::size_t n = g.size();
  Vec out(n);
  for (std::size_t k = 0; k < n; ++k) {
    double pre = bias[k];
    for (std::size_t m = 0; m < n; ++m) {
      pre += weight[k][m] * g[m] + weight[k][n + m] * u[m];
    }
    const double f = Sigmoid(pre);
    out[k] = f * g[k] + (1 - f) * u[k];
  }
  return out;
}

Mat AttentionPropagation(const Mat &spans, const Mat &attention,
                         const Mat &weight, const Vec &bias) {
  const Mat probs = RowSoftmax(attention);
  Mat out(spans.size());
  for (std::size_t i = 0; i < spans.size(); ++i) {
    Vec u(spans[0].size(), 0.0);
    for (std::size_t j = 0; j < spans.size(); ++j) {
      for (std::size_t k = 0; k < u.size(); ++k) u[k] += probs[i][j] * spans[j][k];
    }
    out[i] = GatedSpanUpdate(spans[i], u, weight, bias);
  }
  return out;
}

Mat CorefPropagation(const Mat &spans, const Mat &coref, const Mat &weight,
                     const Vec &bias) {
  Mat out(spans.size());
  for (std::size_t j = 0; j < spans.size(); ++j) {
    const int jj = static_cast<int>(j);
    const Vec u = CorefUpdateVector(CorefConfidence(coref, jj), spans, jj);
    out[j] = GatedSpanUpdate(spans[j], u, weight, bias);
  }
  return out;
}

Mat RelationPropagation(const Mat &spans, const std::vector<Mat> &relation,
                        const Mat &projection, const Mat &weight,
                        const Vec &bias) {
  Mat out(spans.size());
  for (std::size_t j = 0; j < spans.size(); ++j) {
    const Vec u = RelationUpdateVector(relation, projection, spans,
                                       static_cast<int>(j));
    out[j] = GatedSpanUpdate(spans[j], u, weight, bias);
  }
  return out;
}

}  // namespace ecie::oracle
