#ifndef ECIE_KERNEL_ORACLE_H_
#define ECIE_KERNEL_ORACLE_H_

// Direct loop transliterations of the kernels in kernels.h over nested
// std::vector storage. Slow and unguarded; used to cross-check the Eigen
// implementations on small inputs.

#include <cstdint>
#include <vector>

namespace ecie::oracle {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;  // row-major, Mat[r][c]

std::int64_t EnumerateSpans(int num_tokens, int max_width);

// pruned[i] = S index of pruned span i.
void AugmentWithPruner(Mat &mention, Mat &coref, std::vector<Mat> &relation,
                       const Vec &pruner, const std::vector<int> &pruned);

double BceLoss(const Mat &scores, const Mat &indicators);
double CorefMarginalLoss(const Mat &coref,
                         const std::vector<std::vector<int>> &gold);
double JointLoss(double mention, double coref, double relation, double w_e,
                 double w_c, double w_r);

Vec CorefConfidence(const Mat &coref, int j);
Vec CorefUpdateVector(const Vec &confidence, const Mat &spans, int j);
Vec RelationUpdateVector(const std::vector<Mat> &relation,
                         const Mat &projection, const Mat &spans, int j);
Mat RowSoftmax(const Mat &scores);
Vec GatedSpanUpdate(const Vec &g, const Vec &u, const Mat &weight,
                    const Vec &bias);

Mat AttentionPropagation(const Mat &spans, const Mat &attention,
                         const Mat &weight, const Vec &bias);
Mat CorefPropagation(const Mat &spans, const Mat &coref, const Mat &weight,
                     const Vec &bias);
Mat RelationPropagation(const Mat &spans, const std::vector<Mat> &relation,
                        const Mat &projection, const Mat &weight,
                        const Vec &bias);

}  // namespace ecie::oracle

#endif  // ECIE_KERNEL_ORACLE_H_
