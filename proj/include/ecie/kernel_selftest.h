#ifndef ECIE_KERNEL_SELFTEST_H_
#define ECIE_KERNEL_SELFTEST_H_

// Randomized comparison of the Eigen kernels against the loop oracle on
// small shapes (|P| <= 4, n <= 3).

#include <cstdint>
#include <string>
#include <vector>

#include "ecie/kernel_oracle.h"
#include "ecie/kernels.h"

namespace ecie {

struct KernelCheck {
  std::string kernel;
  int cases = 0;
  double max_abs_deviation = 0;
};

// Fixed seed keeps the run deterministic.
std::vector<KernelCheck> RunKernelSelftest(int cases_per_kernel = 200,
                                           std::uint64_t seed = 20240601);

oracle::Mat ToNested(const Matrix &m);
oracle::Vec ToNested(const Vector &v);
std::vector<oracle::Mat> ToNested(const std::vector<Matrix> &ms);
double MaxAbsDiff(const Matrix &a, const oracle::Mat &b);
double MaxAbsDiff(const Vector &a, const oracle::Vec &b);

}  // namespace ecie

#endif  // ECIE_KERNEL_SELFTEST_H_
