#ifndef ECIE_ASSIGNMENT_H_
#define ECIE_ASSIGNMENT_H_

#include <vector>

namespace ecie {

// Maximum-weight one-to-one assignment (Kuhn-Munkres, O(n^3)) on a
// rectangular rows x cols weight matrix. Returns, for each row, the matched
// column or -1. Rows may stay unmatched only when rows > cols; since weights
// are not required to be non-negative, every feasible assignment matches
// min(rows, cols) pairs.
std::vector<int> MaxWeightAssignment(
    const std::vector<std::vector<double>> &weights);

}  // namespace ecie

#endif  // ECIE_ASSIGNMENT_H_
