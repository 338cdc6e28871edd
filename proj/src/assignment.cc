#include "ecie/assignment.h"

#include <algorithm>
#include <limits>

#include "ecie/error.h"

namespace ecie {

std::vector<int> MaxWeightAssignment(
    const std::vector<std::vector<double>> &weights) {
  const int rows = static_cast<int>(weights.size());
  if (rows == 0) return {};
  const int cols = static_cast<int>(weights[0].size());
  for (const auto &row : weights) {
    if (static_cast<int>(row.size()) != cols) {
      throw Error("SHAPE", "assignment weight matrix is ragged");
    }
  }
  if (cols == 0) return std::vector<int>(rows, -1);

  // Potential-based Hungarian algorithm minimizing cost = -weight, with the
  // smaller dimension as the row side.
  const bool transpose = rows > cols;
  const int n = transpose ? cols : rows;
  const int m = transpose ? rows : cols;
  auto cost = [&](int i, int j) {
    return transpose ? -weights[j][i] : -weights[i][j];
  };

  const double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> match(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<bool> used(m + 1, false);
    do {
      used[j0] = true;
      const int i0 = match[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> result(rows, -1);
  for (int j = 1; j <= m; ++j) {
    if (match[j] == 0) continue;
    if (transpose) {
      result[j - 1] = match[j] - 1;
    } else {
      result[match[j] - 1] = j - 1;
    }
  }
  return result;
}

}  // namespace ecie
