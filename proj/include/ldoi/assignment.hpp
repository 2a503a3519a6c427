#pragma once

// Maximum-weight assignment via the O(n^3) Hungarian method.

#include "ldoi/core.hpp"

#include <limits>
#include <numeric>

namespace ldoi {

struct AssignmentResult {
  /// permutation[i] = column assigned to row i (0-based).
  std::vector<int> permutation;
  double value = 0.0;
};

namespace detail {

/// Minimum-cost perfect matching on a square cost matrix; returns row -> column.
inline std::vector<int> hungarianMinCost(const RealMatrix& cost) {
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int row = 1; row <= n; ++row) {
    match[0] = row;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double reduced = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (reduced < minv[j]) {
          minv[j] = reduced;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
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
  std::vector<int> rowToCol(n, -1);
  for (int j = 1; j <= n; ++j) rowToCol[match[j] - 1] = j - 1;
  return rowToCol;
}

inline double optimalAssignmentValue(const RealMatrix& weights) {
  if (weights.rows() == 0) return 0.0;
  const RealMatrix cost = weights.maxCoeff() - weights.array();
  const std::vector<int> perm = hungarianMinCost(cost);
  double value = 0.0;
  for (int i = 0; i < weights.rows(); ++i) value += weights(i, perm[i]);
  return value;
}

inline RealMatrix removeRowCol(const RealMatrix& m, int row, int col) {
  const int n = static_cast<int>(m.rows());
  RealMatrix out(n - 1, n - 1);
  for (int i = 0, oi = 0; i < n; ++i) {
    if (i == row) continue;
    for (int j = 0, oj = 0; j < n; ++j) {
      if (j == col) continue;
      out(oi, oj++) = m(i, j);
    }
    ++oi;
  }
  return out;
}

}  // namespace detail

/// Permutation maximizing sum_i w(i, sigma(i)). Among optimal permutations (within a relative
/// 1e-12) the lexicographically smallest one is returned.
inline AssignmentResult maxAssignment(const RealMatrix& weights) {
  const int n = static_cast<int>(weights.rows());
  if (weights.cols() != n) throw DimensionMismatch("assignment weights must be square");
  if (!weights.allFinite()) throw DomainError("assignment weights must be finite");
  AssignmentResult result;
  if (n == 0) return result;

  const double best = detail::optimalAssignmentValue(weights);
  const double slack = 1e-12 * (1.0 + std::abs(best));

  std::vector<int> rows(n), cols(n);
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  result.permutation.assign(n, -1);
  RealMatrix remaining = weights;
  double fixedValue = 0.0;
  for (int step = 0; step < n; ++step) {
    // first column (in original order) that still admits an optimal completion
    int chosen = -1;
    for (int c = 0; c < static_cast<int>(cols.size()); ++c) {
      const double rest =
          remaining.rows() == 1 ? 0.0
                                : detail::optimalAssignmentValue(detail::removeRowCol(remaining, 0, c));
      if (fixedValue + remaining(0, c) + rest >= best - slack) {
        chosen = c;
        break;
      }
    }
    if (chosen < 0) chosen = 0;  // unreachable unless weights are wildly scaled
    result.permutation[rows[0]] = cols[chosen];
    fixedValue += remaining(0, chosen);
    remaining = remaining.rows() == 1 ? RealMatrix() : detail::removeRowCol(remaining, 0, chosen);
    rows.erase(rows.begin());
    cols.erase(cols.begin() + chosen);
  }
  result.value = 0.0;
  for (int i = 0; i < n; ++i) result.value += weights(i, result.permutation[i]);
  return result;
}

}  // namespace ldoi
