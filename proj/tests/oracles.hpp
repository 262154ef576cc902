#pragma once

// Independent reference implementations used only by the tests.

#include <algorithm>
#include <numeric>
#include <vector>

#include <Eigen/Core>

#include "regemb/rational.hpp"

namespace oracle {

using regemb::Rational;
using regemb::RationalMatrix;

// Sum over permutations.
inline Rational leibniz_det(const RationalMatrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  const int n = static_cast<int>(rows.size());
  std::vector<int> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Rational total = 0;
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    Rational term = (inversions % 2 == 0) ? 1 : -1;
    for (int i = 0; i < n && term != 0; ++i) term *= m(rows[i], cols[perm[i]]);
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

inline Rational leibniz_det(const RationalMatrix& m) {
  std::vector<int> idx(static_cast<size_t>(m.rows()));
  std::iota(idx.begin(), idx.end(), 0);
  return leibniz_det(m, idx, idx);
}

inline void subsets(int n, int r, std::vector<std::vector<int>>& out) {
  std::vector<bool> pick(static_cast<size_t>(n), false);
  std::fill(pick.begin(), pick.begin() + r, true);
  do {
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
      if (pick[i]) s.push_back(i);
    out.push_back(s);
  } while (std::prev_permutation(pick.begin(), pick.end()));
}

// Largest r with a nonvanishing r x r minor.
inline int minor_rank(const RationalMatrix& m) {
  for (int r = std::min(m.rows(), m.cols()); r > 0; --r) {
    std::vector<std::vector<int>> rs, cs;
    subsets(m.rows(), r, rs);
    subsets(m.cols(), r, cs);
    for (const auto& a : rs)
      for (const auto& b : cs)
        if (leibniz_det(m, a, b) != 0) return r;
  }
  return 0;
}

// Row echelon rank with plain rational pivoting.
inline int gauss_rank(std::vector<std::vector<Rational>> rows) {
  int rank = 0;
  const size_t width = rows.empty() ? 0 : rows[0].size();
  for (size_t c = 0; c < width && rank < static_cast<int>(rows.size()); ++c) {
    size_t piv = static_cast<size_t>(rank);
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[static_cast<size_t>(rank)]);
    for (size_t r = 0; r < rows.size(); ++r) {
      if (r == static_cast<size_t>(rank) || rows[r][c] == 0) continue;
      const Rational f = rows[r][c] / rows[static_cast<size_t>(rank)][c];
      for (size_t j = c; j < width; ++j) rows[r][j] -= f * rows[static_cast<size_t>(rank)][j];
    }
    ++rank;
  }
  return rank;
}

// Affine hull dimension of a finite point set: rank of differences to the
// first point.
inline int hull_dimension(const std::vector<Eigen::VectorXd>& points) {
  std::vector<std::vector<Rational>> rows;
  for (size_t i = 1; i < points.size(); ++i) {
    std::vector<Rational> r;
    for (Eigen::Index j = 0; j < points[i].size(); ++j) r.push_back(Rational(points[i][j]) - Rational(points[0][j]));
    rows.push_back(r);
  }
  return gauss_rank(rows);
}

}  // namespace oracle
