#pragma once

#include <limits>
#include <vector>

#include <Eigen/Core>

#include "regemb/rational.hpp"

namespace regemb {

// Affine data in R^N is turned into linear data in R^{N+1}: points x become
// (x, 1) and tangent vectors u become (u, 0). A family of points and affine
// subspaces is affinely independent exactly when the lifted vectors are
// linearly independent.

inline constexpr double kDefaultRankTolerance = 1e-10;

// Margin reported by the exact path for a full-column-rank matrix.
inline constexpr double kExactNonzeroMargin = std::numeric_limits<double>::infinity();

enum class ColumnRole { through_point, tangency_point, direction };

const char* to_string(ColumnRole role);

struct LiftedMatrix {
  Eigen::MatrixXd columns;  // (N+1) x column_count
  std::vector<ColumnRole> labels;

  int rows() const { return static_cast<int>(columns.rows()); }
  int cols() const { return static_cast<int>(columns.cols()); }
};

struct RationalLiftedMatrix {
  RationalMatrix columns;
  std::vector<ColumnRole> labels;

  int rows() const { return columns.rows(); }
  int cols() const { return columns.cols(); }
};

struct RankReport {
  int rank = 0;
  int columns = 0;
  // Smallest singular value when columns <= rows, else 0. On the exact path it
  // is kExactNonzeroMargin for full column rank and 0 otherwise.
  double margin = 0.0;
  // Largest singular value (1 when all vanish); rank and margin thresholds are
  // relative to it.
  double scale = 1.0;
  double tolerance = kDefaultRankTolerance;
  bool exact = false;

  bool full_column_rank() const { return rank == columns; }
};

Eigen::VectorXd lift_point(const Eigen::VectorXd& p);
Eigen::VectorXd lift_direction(const Eigen::VectorXd& u);
RationalVector lift_point(const RationalVector& p);
RationalVector lift_direction(const RationalVector& u);

// Columns are ordered: through points, tangency points, then the direction
// vectors grouped by tangency point. `directions` holds one group per
// tangency point; a group may be empty.
LiftedMatrix assemble_lifted_matrix(const std::vector<Eigen::VectorXd>& points,
                                    const std::vector<Eigen::VectorXd>& tangency_points,
                                    const std::vector<std::vector<Eigen::VectorXd>>& directions);
RationalLiftedMatrix assemble_lifted_matrix(const std::vector<RationalVector>& points,
                                            const std::vector<RationalVector>& tangency_points,
                                            const std::vector<std::vector<RationalVector>>& directions);

RankReport rank_and_margin(const Eigen::MatrixXd& columns, double tol = kDefaultRankTolerance);
inline RankReport rank_and_margin(const LiftedMatrix& m, double tol = kDefaultRankTolerance) {
  return rank_and_margin(m.columns, tol);
}

// Fraction-free (Bareiss) elimination over the integers after clearing
// denominators column by column.
RankReport exact_rank(const RationalMatrix& m);
inline RankReport exact_rank(const RationalLiftedMatrix& m) { return exact_rank(m.columns); }
// Doubles are converted exactly; non-finite entries raise NotRational.
RankReport exact_rank(const LiftedMatrix& m);

Rational exact_determinant(const RationalMatrix& m);

struct AffinePiece {
  Eigen::VectorXd base;
  std::vector<Eigen::VectorXd> spanning;
};

// Dimension of the affine hull of the union of the pieces, computed as the
// rank of the lifted system minus one. The pieces are affinely independent
// iff the result equals sum(dim_i + 1) - 1.
int affine_span_dim(const std::vector<AffinePiece>& pieces, double tol = kDefaultRankTolerance);

}  // namespace regemb
