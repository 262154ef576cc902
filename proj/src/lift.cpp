#include "regemb/lift.hpp"

#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "regemb/error.hpp"

namespace regemb {

const char* to_string(ColumnRole role) {
  switch (role) {
    case ColumnRole::through_point: return "through-point";
    case ColumnRole::tangency_point: return "tangency-point";
    case ColumnRole::direction: return "direction";
  }
  return "unknown";
}

Eigen::VectorXd lift_point(const Eigen::VectorXd& p) {
  if (!p.allFinite()) throw Error(ErrorKind::InvalidInput, "point has a non-finite entry");
  Eigen::VectorXd out(p.size() + 1);
  out.head(p.size()) = p;
  out[p.size()] = 1.0;
  return out;
}

Eigen::VectorXd lift_direction(const Eigen::VectorXd& u) {
  if (!u.allFinite()) throw Error(ErrorKind::InvalidInput, "direction has a non-finite entry");
  if (u.size() == 0 || u.isZero(0.0)) throw Error(ErrorKind::DegenerateDirection, "zero direction vector");
  Eigen::VectorXd out(u.size() + 1);
  out.head(u.size()) = u;
  out[u.size()] = 0.0;
  return out;
}

RationalVector lift_point(const RationalVector& p) {
  RationalVector out(p);
  out.emplace_back(1);
  return out;
}

RationalVector lift_direction(const RationalVector& u) {
  bool zero = true;
  for (const auto& x : u) zero = zero && (x == 0);
  if (zero) throw Error(ErrorKind::DegenerateDirection, "zero direction vector");
  RationalVector out(u);
  out.emplace_back(0);
  return out;
}

namespace {

template <typename Vec>
size_t dim_of(const Vec& v) {
  return static_cast<size_t>(v.size());
}

template <typename Vec, typename Lifted>
void check_and_collect(const std::vector<Vec>& points, const std::vector<Vec>& tangency_points,
                       const std::vector<std::vector<Vec>>& directions, std::vector<Lifted>& columns,
                       std::vector<ColumnRole>& labels) {
  if (points.empty() && tangency_points.empty()) {
    throw Error(ErrorKind::EmptyConfiguration, "no through points and no tangency points");
  }
  if (directions.size() != tangency_points.size()) {
    throw Error(ErrorKind::DimensionMismatch, "expected one direction group per tangency point, got " +
                                                  std::to_string(directions.size()) + " groups for " +
                                                  std::to_string(tangency_points.size()) + " points");
  }
  const size_t ambient = points.empty() ? dim_of(tangency_points.front()) : dim_of(points.front());
  auto check = [&](const Vec& v) {
    if (dim_of(v) != ambient) {
      throw Error(ErrorKind::DimensionMismatch,
                  "vector of dimension " + std::to_string(dim_of(v)) + " in ambient dimension " + std::to_string(ambient));
    }
  };
  for (const auto& p : points) {
    check(p);
    columns.push_back(lift_point(p));
    labels.push_back(ColumnRole::through_point);
  }
  for (const auto& p : tangency_points) {
    check(p);
    columns.push_back(lift_point(p));
    labels.push_back(ColumnRole::tangency_point);
  }
  for (const auto& group : directions) {
    for (const auto& u : group) {
      check(u);
      columns.push_back(lift_direction(u));
      labels.push_back(ColumnRole::direction);
    }
  }
}

}  // namespace

LiftedMatrix assemble_lifted_matrix(const std::vector<Eigen::VectorXd>& points,
                                    const std::vector<Eigen::VectorXd>& tangency_points,
                                    const std::vector<std::vector<Eigen::VectorXd>>& directions) {
  std::vector<Eigen::VectorXd> columns;
  LiftedMatrix m;
  check_and_collect(points, tangency_points, directions, columns, m.labels);
  const auto rows = columns.front().size();
  m.columns.resize(rows, static_cast<Eigen::Index>(columns.size()));
  for (size_t c = 0; c < columns.size(); ++c) m.columns.col(static_cast<Eigen::Index>(c)) = columns[c];
  return m;
}

RationalLiftedMatrix assemble_lifted_matrix(const std::vector<RationalVector>& points,
                                            const std::vector<RationalVector>& tangency_points,
                                            const std::vector<std::vector<RationalVector>>& directions) {
  std::vector<RationalVector> columns;
  RationalLiftedMatrix m;
  check_and_collect(points, tangency_points, directions, columns, m.labels);
  m.columns = RationalMatrix::from_columns(columns, static_cast<int>(columns.front().size()));
  return m;
}

RankReport rank_and_margin(const Eigen::MatrixXd& columns, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidParameter, "tolerance must be positive");
  RankReport report;
  report.tolerance = tol;
  report.columns = static_cast<int>(columns.cols());
  if (columns.size() == 0) return report;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(columns);
  const Eigen::VectorXd& sv = svd.singularValues();  // descending
  const double largest = sv.size() > 0 ? sv[0] : 0.0;
  report.scale = largest > 0.0 ? largest : 1.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > tol * report.scale) ++report.rank;
  }
  if (columns.cols() <= columns.rows()) report.margin = sv[sv.size() - 1];
  return report;
}

namespace {

// Integer matrix with each column scaled by the lcm of its denominators.
std::vector<std::vector<mpz_class>> clear_denominators(const RationalMatrix& m) {
  std::vector<std::vector<mpz_class>> rows(static_cast<size_t>(m.rows()), std::vector<mpz_class>(static_cast<size_t>(m.cols())));
  for (int c = 0; c < m.cols(); ++c) {
    mpz_class lcm = 1;
    for (int r = 0; r < m.rows(); ++r) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), m(r, c).get_den_mpz_t());
    for (int r = 0; r < m.rows(); ++r) {
      rows[static_cast<size_t>(r)][static_cast<size_t>(c)] = m(r, c).get_num() * (lcm / m(r, c).get_den());
    }
  }
  return rows;
}

}  // namespace

RankReport exact_rank(const RationalMatrix& m) {
  RankReport report;
  report.exact = true;
  report.columns = m.cols();
  report.tolerance = 0.0;
  auto a = clear_denominators(m);
  const int rows = m.rows();
  const int cols = m.cols();

  mpz_class prev = 1;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int pivot = -1;
    for (int i = r; i < rows; ++i) {
      if (a[i][c] != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(a[r], a[pivot]);
    for (int i = r + 1; i < rows; ++i) {
      for (int j = c + 1; j < cols; ++j) {
        mpz_class t = a[r][c] * a[i][j] - a[i][c] * a[r][j];
        mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  report.rank = r;
  report.margin = report.full_column_rank() ? kExactNonzeroMargin : 0.0;
  return report;
}

RankReport exact_rank(const LiftedMatrix& m) { return exact_rank(RationalMatrix::from_double(m.columns)); }

Rational exact_determinant(const RationalMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::DimensionMismatch, "determinant of a non-square matrix");
  const int n = m.rows();
  if (n == 0) return Rational(1);

  // det(M) = det(integer matrix) / prod(column scales)
  mpz_class scale = 1;
  std::vector<std::vector<mpz_class>> a(static_cast<size_t>(n), std::vector<mpz_class>(static_cast<size_t>(n)));
  for (int c = 0; c < n; ++c) {
    mpz_class lcm = 1;
    for (int r = 0; r < n; ++r) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), m(r, c).get_den_mpz_t());
    scale *= lcm;
    for (int r = 0; r < n; ++r) a[r][c] = m(r, c).get_num() * (lcm / m(r, c).get_den());
  }

  int sign = 1;
  mpz_class prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a[k][k] == 0) {
      int pivot = -1;
      for (int i = k + 1; i < n; ++i) {
        if (a[i][k] != 0) {
          pivot = i;
          break;
        }
      }
      if (pivot < 0) return Rational(0);
      std::swap(a[k], a[pivot]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        mpz_class t = a[k][k] * a[i][j] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  Rational det(a[n - 1][n - 1] * sign, scale);
  det.canonicalize();
  return det;
}

int affine_span_dim(const std::vector<AffinePiece>& pieces, double tol) {
  if (pieces.empty()) throw Error(ErrorKind::EmptyConfiguration, "no affine pieces");
  const auto ambient = pieces.front().base.size();
  Eigen::Index count = 0;
  for (const auto& piece : pieces) {
    if (piece.base.size() != ambient) throw Error(ErrorKind::DimensionMismatch, "affine pieces in different ambient spaces");
    for (const auto& v : piece.spanning) {
      if (v.size() != ambient) throw Error(ErrorKind::DimensionMismatch, "spanning vector of wrong dimension");
    }
    count += 1 + static_cast<Eigen::Index>(piece.spanning.size());
  }
  Eigen::MatrixXd lifted = Eigen::MatrixXd::Zero(ambient + 1, count);
  Eigen::Index c = 0;
  for (const auto& piece : pieces) {
    lifted.col(c).head(ambient) = piece.base;
    lifted(ambient, c++) = 1.0;
    for (const auto& v : piece.spanning) lifted.col(c++).head(ambient) = v;
  }
  return rank_and_margin(lifted, tol).rank - 1;
}

}  // namespace regemb
