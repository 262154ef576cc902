#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace regemb {

using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

// Accepts "p/q", plain integers and finite decimals ("-0.125", "3e-2").
// Decimals are converted exactly, never through a double.
Rational parse_rational(std::string_view text);

// Exact conversion of a finite double; throws NotRational otherwise.
Rational rational_from_double(double value);

RationalVector rational_from_vector(const Eigen::VectorXd& v);
Eigen::VectorXd to_double(const RationalVector& v);

std::string to_string(const Rational& q);

// Dense column-major matrix over Q.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Rational& operator()(int r, int c) { return data_[static_cast<size_t>(c) * rows_ + r]; }
  const Rational& operator()(int r, int c) const { return data_[static_cast<size_t>(c) * rows_ + r]; }

  static RationalMatrix from_columns(const std::vector<RationalVector>& columns, int rows);
  static RationalMatrix from_double(const Eigen::MatrixXd& m);
  Eigen::MatrixXd to_double() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Rational> data_;
};

}  // namespace regemb
