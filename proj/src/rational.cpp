#include "regemb/rational.hpp"

#include <cctype>
#include <cmath>

#include "regemb/error.hpp"

namespace regemb {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

mpz_class parse_integer(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw Error(ErrorKind::InvalidInput, "not a rational number: '" + std::string(whole) + "'");
  mpz_class z(std::string(s), 10);
  return negative ? mpz_class(-z) : z;
}

Rational parse_decimal(std::string_view s, std::string_view whole) {
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    exponent = static_cast<long>(parse_integer(s.substr(e + 1), whole).get_si());
    s = s.substr(0, e);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part)) ||
        (int_part.empty() && frac_part.empty())) {
      throw Error(ErrorKind::InvalidInput, "not a rational number: '" + std::string(whole) + "'");
    }
    digits = std::string(int_part) + std::string(frac_part);
    exponent -= static_cast<long>(frac_part.size());
  } else {
    if (!all_digits(s)) throw Error(ErrorKind::InvalidInput, "not a rational number: '" + std::string(whole) + "'");
    digits = std::string(s);
  }
  if (exponent > 4096 || exponent < -4096) throw Error(ErrorKind::InvalidInput, "exponent out of range in '" + std::string(whole) + "'");
  Rational q(mpz_class(digits, 10));
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  if (exponent >= 0) {
    q *= ten_pow;
  } else {
    q /= ten_pow;
  }
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) throw Error(ErrorKind::InvalidInput, "empty rational literal");
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(trim(s.substr(0, slash)), text);
    mpz_class den = parse_integer(trim(s.substr(slash + 1)), text);
    if (den == 0) throw Error(ErrorKind::InvalidInput, "zero denominator in '" + std::string(text) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  return parse_decimal(s, text);
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw Error(ErrorKind::NotRational, "non-finite value has no rational representation");
  return Rational(value);  // mpq_set_d is exact
}

RationalVector rational_from_vector(const Eigen::VectorXd& v) {
  RationalVector out;
  out.reserve(static_cast<size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(rational_from_double(v[i]));
  return out;
}

Eigen::VectorXd to_double(const RationalVector& v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i].get_d();
  return out;
}

std::string to_string(const Rational& q) { return q.get_str(); }

RationalMatrix RationalMatrix::from_columns(const std::vector<RationalVector>& columns, int rows) {
  RationalMatrix m(rows, static_cast<int>(columns.size()));
  for (int c = 0; c < m.cols(); ++c) {
    const auto& col = columns[static_cast<size_t>(c)];
    for (int r = 0; r < rows; ++r) m(r, c) = col[static_cast<size_t>(r)];
  }
  return m;
}

RationalMatrix RationalMatrix::from_double(const Eigen::MatrixXd& m) {
  RationalMatrix out(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  for (int c = 0; c < out.cols(); ++c) {
    for (int r = 0; r < out.rows(); ++r) out(r, c) = rational_from_double(m(r, c));
  }
  return out;
}

Eigen::MatrixXd RationalMatrix::to_double() const {
  Eigen::MatrixXd out(rows_, cols_);
  for (int c = 0; c < cols_; ++c) {
    for (int r = 0; r < rows_; ++r) out(r, c) = (*this)(r, c).get_d();
  }
  return out;
}

}  // namespace regemb
