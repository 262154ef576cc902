#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "regemb/embeddings.hpp"
#include "regemb/rational.hpp"
#include "regemb/verifier.hpp"

namespace regemb {

// Univariate polynomial over Q, coefficients from the constant term up.
class RationalPolynomial {
 public:
  RationalPolynomial() = default;
  explicit RationalPolynomial(std::vector<Rational> coefficients);

  // -1 for the zero polynomial
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Rational>& coefficients() const { return coeffs_; }
  const Rational& leading() const { return coeffs_.back(); }

  Rational operator()(const Rational& x) const;
  RationalPolynomial derivative() const;
  RationalPolynomial monic() const;

  friend RationalPolynomial operator+(const RationalPolynomial& a, const RationalPolynomial& b);
  friend RationalPolynomial operator-(const RationalPolynomial& a, const RationalPolynomial& b);
  friend RationalPolynomial operator*(const RationalPolynomial& a, const RationalPolynomial& b);
  friend bool operator==(const RationalPolynomial& a, const RationalPolynomial& b) { return a.coeffs_ == b.coeffs_; }

  // (quotient, remainder)
  static std::pair<RationalPolynomial, RationalPolynomial> divide(const RationalPolynomial& a, const RationalPolynomial& b);
  static RationalPolynomial gcd(RationalPolynomial a, RationalPolynomial b);

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

// Yun's algorithm: p = c * prod_i factors[i-1]^i with square-free, pairwise
// coprime monic factors (some may be constant 1).
std::vector<RationalPolynomial> square_free_decomposition(const RationalPolynomial& p);

// Distinct real roots of a square-free polynomial in the closed interval
// [lower, upper] via a Sturm sequence; infinite bounds are allowed.
int sturm_count(const RationalPolynomial& p, double lower, double upper);

// Real roots counted with multiplicity in [lower, upper].
int count_real_roots(const RationalPolynomial& p, double lower = -std::numeric_limits<double>::infinity(),
                     double upper = std::numeric_limits<double>::infinity());

struct IncidencePolynomial {
  enum class Basis { monomial, trigonometric };
  Basis basis = Basis::monomial;
  // monomial: c_0..c_d; trigonometric: a_0, a_1, b_1, ..., a_h, b_h for
  // a_0 + sum a_j cos(j t) + b_j sin(j t).
  std::vector<double> coefficients;
  int degree = 0;  // d, or h
};

// alpha -> <normal, gamma(alpha)> + offset for moment and trigonometric curves
// (affine images of them are pulled back first).
IncidencePolynomial incidence_polynomial(const EmbeddingSpec& spec, const Hyperplane& h);

struct RootDomain {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
};

// Monomial basis: roots in [lower, upper] with multiplicity. Trigonometric
// basis: roots on [0, 2pi) with multiplicity (the domain is ignored), via the
// half-angle substitution s = tan(t/2), the root at t = pi being read off the
// degree drop. Coefficients are converted to rationals exactly. Throws
// ZeroFunction for the zero function.
int count_roots_with_multiplicity(const IncidencePolynomial& p, const RootDomain& domain = {});

// Numerator of the half-angle substitution, of degree <= 2h.
RationalPolynomial half_angle_numerator(const IncidencePolynomial& p);
RationalPolynomial half_angle_numerator(const std::vector<Rational>& trig_coefficients);

// Exact-coefficient versions of count_roots_with_multiplicity: c_0..c_d, and
// a_0, a_1, b_1, ..., a_h, b_h.
int count_monomial_roots(const std::vector<Rational>& coefficients, const RootDomain& domain = {});
int count_trig_roots(const std::vector<Rational>& coefficients);

}  // namespace regemb
