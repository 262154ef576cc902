#include "regemb/polynomial.hpp"

#include <cmath>

#include "regemb/error.hpp"

namespace regemb {

RationalPolynomial::RationalPolynomial(std::vector<Rational> coefficients) : coeffs_(std::move(coefficients)) { trim(); }

void RationalPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational RationalPolynomial::operator()(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

RationalPolynomial RationalPolynomial::derivative() const {
  std::vector<Rational> d;
  for (size_t i = 1; i < coeffs_.size(); ++i) d.push_back(coeffs_[i] * static_cast<long>(i));
  return RationalPolynomial(std::move(d));
}

RationalPolynomial RationalPolynomial::monic() const {
  if (is_zero()) return *this;
  std::vector<Rational> c = coeffs_;
  const Rational lead = leading();
  for (auto& x : c) x /= lead;
  return RationalPolynomial(std::move(c));
}

RationalPolynomial operator+(const RationalPolynomial& a, const RationalPolynomial& b) {
  std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()), Rational(0));
  for (size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
  return RationalPolynomial(std::move(c));
}

RationalPolynomial operator-(const RationalPolynomial& a, const RationalPolynomial& b) {
  std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()), Rational(0));
  for (size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (size_t i = 0; i < b.coeffs_.size(); ++i) c[i] -= b.coeffs_[i];
  return RationalPolynomial(std::move(c));
}

RationalPolynomial operator*(const RationalPolynomial& a, const RationalPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return RationalPolynomial();
  std::vector<Rational> c(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
  for (size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return RationalPolynomial(std::move(c));
}

std::pair<RationalPolynomial, RationalPolynomial> RationalPolynomial::divide(const RationalPolynomial& a, const RationalPolynomial& b) {
  if (b.is_zero()) throw Error(ErrorKind::InvalidParameter, "polynomial division by zero");
  std::vector<Rational> rem = a.coeffs_;
  const int db = b.degree();
  if (a.degree() < db) return {RationalPolynomial(), a};
  std::vector<Rational> quot(static_cast<size_t>(a.degree() - db + 1), Rational(0));
  for (int i = a.degree(); i >= db; --i) {
    const Rational q = rem[static_cast<size_t>(i)] / b.leading();
    quot[static_cast<size_t>(i - db)] = q;
    if (q == 0) continue;
    for (int j = 0; j <= db; ++j) rem[static_cast<size_t>(i - db + j)] -= q * b.coeffs_[static_cast<size_t>(j)];
  }
  rem.resize(static_cast<size_t>(db));
  return {RationalPolynomial(std::move(quot)), RationalPolynomial(std::move(rem))};
}

RationalPolynomial RationalPolynomial::gcd(RationalPolynomial a, RationalPolynomial b) {
  while (!b.is_zero()) {
    auto r = divide(a, b).second;
    a = std::move(b);
    b = r.monic();
  }
  return a.monic();
}

std::vector<RationalPolynomial> square_free_decomposition(const RationalPolynomial& p) {
  std::vector<RationalPolynomial> factors;
  if (p.degree() <= 0) return factors;
  const RationalPolynomial dp = p.derivative();
  const RationalPolynomial a = RationalPolynomial::gcd(p, dp);
  RationalPolynomial b = RationalPolynomial::divide(p, a).first;
  RationalPolynomial c = RationalPolynomial::divide(dp, a).first;
  RationalPolynomial d = c - b.derivative();
  while (b.degree() > 0) {
    RationalPolynomial ai = RationalPolynomial::gcd(b, d);
    b = RationalPolynomial::divide(b, ai).first;
    c = RationalPolynomial::divide(d, ai).first;
    d = c - b.derivative();
    factors.push_back(ai);
  }
  return factors;
}

namespace {

int sign_of(const Rational& q) { return sgn(q); }

// Sign of p at x, or at -inf/+inf for infinite x.
int sign_at(const RationalPolynomial& p, double x) {
  if (p.is_zero()) return 0;
  if (std::isinf(x)) {
    const int lead = sign_of(p.leading());
    return (x < 0 && p.degree() % 2 == 1) ? -lead : lead;
  }
  return sign_of(p(rational_from_double(x)));
}

int sign_changes(const std::vector<RationalPolynomial>& seq, double x) {
  int changes = 0;
  int last = 0;
  for (const auto& s : seq) {
    const int v = sign_at(s, x);
    if (v == 0) continue;
    if (last != 0 && v != last) ++changes;
    last = v;
  }
  return changes;
}

}  // namespace

int sturm_count(const RationalPolynomial& p, double lower, double upper) {
  if (p.degree() <= 0 || lower > upper) return 0;
  std::vector<RationalPolynomial> seq{p, p.derivative()};
  while (seq.back().degree() > 0) {
    auto r = RationalPolynomial::divide(seq[seq.size() - 2], seq.back()).second;
    if (r.is_zero()) break;
    seq.push_back(RationalPolynomial() - r);
  }
  // V(a) - V(b) counts roots in (a, b]
  int count = sign_changes(seq, lower) - sign_changes(seq, upper);
  if (std::isfinite(lower) && p(rational_from_double(lower)) == 0) ++count;
  return count;
}

int count_real_roots(const RationalPolynomial& p, double lower, double upper) {
  if (p.is_zero()) throw Error(ErrorKind::ZeroFunction, "the zero polynomial has infinitely many roots");
  int total = 0;
  const auto factors = square_free_decomposition(p);
  for (size_t i = 0; i < factors.size(); ++i) total += static_cast<int>(i + 1) * sturm_count(factors[i], lower, upper);
  return total;
}

IncidencePolynomial incidence_polynomial(const EmbeddingSpec& spec, const Hyperplane& h) {
  if (h.normal.size() != spec.ambient_dim()) throw Error(ErrorKind::DimensionMismatch, "hyperplane in the wrong ambient space");
  if (!h.normal.allFinite() || !std::isfinite(h.offset)) throw Error(ErrorKind::InvalidInput, "non-finite hyperplane");
  if (h.normal.isZero(0.0)) throw Error(ErrorKind::InvalidParameter, "zero hyperplane normal");
  Eigen::VectorXd normal = h.normal;
  double offset = h.offset;
  const EmbeddingSpec* s = &spec;
  while (const auto* a = std::get_if<EmbeddingSpec::Affine>(&s->payload())) {
    offset += normal.dot(a->offset);
    normal = a->matrix.transpose() * normal;
    s = a->base.get();
  }
  IncidencePolynomial p;
  p.coefficients.push_back(offset);
  if (const auto* m = std::get_if<EmbeddingSpec::MomentCurve>(&s->payload())) {
    p.basis = IncidencePolynomial::Basis::monomial;
    p.degree = m->degree;
  } else if (const auto* t = std::get_if<EmbeddingSpec::TrigCurve>(&s->payload())) {
    p.basis = IncidencePolynomial::Basis::trigonometric;
    p.degree = t->harmonics;
  } else {
    throw Error(ErrorKind::InvalidParameter, "incidence polynomials exist for moment and trigonometric curves only");
  }
  for (Eigen::Index i = 0; i < normal.size(); ++i) p.coefficients.push_back(normal[i]);
  return p;
}

RationalPolynomial half_angle_numerator(const std::vector<Rational>& coefficients) {
  if (coefficients.size() % 2 != 1) throw Error(ErrorKind::InvalidParameter, "trigonometric polynomial needs 2h+1 coefficients");
  const int h = static_cast<int>(coefficients.size() / 2);
  const RationalPolynomial one_plus_s2({Rational(1), Rational(0), Rational(1)});
  std::vector<RationalPolynomial> powers{RationalPolynomial({Rational(1)})};  // (1+s^2)^e
  for (int e = 1; e <= h; ++e) powers.push_back(powers.back() * one_plus_s2);

  RationalPolynomial total = RationalPolynomial({coefficients[0]}) * powers[static_cast<size_t>(h)];
  for (int j = 1; j <= h; ++j) {
    // (1 + i s)^(2j) = sum_r C(2j, r) i^r s^r
    std::vector<Rational> re(static_cast<size_t>(2 * j + 1), Rational(0)), im(static_cast<size_t>(2 * j + 1), Rational(0));
    mpz_class binom = 1;
    for (int r = 0; r <= 2 * j; ++r) {
      if (r > 0) binom = binom * (2 * j - r + 1) / r;
      const int phase = r % 4;  // i^r = 1, i, -1, -i
      if (phase == 0) re[static_cast<size_t>(r)] = binom;
      if (phase == 1) im[static_cast<size_t>(r)] = binom;
      if (phase == 2) re[static_cast<size_t>(r)] = -binom;
      if (phase == 3) im[static_cast<size_t>(r)] = -binom;
    }
    const Rational& a = coefficients[static_cast<size_t>(2 * j - 1)];
    const Rational& b = coefficients[static_cast<size_t>(2 * j)];
    for (auto& x : re) x *= a;
    for (auto& x : im) x *= b;
    total = total + (RationalPolynomial(re) + RationalPolynomial(im)) * powers[static_cast<size_t>(h - j)];
  }
  return total;
}

namespace {

std::vector<Rational> exact_coefficients(const std::vector<double>& c) {
  std::vector<Rational> out;
  for (double x : c) out.push_back(rational_from_double(x));
  return out;
}

void require_nonzero(const std::vector<Rational>& c) {
  for (const auto& x : c) {
    if (x != 0) return;
  }
  throw Error(ErrorKind::ZeroFunction, "all coefficients vanish");
}

}  // namespace

RationalPolynomial half_angle_numerator(const IncidencePolynomial& p) {
  if (static_cast<int>(p.coefficients.size()) != 2 * p.degree + 1) {
    throw Error(ErrorKind::InvalidParameter, "trigonometric polynomial needs 2h+1 coefficients");
  }
  return half_angle_numerator(exact_coefficients(p.coefficients));
}

int count_monomial_roots(const std::vector<Rational>& coefficients, const RootDomain& domain) {
  require_nonzero(coefficients);
  return count_real_roots(RationalPolynomial(coefficients), domain.lower, domain.upper);
}

int count_trig_roots(const std::vector<Rational>& coefficients) {
  require_nonzero(coefficients);
  const RationalPolynomial numerator = half_angle_numerator(coefficients);
  const int h = static_cast<int>(coefficients.size() / 2);
  // the root at t = pi shows up as a drop in degree
  return count_real_roots(numerator) + (2 * h - numerator.degree());
}

int count_roots_with_multiplicity(const IncidencePolynomial& p, const RootDomain& domain) {
  for (double c : p.coefficients) {
    if (!std::isfinite(c)) throw Error(ErrorKind::InvalidInput, "non-finite coefficient");
  }
  if (p.basis == IncidencePolynomial::Basis::monomial) return count_monomial_roots(exact_coefficients(p.coefficients), domain);
  if (static_cast<int>(p.coefficients.size()) != 2 * p.degree + 1) {
    throw Error(ErrorKind::InvalidParameter, "trigonometric polynomial needs 2h+1 coefficients");
  }
  return count_trig_roots(exact_coefficients(p.coefficients));
}

}  // namespace regemb
