#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "regemb/error.hpp"
#include "regemb/polynomial.hpp"

using namespace regemb;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

RationalPolynomial poly(std::initializer_list<long> c) {
  std::vector<Rational> r;
  for (long x : c) r.emplace_back(x);
  return RationalPolynomial(r);
}

// prod (t - root)
RationalPolynomial from_roots(const std::vector<Rational>& roots) {
  RationalPolynomial p({Rational(1)});
  for (const auto& r : roots) p = p * RationalPolynomial({-r, Rational(1)});
  return p;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidInput;
}

}  // namespace

TEST_CASE("polynomial arithmetic") {
  const auto p = poly({1, 2, 1});  // (1+t)^2
  CHECK(p.degree() == 2);
  CHECK(p(Rational(-1)) == 0);
  CHECK(p.derivative() == poly({2, 2}));
  auto [q, r] = RationalPolynomial::divide(p, poly({1, 1}));
  CHECK(q == poly({1, 1}));
  CHECK(r.is_zero());
  CHECK(RationalPolynomial::gcd(p, poly({-1, 0, 1})) == poly({1, 1}));
  CHECK(RationalPolynomial().degree() == -1);
}

TEST_CASE("square-free decomposition recovers multiplicities") {
  // (t-1)(t+2)^2 t^3
  const auto p = from_roots({1, -2, -2, 0, 0, 0});
  const auto f = square_free_decomposition(p);
  REQUIRE(f.size() == 3);
  CHECK(f[0] == from_roots({1}));
  CHECK(f[1] == from_roots({-2}));
  CHECK(f[2] == from_roots({0}));
}

TEST_CASE("Sturm counting on intervals") {
  const auto p = from_roots({-1, Rational(1, 2), 3});
  CHECK(sturm_count(p, -INFINITY, INFINITY) == 3);
  CHECK(sturm_count(p, -1, 3) == 3);  // closed interval
  CHECK(sturm_count(p, -0.5, 2) == 1);
  CHECK(sturm_count(p, 0.5, 0.5) == 1);
  CHECK(sturm_count(poly({1, 0, 1}), -INFINITY, INFINITY) == 0);
}

TEST_CASE("count_real_roots with multiplicity matches constructed roots") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> num(-6, 6), mult(1, 3), count(1, 4);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Rational> roots;
    int expected_inside = 0;
    const int distinct = count(rng);
    std::vector<Rational> used;
    for (int i = 0; i < distinct; ++i) {
      Rational r(num(rng), 2);
      r.canonicalize();
      if (std::find(used.begin(), used.end(), r) != used.end()) continue;
      used.push_back(r);
      const int m = mult(rng);
      for (int j = 0; j < m; ++j) roots.push_back(r);
      if (r >= -1 && r <= 2) expected_inside += m;
    }
    // an irreducible quadratic factor adds no real roots
    const auto p = from_roots(roots) * poly({2, 0, 1});
    CHECK(count_real_roots(p) == static_cast<int>(roots.size()));
    CHECK(count_real_roots(p, -1, 2) == expected_inside);
  }
  CHECK(kind_of([] { count_real_roots(RationalPolynomial()); }) == ErrorKind::ZeroFunction);
}

TEST_CASE("incidence polynomials") {
  auto m = incidence_polynomial(moment_curve(2), Hyperplane{vec({-1, 1}), 0.0});
  CHECK(m.basis == IncidencePolynomial::Basis::monomial);
  CHECK(m.coefficients == std::vector<double>{0, -1, 1});
  CHECK(count_roots_with_multiplicity(m, RootDomain{-2, 2}) == 2);

  auto t = incidence_polynomial(trig_curve(1), Hyperplane{vec({1, 0}), -1.0});
  CHECK(t.basis == IncidencePolynomial::Basis::trigonometric);
  CHECK(t.coefficients == std::vector<double>{-1, 1, 0});
  CHECK(count_roots_with_multiplicity(t) == 2);

  CHECK(kind_of([] { incidence_polynomial(moment_curve(2), Hyperplane{vec({0, 0}), 1.0}); }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([] { incidence_polynomial(complex_moment_curve(1), Hyperplane{vec({1, 0}), 1.0}); }) == ErrorKind::InvalidParameter);

  IncidencePolynomial no_roots{IncidencePolynomial::Basis::monomial, {1, 0, 1}, 2};
  CHECK(count_roots_with_multiplicity(no_roots) == 0);
  IncidencePolynomial zero{IncidencePolynomial::Basis::monomial, {0, 0}, 1};
  CHECK(kind_of([&] { count_roots_with_multiplicity(zero); }) == ErrorKind::ZeroFunction);

  // pullback through a truncation
  auto tr = incidence_polynomial(truncate(trig_curve(2), 3), Hyperplane{vec({0, 0, 1}), 1.0});
  CHECK(tr.coefficients == std::vector<double>{1, 0, 0, 1, 0});
}

TEST_CASE("trigonometric roots at pi and multiplicities") {
  // 1 + cos a: double root at pi
  CHECK(count_trig_roots({Rational(1), Rational(1), Rational(0)}) == 2);
  // cos a: roots pi/2, 3pi/2
  CHECK(count_trig_roots({Rational(0), Rational(1), Rational(0)}) == 2);
  // sin 2a: roots 0, pi/2, pi, 3pi/2
  CHECK(count_trig_roots({Rational(0), Rational(0), Rational(0), Rational(0), Rational(1)}) == 4);
  // (1 + cos a)^2 = 3/2 + 2 cos a + cos(2a)/2: quadruple root at pi
  CHECK(count_trig_roots({Rational(3, 2), Rational(2), Rational(0), Rational(1, 2), Rational(0)}) == 4);
  // 2 + cos a: no roots
  CHECK(count_trig_roots({Rational(2), Rational(1), Rational(0)}) == 0);
  CHECK(kind_of([] { count_trig_roots({Rational(0), Rational(0), Rational(0)}); }) == ErrorKind::ZeroFunction);
}

TEST_CASE("trigonometric root counts match sign changes on a fine grid") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> num(-4, 4);
  for (int trial = 0; trial < 200; ++trial) {
    const int h = 1 + static_cast<int>(rng() % 3);
    std::vector<Rational> c;
    std::vector<double> cd;
    for (int i = 0; i <= 2 * h; ++i) {
      c.emplace_back(num(rng));
      cd.push_back(c.back().get_d());
    }
    if (std::all_of(cd.begin(), cd.end(), [](double x) { return x == 0; })) continue;
    auto f = [&](double a) {
      double v = cd[0];
      for (int j = 1; j <= h; ++j) v += cd[2 * j - 1] * std::cos(j * a) + cd[2 * j] * std::sin(j * a);
      return v;
    };
    const int count = count_trig_roots(c);
    CHECK(count <= 2 * h);
    CHECK(count % 2 == 0);  // periodic functions change sign an even number of times
    int changes = 0;
    const int steps = 20000;
    double prev = f(0.5e-4);
    for (int s = 1; s <= steps; ++s) {
      const double cur = f(0.5e-4 + kTwoPi * s / steps);
      if ((prev < 0) != (cur < 0) && prev != 0 && cur != 0) ++changes;
      prev = cur;
    }
    CHECK(changes <= count);
  }
}

TEST_CASE("root-count bounds for random hyperplanes") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  for (int h = 1; h <= 3; ++h) {
    const auto spec = trig_curve(h);
    for (int i = 0; i < 1000; ++i) {
      Eigen::VectorXd n(2 * h);
      for (Eigen::Index j = 0; j < n.size(); ++j) n[j] = g(rng);
      CHECK(count_roots_with_multiplicity(incidence_polynomial(spec, Hyperplane{n, g(rng)})) <= 2 * h);
    }
  }
  for (int m = 1; m <= 6; ++m) {
    const auto spec = moment_curve(m);
    for (int i = 0; i < 1000; ++i) {
      Eigen::VectorXd n(m);
      for (Eigen::Index j = 0; j < n.size(); ++j) n[j] = g(rng);
      CHECK(count_roots_with_multiplicity(incidence_polynomial(spec, Hyperplane{n, g(rng)})) <= m);
    }
  }
}
