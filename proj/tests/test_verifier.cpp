#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include <Eigen/SVD>

#include "oracles.hpp"
#include "regemb/error.hpp"
#include "regemb/verifier.hpp"

using namespace regemb;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
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

RationalVector rvec(std::initializer_list<Rational> v) { return RationalVector(v); }

// Lifted confluent Vandermonde matrix built directly: rows t, ..., t^m, 1.
RationalMatrix vandermonde_matrix(const std::vector<Rational>& simple, const std::vector<Rational>& dbl) {
  const int m = static_cast<int>(simple.size() + 2 * dbl.size()) - 1;
  RationalMatrix a(m + 1, m + 1);
  int col = 0;
  auto point = [&](const Rational& t) {
    for (int i = 0; i < m; ++i) {
      Rational p = 1;
      for (int e = 0; e <= i; ++e) p *= t;
      a(i, col) = p;
    }
    a(m, col++) = 1;
  };
  for (const auto& t : simple) point(t);
  for (const auto& s : dbl) {
    point(s);
    for (int i = 0; i < m; ++i) {
      Rational p = i + 1;
      for (int e = 0; e < i; ++e) p *= s;
      a(i, col) = p;
    }
    a(m, col++) = 0;
  }
  return a;
}

std::vector<Configuration> sub_configurations(const Configuration& c) {
  std::vector<Configuration> subs;
  for (int i = 0; i < c.k(); ++i) {
    Configuration s = c;
    s.through_points.erase(s.through_points.begin() + i);
    if (s.k() + s.l() > 0) subs.push_back(s);
  }
  for (int j = 0; j < c.l(); ++j) {
    Configuration s = c;
    s.tangency_points.erase(s.tangency_points.begin() + j);
    s.directions.erase(s.directions.begin() + j);
    if (s.k() + s.l() > 0) subs.push_back(s);
  }
  return subs;
}

}  // namespace

TEST_CASE("check_configuration examples") {
  const Configuration c{{vec({1})}, {vec({0})}, {{vec({1})}}};
  auto v = check_configuration(moment_curve(2), c);
  CHECK(v.regular);
  CHECK(v.rank_report.rank == 3);
  CHECK_FALSE(v.hyperplane_witness);

  auto line = check_configuration(moment_curve(1), c);
  CHECK_FALSE(line.regular);

  auto three = check_configuration(moment_curve(2), Configuration{{vec({0}), vec({1}), vec({2})}, {}, {}});
  CHECK(three.regular);

  CHECK(kind_of([] { check_configuration(moment_curve(2), Configuration{{vec({0.5}), vec({0.5})}, {}, {}}); }) ==
        ErrorKind::DistinctnessViolation);
  CHECK(kind_of([] { check_configuration(moment_curve(2), Configuration{}); }) == ErrorKind::EmptyConfiguration);
}

TEST_CASE("exact check on rational input") {
  RationalConfiguration rc;
  rc.through_points = {rvec({1})};
  rc.tangency_points = {rvec({0})};
  rc.directions = {{rvec({1})}};
  auto v = check_configuration(moment_curve(2), rc);
  CHECK(v.regular);
  CHECK(v.rank_report.exact);
  auto dep = check_configuration(moment_curve(1), rc);
  CHECK_FALSE(dep.regular);
  CHECK(dep.rank_report.exact);
  // trig is not polynomial over Q: numeric fallback
  auto t = check_configuration(trig_curve(2), rc);
  CHECK_FALSE(t.rank_report.exact);
}

TEST_CASE("subspace checks") {
  const Configuration full{{}, {vec({0, 0})}, {{vec({1, 0}), vec({0, 1})}}};
  auto v = check_subspace_configuration(complex_moment_curve(2), full);
  CHECK(v.regular);
  CHECK(v.rank_report.columns == 3);

  std::mt19937_64 rng(8);
  for (int i = 0; i < 20; ++i) {
    auto r = stream_rng(8, static_cast<std::uint64_t>(i));
    const Configuration c = random_configuration(DomainChart::real_plane(), 1, 2, 1e-3, TangentMode::single_direction, r);
    auto a = check_configuration(complex_moment_curve(3), c);
    auto b = check_subspace_configuration(complex_moment_curve(3), c);
    CHECK(a.regular == b.regular);
    CHECK(a.rank_report.margin == b.rank_report.margin);
  }
  CHECK(kind_of([] {
          check_subspace_configuration(complex_moment_curve(2),
                                       Configuration{{}, {vec({0, 0})}, {{vec({1, 0}), vec({0, 1}), vec({1, 1})}}});
        }) == ErrorKind::InvalidParameter);
  CHECK(kind_of([] { check_configuration(complex_moment_curve(2), Configuration{{}, {vec({0, 0})}, {{vec({1, 0}), vec({0, 1})}}}); }) ==
        ErrorKind::InvalidParameter);
}

TEST_CASE("tangent planes versus tangent lines") {
  // A dependent tangent plane always contains a dependent tangent line: the
  // null vector of the plane check gives the line.
  for (int m : {1, 2}) {
    const auto spec = complex_moment_curve(m);
    for (int i = 0; i < 100; ++i) {
      auto rng = stream_rng(17, static_cast<std::uint64_t>(i));
      const Configuration c = random_configuration(spec.domain(), 1, 1, 1e-2, TangentMode::full_space, rng);
      const auto plane = check_subspace_configuration(spec, c);
      bool all_lines = true;
      for (int g = 0; g < 64; ++g) {
        const double a = M_PI * g / 64;
        Configuration line = c;
        line.directions = {{vec({std::cos(a), std::sin(a)})}};
        all_lines = all_lines && check_configuration(spec, line).regular;
      }
      if (!plane.regular) {
        const LiftedMatrix lm = lifted_matrix(spec, c);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(lm.columns, Eigen::ComputeFullV);
        const Eigen::VectorXd null = svd.matrixV().col(lm.cols() - 1);
        Eigen::VectorXd w = null[2] * vec({1, 0}) + null[3] * vec({0, 1});
        if (w.norm() > 1e-9) {
          Configuration line = c;
          line.directions = {{w.normalized()}};
          all_lines = all_lines && check_configuration(spec, line).regular;
        }
      }
      CHECK(plane.regular == all_lines);
    }
  }
}

TEST_CASE("exact tangent plane check equals its two basis columns") {
  const auto spec = complex_moment_curve(2);
  for (int i = 0; i < 50; ++i) {
    auto rng = stream_rng(23, static_cast<std::uint64_t>(i));
    const RationalConfiguration rc = random_rational_configuration(spec.domain(), 1, 1, 1e-2, TangentMode::full_space, 16, rng);
    const auto plane = check_subspace_configuration(spec, rc);
    REQUIRE(plane.rank_report.exact);
    const RationalJet jet = evaluate_jet_exact(spec, rc.tangency_points[0], rc.directions[0]);
    std::vector<RationalVector> columns{lift_point(evaluate_jet_exact(spec, rc.through_points[0], {}).value), lift_point(jet.value),
                                        lift_direction(jet.directional_derivatives[0]),
                                        lift_direction(jet.directional_derivatives[1])};
    const RationalMatrix m = RationalMatrix::from_columns(columns, spec.ambient_dim() + 1);
    CHECK(plane.regular == (oracle::minor_rank(m) == 4));
  }
}

TEST_CASE("confluent Vandermonde certificate examples") {
  auto a = confluent_vandermonde_certificate({Rational(1)}, {Rational(0)});
  CHECK(abs(a.determinant) == 1);
  CHECK(a.dimension == 3);
  auto b = confluent_vandermonde_certificate({Rational(0), Rational(1), Rational(2)}, {});
  CHECK(abs(b.determinant) == 2);
  auto c = confluent_vandermonde_certificate({}, {Rational(0), Rational(1)});
  CHECK(abs(c.determinant) == 1);
  CHECK(c.dimension == 4);
  CHECK(kind_of([] { confluent_vandermonde_certificate({Rational(1), Rational(1)}, {Rational(0)}); }) ==
        ErrorKind::DistinctnessViolation);
  CHECK(kind_of([] { confluent_vandermonde_certificate({}, {}); }) == ErrorKind::EmptyConfiguration);
}

TEST_CASE("certificate matches brute-force determinants") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
  for (int trial = 0; trial < 60; ++trial) {
    const int k = static_cast<int>(rng() % 4), l = static_cast<int>(rng() % 3);
    if (k + l == 0) continue;
    std::vector<Rational> nodes;
    while (static_cast<int>(nodes.size()) < k + l) {
      Rational t(num(rng), den(rng));
      t.canonicalize();
      if (std::find(nodes.begin(), nodes.end(), t) == nodes.end()) nodes.push_back(t);
    }
    std::vector<Rational> simple(nodes.begin(), nodes.begin() + k), dbl(nodes.begin() + k, nodes.end());
    const auto cert = confluent_vandermonde_certificate(simple, dbl);
    const Rational brute = oracle::leibniz_det(vandermonde_matrix(simple, dbl));
    CHECK(cert.determinant == brute);
    CHECK(abs(brute) == cert.product_formula);
  }
}

TEST_CASE("moment curve verdicts agree with the certificate") {
  for (int i = 0; i < 60; ++i) {
    auto rng = stream_rng(41, static_cast<std::uint64_t>(i));
    const int k = static_cast<int>(rng() % 4), l = 1 + static_cast<int>(rng() % 3);
    const auto spec = moment_curve(k + 2 * l - 1);
    const RationalConfiguration rc = random_rational_configuration(spec.domain(), k, l, 1e-3, TangentMode::single_direction, 1024, rng);
    std::vector<Rational> simple, dbl;
    for (const auto& p : rc.through_points) simple.push_back(p[0]);
    for (const auto& p : rc.tangency_points) dbl.push_back(p[0]);
    const auto cert = confluent_vandermonde_certificate(simple, dbl);
    const auto v = check_configuration(spec, rc);
    CHECK(v.rank_report.exact);
    CHECK(v.regular == (cert.determinant != 0));
    // same matrix up to column order and direction scaling
    const RationalLiftedMatrix lm = lifted_matrix(spec, rc);
    Rational scale = 1;
    for (const auto& g : rc.directions) scale *= g[0][0];
    CHECK(abs(exact_determinant(lm.columns)) == abs(cert.determinant * scale));
  }
}

TEST_CASE("regular verdicts survive dropping points") {
  const std::vector<std::pair<EmbeddingSpec, std::pair<int, int>>> cases{
      {moment_curve(4), {3, 1}}, {trig_curve(2), {1, 2}}, {complex_moment_curve(2), {2, 1}}, {tensor_product(moment_curve(2), moment_curve(2)), {1, 1}}};
  for (const auto& [spec, kl] : cases) {
    for (int i = 0; i < 30; ++i) {
      auto rng = stream_rng(51, static_cast<std::uint64_t>(i));
      const Configuration c = random_configuration(spec.domain(), kl.first, kl.second, 1e-2, TangentMode::single_direction, rng);
      const auto v = check_configuration(spec, c);
      if (!v.regular) continue;
      for (const auto& s : sub_configurations(c)) CHECK(check_configuration(spec, s).regular);
    }
  }
}

TEST_CASE("hyperplane witnesses satisfy the incidence conditions") {
  const std::vector<std::pair<EmbeddingSpec, std::pair<int, int>>> cases{
      {zero_pad(moment_curve(2), 1), {2, 1}}, {zero_pad(trig_curve(1), 1), {0, 2}}, {zero_pad(moment_curve(3), 2), {3, 1}}};
  for (const auto& [spec, kl] : cases) {
    for (int i = 0; i < 30; ++i) {
      auto rng = stream_rng(61, static_cast<std::uint64_t>(i));
      const Configuration c = random_configuration(spec.domain(), kl.first, kl.second, 1e-2, TangentMode::single_direction, rng);
      const auto v = check_configuration(spec, c);
      REQUIRE_FALSE(v.regular);
      REQUIRE(v.hyperplane_witness);
      CHECK(v.hyperplane_witness->normal.norm() == doctest::Approx(1.0));
      CHECK(incidence_residuals(spec, c, *v.hyperplane_witness).max() <= 1e-10);
    }
  }
}

TEST_CASE("find_violating_hyperplane") {
  const Configuration two_tangents{{}, {vec({0.3}), vec({2.0})}, {{vec({1})}, {vec({1})}}};
  auto plane = find_violating_hyperplane(trig_curve(1), two_tangents);
  REQUIRE(plane);
  CHECK(plane->dimension == 2);
  CHECK(plane->covectors.cols() == 0);

  CHECK_FALSE(find_violating_hyperplane(moment_curve(2), Configuration{{vec({1})}, {vec({0})}, {{vec({1})}}}));

  const Configuration c{{vec({-0.5}), vec({0.75})}, {vec({0.1})}, {{vec({1})}}};
  auto flat = find_violating_hyperplane(zero_pad(moment_curve(2), 1), c);
  REQUIRE(flat);
  CHECK(flat->dimension == 2);
  REQUIRE(flat->covectors.cols() == 1);
  // the covector is the plane z = 0
  CHECK(std::abs(flat->covectors(2, 0)) == doctest::Approx(1.0));
}

TEST_CASE("tangency crossing probe") {
  auto circle = tangency_crossing_probe(trig_curve(1), 0.0, 1.0, Hyperplane{vec({1, 0}), -1.0});
  CHECK(circle.one_sided);
  for (double v : circle.values) CHECK(v <= 0.0);
  auto parabola = tangency_crossing_probe(moment_curve(2), 0.0, 1.0, Hyperplane{vec({0, 1}), 0.0});
  CHECK(parabola.one_sided);
  CHECK(parabola.signs.size() == 16);
  CHECK(kind_of([] { tangency_crossing_probe(moment_curve(3), 0.0, 1.0, Hyperplane{vec({0, 0, 1}), 0.0}); }) ==
        ErrorKind::DegenerateCurvature);
  CHECK(kind_of([] { tangency_crossing_probe(moment_curve(2), 0.5, 1.0, Hyperplane{vec({0, 1}), 0.0}); }) == ErrorKind::NotATangency);
}
