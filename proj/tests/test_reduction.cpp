#include <doctest.h>

#include <cmath>
#include <functional>

#include <Eigen/QR>

#include "regemb/error.hpp"
#include "regemb/io.hpp"
#include "regemb/reduction.hpp"

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

ProjectOptions quick(int k, int l, long long budget = 2000) {
  ProjectOptions o;
  o.k = k;
  o.l = l;
  o.budget = budget;
  return o;
}

}  // namespace

TEST_CASE("span_union_dimension") {
  CHECK(span_union_dimension(1, 0, 2) == 5);
  for (int n = 1; n <= 4; ++n) CHECK(span_union_dimension(n, 2, 0) == 2 * n + 1);
  CHECK(span_union_dimension(2, 1, 1) == 7);
  CHECK(kind_of([] { span_union_dimension(2, 0, 0); }) == ErrorKind::EmptyConfiguration);
}

TEST_CASE("orthogonal complement basis") {
  for (const auto& a : {vec({0, 0, 1}), vec({1, 0, 0}), Eigen::VectorXd(vec({1, -2, 2}).normalized()), Eigen::VectorXd(vec({0, 0, -1}))}) {
    const Eigen::MatrixXd q = orthogonal_complement(a);
    CHECK((q.transpose() * q - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-14);
    CHECK((q.transpose() * a).norm() < 1e-14);
  }
}

TEST_CASE("projecting from e_N deletes a zero coordinate") {
  const auto spec = zero_pad(moment_curve(2), 1);
  auto [projected, step] = project_step(spec, vec({0, 0, 1}), quick(1, 0, 100));
  CHECK(step.input_dim == 3);
  CHECK(step.output_dim == 2);
  CHECK(projected.ambient_dim() == 2);
  for (double t : {-0.7, 0.1, 0.9}) {
    const Eigen::VectorXd p = Eigen::VectorXd::Constant(1, t);
    const Eigen::VectorXd f = evaluate(spec, p);
    const Eigen::VectorXd expected = (f.head(2) - step.origin.head(2)) / step.scale;
    CHECK((evaluate(projected, p) - expected).norm() < 1e-14);
  }
  // the center sits off the target hyperplane
  const Hyperplane& h = step.target_hyperplane;
  CHECK(std::abs(h.normal.dot(step.center) + h.offset) == doctest::Approx(step.scale));
}

TEST_CASE("central projection acts linearly on lifted columns") {
  const auto spec = tensor_product(moment_curve(2), moment_curve(2));
  const Eigen::VectorXd a = vec({0.3, -0.1, 0.5, 0.2, -0.6, 0.1, 0.4, -0.3}).normalized();
  auto [projected, step] = project_step(spec, a, quick(1, 1, 500));
  const int n = spec.ambient_dim();
  const Eigen::MatrixXd q = orthogonal_complement(step.unit_center);
  // L (z, 1) = (Q^T (z - o) / s, 1 - <a, z - o> / s)
  Eigen::MatrixXd lmap(n, n + 1);
  lmap.topLeftCorner(n - 1, n) = q.transpose() / step.scale;
  lmap.topRightCorner(n - 1, 1) = -q.transpose() * step.origin / step.scale;
  lmap.bottomLeftCorner(1, n) = -step.unit_center.transpose() / step.scale;
  lmap(n - 1, n) = 1.0 + step.unit_center.dot(step.origin) / step.scale;
  for (int i = 0; i < 100; ++i) {
    auto rng = stream_rng(2, static_cast<std::uint64_t>(i));
    const Configuration c = random_configuration(spec.domain(), 1, 1, 1e-2, TangentMode::single_direction, rng);
    const LiftedMatrix before = lifted_matrix(spec, c);
    const LiftedMatrix after = lifted_matrix(projected, c);
    const Eigen::MatrixXd image = lmap * before.columns;
    for (int col = 0; col < 2; ++col) {
      const double t = 1.0 / image(n - 1, col);
      CHECK((after.columns.col(col) - t * image.col(col)).norm() < 1e-12 * (1 + after.columns.col(col).norm()));
    }
    // the direction column lies in the span of L(direction) and the tangency column
    Eigen::MatrixXd span(n, 2);
    span << image.col(2), after.columns.col(1);
    const Eigen::VectorXd coeff = span.colPivHouseholderQr().solve(after.columns.col(2));
    CHECK((span * coeff - after.columns.col(2)).norm() < 1e-10 * (1 + after.columns.col(2).norm()));
    // accepted steps keep regular configurations regular
    CHECK(rank_and_margin(before).full_column_rank());
    CHECK(rank_and_margin(after).full_column_rank());
  }
}

TEST_CASE("tensor of parabolas drops from 8 to 7 dimensions") {
  auto plan = [] {
    ReduceOptions opt;
    opt.budget = 2000;
    opt.seed = 0;
    return reduce_dimension(tensor_product(moment_curve(2), moment_curve(2)), 1, 1, 7, opt);
  };
  const ReductionPlan p = plan();
  REQUIRE(p.steps.size() == 1);
  CHECK(p.start_dim == 8);
  CHECK(p.final_dim == 7);
  CHECK(p.spec.ambient_dim() == 7);
  CHECK(static_cast<int>(p.steps.size()) == p.start_dim - p.final_dim);
  for (const auto& s : p.steps) {
    CHECK(s.output_dim == s.input_dim - 1);
    CHECK(s.validation.best_margin > 0.0);
    CHECK(s.validation.violations == 0);
  }
  // identical inputs, identical plans
  CHECK(to_json(plan()) == to_json(p));
}

TEST_CASE("reduction plans that need no steps or cannot exist") {
  ReduceOptions opt;
  const ReductionPlan p = reduce_dimension(moment_curve(2), 1, 1, 4, opt);
  CHECK(p.steps.empty());
  CHECK(p.final_dim == 2);
  CHECK(kind_of([&] { reduce_dimension(tensor_product(moment_curve(2), moment_curve(2)), 1, 1, 3, opt); }) ==
        ErrorKind::InvalidParameter);
  opt.budget = 0;
  CHECK(kind_of([&] { reduce_dimension(tensor_product(moment_curve(2), moment_curve(2)), 1, 1, 7, opt); }) ==
        ErrorKind::InvalidParameter);
}

TEST_CASE("a map that is never regular exhausts its retries") {
  ReduceOptions opt;
  opt.budget = 50;
  opt.max_retries = 3;
  CHECK(kind_of([&] { reduce_dimension(zero_pad(trig_curve(1), 4), 0, 2, 5, opt); }) == ErrorKind::ReductionFailed);
}

TEST_CASE("a center on a secant is rejected") {
  const auto spec = moment_curve(3);
  const auto [origin, scale] = image_normalization(spec);
  const Eigen::VectorXd y1 = (evaluate(spec, vec({-0.5})) - origin) / scale;
  const Eigen::VectorXd y2 = (evaluate(spec, vec({0.6})) - origin) / scale;
  const Eigen::VectorXd d = y2 - y1;
  // |y1 + s d| = 1 with s > 0
  const double b = y1.dot(d), dd = d.squaredNorm(), cc = y1.squaredNorm() - 1.0;
  const double s = (-b + std::sqrt(b * b - dd * cc)) / dd;
  const Eigen::VectorXd center = y1 + s * d;
  ProjectOptions opt = quick(2, 0, 2000);
  opt.search_restarts = 16;
  opt.search_iters = 200;
  // the two secant points now share an image
  const EmbeddingSpec projected = projected_map(spec, origin, scale, center, orthogonal_complement(center));
  CHECK((evaluate(projected, vec({-0.5})) - evaluate(projected, vec({0.6}))).norm() < 1e-12);
  CHECK(kind_of([&] { project_step(spec, center, opt); }) == ErrorKind::StepRejected);
}
