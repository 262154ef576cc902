#include "regemb/reduction.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "regemb/bounds.hpp"
#include "regemb/error.hpp"

namespace regemb {

int span_union_dimension(int n, int k, int l) {
  if (k < 0 || l < 0 || n < 1) throw Error(ErrorKind::InvalidParameter, "need n >= 1 and k, l >= 0");
  if (k + l == 0) throw Error(ErrorKind::EmptyConfiguration, "k + l must be at least 1");
  return k * (n + 1) + l * (2 * n + 1) - 1;
}

namespace {

// Regular grid over the parameter box; periodic coordinates skip the
// endpoint 2pi.
std::vector<Eigen::VectorXd> parameter_grid(const DomainChart& chart, int total) {
  const int n = chart.dim();
  const int per_axis = std::max(2, static_cast<int>(std::floor(std::pow(static_cast<double>(total), 1.0 / n))));
  std::vector<Eigen::VectorXd> grid;
  std::vector<int> index(static_cast<size_t>(n), 0);
  for (;;) {
    Eigen::VectorXd p(n);
    for (int d = 0; d < n; ++d) {
      const double lo = chart.lower()[d], hi = chart.upper()[d];
      const double frac = chart.periodic(d) ? static_cast<double>(index[static_cast<size_t>(d)]) / per_axis
                                            : static_cast<double>(index[static_cast<size_t>(d)]) / (per_axis - 1);
      p[d] = lo + frac * (hi - lo);
    }
    grid.push_back(std::move(p));
    int d = n - 1;
    while (d >= 0 && ++index[static_cast<size_t>(d)] == per_axis) index[static_cast<size_t>(d--)] = 0;
    if (d < 0) break;
  }
  return grid;
}

}  // namespace

std::pair<Eigen::VectorXd, double> image_normalization(const EmbeddingSpec& spec, int grid_points) {
  const auto grid = parameter_grid(spec.domain(), grid_points);
  std::vector<Eigen::VectorXd> images;
  images.reserve(grid.size());
  Eigen::VectorXd origin = Eigen::VectorXd::Zero(spec.ambient_dim());
  for (const auto& p : grid) {
    images.push_back(evaluate(spec, p));
    origin += images.back();
  }
  origin /= static_cast<double>(images.size());
  double radius = 0.0;
  for (const auto& v : images) radius = std::max(radius, (v - origin).norm());
  return {origin, radius > 0.0 ? 4.0 * radius : 1.0};
}

Eigen::MatrixXd orthogonal_complement(const Eigen::VectorXd& a) {
  const Eigen::Index n = a.size();
  // H = I - 2 v v^T / |v|^2 with v = a - e_N maps a to e_N; its first N-1
  // columns span the complement of a.
  Eigen::VectorXd v = a;
  v[n - 1] -= 1.0;
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
  const double vv = v.squaredNorm();
  if (vv > 1e-30) h -= (2.0 / vv) * v * v.transpose();
  return h.leftCols(n - 1);
}

std::pair<EmbeddingSpec, ProjectionStep> project_step(const EmbeddingSpec& spec, const Eigen::VectorXd& unit_center,
                                                      const ProjectOptions& options) {
  const int n_in = spec.ambient_dim();
  if (unit_center.size() != n_in) throw Error(ErrorKind::DimensionMismatch, "projection center in the wrong ambient space");
  if (!unit_center.allFinite() || !(unit_center.norm() > 0.0)) throw Error(ErrorKind::InvalidParameter, "projection center must be a nonzero finite vector");
  if (options.budget < 1) throw Error(ErrorKind::InvalidParameter, "validation budget must be at least 1");

  ProjectionStep step;
  std::tie(step.origin, step.scale) = image_normalization(spec, options.grid_points);
  step.unit_center = unit_center.normalized();
  step.center = step.origin + step.scale * step.unit_center;
  step.target_hyperplane.normal = step.unit_center;
  step.target_hyperplane.offset = -step.unit_center.dot(step.origin);
  step.input_dim = n_in;
  step.output_dim = n_in - 1;

  EmbeddingSpec projected =
      projected_map(spec, step.origin, step.scale, step.unit_center, orthogonal_complement(step.unit_center));
  for (const auto& p : parameter_grid(spec.domain(), options.grid_points)) evaluate(projected, p);

  SampleOptions sample;
  sample.num_samples = options.budget;
  sample.delta_min = options.delta_min;
  sample.seed = options.seed;
  sample.tol = options.tol;
  sample.threads = options.threads;
  step.validation = sample_verify(projected, options.k, options.l, sample);
  const auto& v = step.validation;
  if (v.violations > 0 || !(v.best_margin > options.tol * v.best_scale)) {
    std::ostringstream msg;
    msg << "validation margin " << v.best_margin << " (scale " << v.best_scale << ", " << v.violations << " rank-deficient samples)";
    throw Error(ErrorKind::StepRejected, msg.str());
  }
  if (options.search_restarts > 0) {
    SearchOptions search;
    search.restarts = options.search_restarts;
    search.iters = options.search_iters;
    search.delta_min = options.search_delta_min;
    search.seed = options.seed;
    search.tol = options.tol;
    search.threads = options.threads;
    step.search_check = adversarial_search(projected, options.k, options.l, search);
    if (step.search_check->converged) {
      std::ostringstream msg;
      msg << "adversarial search found margin " << step.search_check->best_margin << " (scale " << step.search_check->best_scale << ")";
      throw Error(ErrorKind::StepRejected, msg.str());
    }
  }
  return {std::move(projected), std::move(step)};
}

ReductionPlan reduce_dimension(const EmbeddingSpec& spec, int k, int l, int target_dim, const ReduceOptions& options) {
  const int n = spec.domain().dim();
  const int floor_dim = upper_bound_main(n, k, l);
  if (target_dim < floor_dim) {
    throw Error(ErrorKind::InvalidParameter,
                "target dimension " + std::to_string(target_dim) + " is below the generic floor " + std::to_string(floor_dim));
  }
  if (options.budget < 1) throw Error(ErrorKind::InvalidParameter, "validation budget must be at least 1");
  if (options.max_retries < 1) throw Error(ErrorKind::InvalidParameter, "max_retries must be at least 1");

  ReductionPlan plan{{}, spec, spec, k, l, spec.ambient_dim(), target_dim, spec.ambient_dim(), options.budget, {}};
  for (std::uint64_t s = 0; plan.spec.ambient_dim() > target_dim; ++s) {
    std::string last_error;
    bool accepted = false;
    for (int attempt = 0; attempt < options.max_retries && !accepted; ++attempt) {
      auto rng = stream_rng(options.seed, (s << 32) | static_cast<std::uint64_t>(attempt));
      std::normal_distribution<double> gauss;
      Eigen::VectorXd a(plan.spec.ambient_dim());
      for (Eigen::Index i = 0; i < a.size(); ++i) a[i] = gauss(rng);
      if (!(a.norm() > 0.0)) continue;
      ProjectOptions po;
      po.k = k;
      po.l = l;
      po.seed = rng();
      po.budget = options.budget;
      po.tol = options.tol;
      po.delta_min = options.delta_min;
      po.search_restarts = options.search_restarts;
      po.search_iters = options.search_iters;
      po.threads = options.threads;
      try {
        auto [next, step] = project_step(plan.spec, a.normalized(), po);
        plan.spec = std::move(next);
        plan.steps.push_back(std::move(step));
        plan.attempts.push_back(attempt + 1);
        accepted = true;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::StepRejected && e.kind() != ErrorKind::ProjectionSingularity) throw;
        last_error = e.what();
      }
    }
    if (!accepted) {
      throw Error(ErrorKind::ReductionFailed, "step " + std::to_string(s) + " from dimension " + std::to_string(plan.spec.ambient_dim()) +
                                                  " failed after " + std::to_string(options.max_retries) + " centers; last: " + last_error);
    }
  }
  plan.final_dim = plan.spec.ambient_dim();
  return plan;
}

}  // namespace regemb
