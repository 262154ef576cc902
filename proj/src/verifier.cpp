#include "regemb/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/SVD>

#include "regemb/error.hpp"

namespace regemb {

LiftedMatrix lifted_matrix(const EmbeddingSpec& spec, const Configuration& config) {
  std::vector<Eigen::VectorXd> points, tangency;
  std::vector<std::vector<Eigen::VectorXd>> dirs;
  for (const auto& x : config.through_points) points.push_back(evaluate(spec, x));
  for (int j = 0; j < config.l(); ++j) {
    Jet jet = evaluate_jet(spec, config.tangency_points[static_cast<size_t>(j)], config.directions[static_cast<size_t>(j)]);
    tangency.push_back(std::move(jet.value));
    dirs.push_back(std::move(jet.directional_derivatives));
  }
  return assemble_lifted_matrix(points, tangency, dirs);
}

RationalLiftedMatrix lifted_matrix(const EmbeddingSpec& spec, const RationalConfiguration& config) {
  std::vector<RationalVector> points, tangency;
  std::vector<std::vector<RationalVector>> dirs;
  for (const auto& x : config.through_points) points.push_back(evaluate_jet_exact(spec, x, {}).value);
  for (int j = 0; j < config.l(); ++j) {
    RationalJet jet = evaluate_jet_exact(spec, config.tangency_points[static_cast<size_t>(j)], config.directions[static_cast<size_t>(j)]);
    tangency.push_back(std::move(jet.value));
    dirs.push_back(std::move(jet.directional_derivatives));
  }
  return assemble_lifted_matrix(points, tangency, dirs);
}

namespace {

void require_single_directions(const Configuration& config) {
  for (const auto& group : config.directions) {
    if (group.size() != 1) {
      throw Error(ErrorKind::InvalidParameter, "tangency lines need exactly one direction; use the subspace check for subspaces");
    }
  }
}

// Left singular vector for the smallest singular value, as a hyperplane.
std::optional<Hyperplane> witness_from(const Eigen::MatrixXd& columns, int rank) {
  const auto rows = columns.rows();
  if (rank >= rows) return std::nullopt;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(columns, Eigen::ComputeFullU);
  Eigen::VectorXd covector = svd.matrixU().col(rows - 1);
  Hyperplane h;
  h.normal = covector.head(rows - 1);
  const double norm = h.normal.norm();
  if (!(norm > 1e-300)) return std::nullopt;
  h.normal /= norm;
  h.offset = covector[rows - 1] / norm;
  return h;
}

RegularityVerdict numeric_verdict(const EmbeddingSpec& spec, const Configuration& config, double tol) {
  RegularityVerdict v;
  LiftedMatrix m = lifted_matrix(spec, config);
  v.rank_report = rank_and_margin(m, tol);
  v.regular = v.rank_report.full_column_rank();
  v.configuration = config;
  if (!v.regular) v.hyperplane_witness = witness_from(m.columns, v.rank_report.rank);
  return v;
}

RegularityVerdict exact_verdict(const EmbeddingSpec& spec, const RationalConfiguration& config, double tol) {
  RegularityVerdict v;
  v.configuration = config.to_double();
  RationalLiftedMatrix m = lifted_matrix(spec, config);
  v.rank_report = exact_rank(m);
  v.rank_report.tolerance = tol;
  v.regular = v.rank_report.full_column_rank();
  if (!v.regular) v.hyperplane_witness = witness_from(m.columns.to_double(), v.rank_report.rank);
  return v;
}

}  // namespace

RegularityVerdict check_configuration(const EmbeddingSpec& spec, const Configuration& config, double tol, double delta_min) {
  validate_configuration(spec.domain(), config, delta_min);
  require_single_directions(config);
  return numeric_verdict(spec, config, tol);
}

RegularityVerdict check_configuration(const EmbeddingSpec& spec, const RationalConfiguration& config, double tol, double delta_min) {
  const Configuration approx = config.to_double();
  validate_configuration(spec.domain(), approx, delta_min);
  require_single_directions(approx);
  return spec.supports_exact() ? exact_verdict(spec, config, tol) : numeric_verdict(spec, approx, tol);
}

RegularityVerdict check_subspace_configuration(const EmbeddingSpec& spec, const Configuration& config, double tol, double delta_min) {
  validate_configuration(spec.domain(), config, delta_min);
  return numeric_verdict(spec, config, tol);
}

RegularityVerdict check_subspace_configuration(const EmbeddingSpec& spec, const RationalConfiguration& config, double tol,
                                               double delta_min) {
  const Configuration approx = config.to_double();
  validate_configuration(spec.domain(), approx, delta_min);
  return spec.supports_exact() ? exact_verdict(spec, config, tol) : numeric_verdict(spec, approx, tol);
}

std::optional<Flat> find_violating_hyperplane(const EmbeddingSpec& spec, const Configuration& config, double tol) {
  validate_configuration(spec.domain(), config, 0.0);
  LiftedMatrix m = lifted_matrix(spec, config);
  RankReport report = rank_and_margin(m, tol);
  if (report.full_column_rank()) return std::nullopt;

  const int rows = m.rows();
  const int ambient = rows - 1;
  Flat flat;
  const int wanted = m.cols() - 2;  // k + sum(n_i + 1) - 2
  if (wanted >= ambient) {
    flat.dimension = ambient;
    flat.covectors.resize(rows, 0);
    return flat;
  }
  flat.dimension = wanted;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m.columns, Eigen::ComputeFullU);
  // The first wanted+1 left singular vectors contain the column space because
  // rank <= cols - 1 = wanted + 1; the rest annihilate it.
  flat.covectors = svd.matrixU().rightCols(rows - (wanted + 1));
  return flat;
}

IncidenceResiduals incidence_residuals(const EmbeddingSpec& spec, const Configuration& config, const Hyperplane& h) {
  IncidenceResiduals r;
  const double nn = h.normal.norm();
  auto point_residual = [&](const Eigen::VectorXd& fx) {
    return std::abs(h.normal.dot(fx) + h.offset) / (nn * fx.norm() + std::abs(h.offset) + 1e-300);
  };
  for (const auto& x : config.through_points) r.through = std::max(r.through, point_residual(evaluate(spec, x)));
  for (int j = 0; j < config.l(); ++j) {
    Jet jet = evaluate_jet(spec, config.tangency_points[static_cast<size_t>(j)], config.directions[static_cast<size_t>(j)]);
    r.tangency = std::max(r.tangency, point_residual(jet.value));
    for (const auto& d : jet.directional_derivatives) {
      r.direction = std::max(r.direction, std::abs(h.normal.dot(d)) / (nn * d.norm() + 1e-300));
    }
  }
  return r;
}

VandermondeCertificate confluent_vandermonde_certificate(const std::vector<Rational>& simple_nodes,
                                                         const std::vector<Rational>& double_nodes) {
  const int k = static_cast<int>(simple_nodes.size());
  const int l = static_cast<int>(double_nodes.size());
  if (k + l == 0) throw Error(ErrorKind::EmptyConfiguration, "no nodes");
  std::vector<std::pair<Rational, int>> nodes;  // (value, multiplicity)
  for (const auto& t : simple_nodes) nodes.emplace_back(t, 1);
  for (const auto& s : double_nodes) nodes.emplace_back(s, 2);
  for (size_t i = 0; i < nodes.size(); ++i) {
    for (size_t j = i + 1; j < nodes.size(); ++j) {
      if (nodes[i].first == nodes[j].first) throw Error(ErrorKind::DistinctnessViolation, "coincident nodes " + to_string(nodes[i].first));
    }
  }

  const int m = k + 2 * l - 1;
  const int size = m + 1;
  RationalMatrix a(size, size);
  int col = 0;
  auto point_column = [&](const Rational& t) {
    Rational power = 1;
    for (int i = 0; i < m; ++i) {
      power *= t;
      a(i, col) = power;
    }
    a(m, col) = 1;
    ++col;
  };
  for (const auto& t : simple_nodes) point_column(t);
  for (const auto& s : double_nodes) {
    point_column(s);
    Rational power = 1;  // s^(i-1)
    for (int i = 1; i <= m; ++i) {
      a(i - 1, col) = i * power;
      power *= s;
    }
    a(m, col) = 0;
    ++col;
  }

  VandermondeCertificate cert;
  cert.dimension = size;
  cert.determinant = exact_determinant(a);
  cert.product_formula = 1;
  for (size_t i = 0; i < nodes.size(); ++i) {
    for (size_t j = i + 1; j < nodes.size(); ++j) {
      const Rational d = abs(nodes[i].first - nodes[j].first);
      for (int e = 0; e < nodes[i].second * nodes[j].second; ++e) cert.product_formula *= d;
    }
  }
  if (abs(cert.determinant) != cert.product_formula) {
    throw std::logic_error("confluent Vandermonde determinant " + to_string(cert.determinant) + " disagrees with product formula " +
                           to_string(cert.product_formula));
  }
  return cert;
}

ProbeResult tangency_crossing_probe(const EmbeddingSpec& spec, double point, double direction, const Hyperplane& h, int steps,
                                    double radius) {
  if (spec.domain().dim() != 1) throw Error(ErrorKind::InvalidParameter, "crossing probe needs a curve");
  if (steps < 1 || !(radius > 0.0)) throw Error(ErrorKind::InvalidParameter, "need steps >= 1 and radius > 0");
  if (h.normal.size() != spec.ambient_dim()) throw Error(ErrorKind::DimensionMismatch, "hyperplane in the wrong ambient space");
  const double nn = h.normal.norm();
  if (!(nn > 0.0)) throw Error(ErrorKind::InvalidParameter, "zero hyperplane normal");

  const Eigen::VectorXd t0 = Eigen::VectorXd::Constant(1, point);
  const Eigen::VectorXd u = Eigen::VectorXd::Constant(1, direction);
  Jet jet = evaluate_jet(spec, t0, {u});
  const Eigen::VectorXd& d1 = jet.directional_derivatives[0];
  const Eigen::VectorXd d2 = second_derivative(spec, t0, u);

  constexpr double kRel = 1e-8;
  if (std::abs(h.normal.dot(jet.value) + h.offset) > kRel * (nn * std::max(1.0, jet.value.norm()) + std::abs(h.offset))) {
    throw Error(ErrorKind::NotATangency, "hyperplane does not pass through the curve point");
  }
  if (std::abs(h.normal.dot(d1)) > kRel * nn * d1.norm()) throw Error(ErrorKind::NotATangency, "hyperplane is not tangent to the curve");
  if (d2.norm() == 0.0 || std::abs(h.normal.dot(d2)) <= kRel * nn * d2.norm()) {
    throw Error(ErrorKind::DegenerateCurvature, "hyperplane contains the second derivative");
  }

  ProbeResult result;
  for (int side : {-1, 1}) {
    for (int j = 1; j <= steps; ++j) {
      const double s = side * radius * j / steps;
      const double value = h.normal.dot(evaluate(spec, t0 + s * u)) + h.offset;
      result.offsets.push_back(s);
      result.values.push_back(value);
      result.signs.push_back(value > 0.0 ? 1 : (value < 0.0 ? -1 : 0));
    }
  }
  const int first = result.signs.front();
  result.one_sided = first != 0 && std::all_of(result.signs.begin(), result.signs.end(), [&](int s) { return s == first; });
  return result;
}

}  // namespace regemb
