#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "regemb/configuration.hpp"
#include "regemb/embeddings.hpp"
#include "regemb/lift.hpp"
#include "regemb/rational.hpp"

namespace regemb {

// {x : <normal, x> + offset = 0}
struct Hyperplane {
  Eigen::VectorXd normal;
  double offset = 0.0;
};

// Affine flat given by the common zero set of `covectors`; each column is a
// lifted covector (normal, offset). No columns means the whole ambient space.
struct Flat {
  int dimension = 0;
  Eigen::MatrixXd covectors;
};

struct RegularityVerdict {
  bool regular = false;
  RankReport rank_report;
  Configuration configuration;
  // Present when the configuration is not regular and its lifted vectors do
  // not span R^{N+1}: a hyperplane through every through point that contains
  // every tangent direction.
  std::optional<Hyperplane> hyperplane_witness;
};

// Single directions per tangency point (a tangency line each).
RegularityVerdict check_configuration(const EmbeddingSpec& spec, const Configuration& config, double tol = kDefaultRankTolerance,
                                      double delta_min = kDefaultDeltaMin);
// Exact decision when spec.supports_exact(); numeric on the converted
// configuration otherwise.
RegularityVerdict check_configuration(const EmbeddingSpec& spec, const RationalConfiguration& config,
                                      double tol = kDefaultRankTolerance, double delta_min = kDefaultDeltaMin);

// Tangent subspaces spanned by orthonormal direction lists.
RegularityVerdict check_subspace_configuration(const EmbeddingSpec& spec, const Configuration& config,
                                               double tol = kDefaultRankTolerance, double delta_min = kDefaultDeltaMin);
RegularityVerdict check_subspace_configuration(const EmbeddingSpec& spec, const RationalConfiguration& config,
                                               double tol = kDefaultRankTolerance, double delta_min = kDefaultDeltaMin);

LiftedMatrix lifted_matrix(const EmbeddingSpec& spec, const Configuration& config);
RationalLiftedMatrix lifted_matrix(const EmbeddingSpec& spec, const RationalConfiguration& config);

// Largest violating flat: dimension k + sum(n_i + 1) - 2 (k + (n+1) l - 2 for
// full tangent spaces), containing every through point and the tangent data
// at every tangency point. Nothing when the lifted matrix has full column rank.
std::optional<Flat> find_violating_hyperplane(const EmbeddingSpec& spec, const Configuration& config,
                                              double tol = kDefaultRankTolerance);

// Residuals of the incidence conditions, relative to the size of the data.
struct IncidenceResiduals {
  double through = 0.0;    // max |<n, f(x)> + c| / (|n| |f(x)| + |c|)
  double tangency = 0.0;   // same for tangency points
  double direction = 0.0;  // max |<n, df(u)>| / (|n| |df(u)|)
  double max() const { return std::max({through, tangency, direction}); }
};
IncidenceResiduals incidence_residuals(const EmbeddingSpec& spec, const Configuration& config, const Hyperplane& h);

struct VandermondeCertificate {
  Rational determinant;
  Rational product_formula;  // prod_{i<j} |t_i - t_j|^(mu_i mu_j)
  int dimension = 0;         // k + 2l
};

// Exact determinant of the lifted moment-curve matrix in R^{k+2l-1} at simple
// nodes (point columns) and double nodes (point column then derivative
// column). Throws DistinctnessViolation on coincident nodes.
VandermondeCertificate confluent_vandermonde_certificate(const std::vector<Rational>& simple_nodes,
                                                         const std::vector<Rational>& double_nodes);

struct ProbeResult {
  std::vector<double> offsets;
  std::vector<double> values;
  std::vector<int> signs;
  bool one_sided = false;
};

// Samples <n, f(t0 + s u)> + c for s = +-radius*j/steps, j = 1..steps, near a
// tangency of a curve. Throws NotATangency when the hyperplane does not
// contain the point and its tangent, DegenerateCurvature when it contains the
// second derivative as well.
ProbeResult tangency_crossing_probe(const EmbeddingSpec& spec, double point, double direction, const Hyperplane& h, int steps = 8,
                                    double radius = 1e-3);

}  // namespace regemb
