#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "regemb/embeddings.hpp"
#include "regemb/search.hpp"
#include "regemb/verifier.hpp"

namespace regemb {

// k(n+1) + l(2n+1) - 1: dimension of the union of the affine spans of k
// points and l tangent spaces, over all configurations.
int span_union_dimension(int n, int k, int l);

struct ProjectOptions {
  int k = 1;
  int l = 1;
  std::uint64_t seed = 0;
  long long budget = 10000;  // samples for the validation run
  double tol = kDefaultRankTolerance;
  double delta_min = 1e-3;
  // Short adversarial search run after sampling; 0 restarts skips it.
  int search_restarts = 4;
  int search_iters = 100;
  double search_delta_min = 1e-2;
  int grid_points = 4096;  // normalization grid size (total)
  unsigned threads = 0;
};

struct ProjectionStep {
  // Normalized coordinates: y = (z - origin) / scale keeps the sampled image
  // inside the ball of radius 1/4; the center is the unit vector
  // unit_center and the image lands on <y, unit_center> = 0.
  Eigen::VectorXd origin;
  double scale = 1.0;
  Eigen::VectorXd unit_center;
  // The same data in the input coordinates.
  Eigen::VectorXd center;
  Hyperplane target_hyperplane;
  int input_dim = 0;
  int output_dim = 0;
  SearchReport validation;
  std::optional<SearchReport> search_check;
};

// Origin and scale of the normalization for `spec` (centroid and 4x the
// largest distance from it over a grid of the parameter box).
std::pair<Eigen::VectorXd, double> image_normalization(const EmbeddingSpec& spec, int grid_points = 4096);

// Orthonormal N x (N-1) basis of the hyperplane orthogonal to the unit vector
// a, from the Householder reflection taking a to e_N.
Eigen::MatrixXd orthogonal_complement(const Eigen::VectorXd& a);

// Projects centrally from `unit_center` (normalized coordinates, renormalized
// to unit length) and validates (k, l)-regularity of the result. Throws
// StepRejected when validation finds a margin at or below tol * scale, and
// ProjectionSingularity when a grid point is sent to infinity.
std::pair<EmbeddingSpec, ProjectionStep> project_step(const EmbeddingSpec& spec, const Eigen::VectorXd& unit_center,
                                                      const ProjectOptions& options);

struct ReduceOptions {
  int max_retries = 32;
  std::uint64_t seed = 0;
  long long budget = 10000;
  double tol = kDefaultRankTolerance;
  double delta_min = 1e-3;
  int search_restarts = 4;
  int search_iters = 100;
  unsigned threads = 0;
};

struct ReductionPlan {
  std::vector<ProjectionStep> steps;
  EmbeddingSpec start_spec;
  EmbeddingSpec spec;  // final map
  int k = 0;
  int l = 0;
  int start_dim = 0;
  int target_dim = 0;
  int final_dim = 0;
  long long budget = 0;
  // Attempts per step, rejected ones included.
  std::vector<int> attempts;
};

// Projects from uniformly random centers until target_dim is reached. Throws
// InvalidParameter when target_dim is below (n+1)k + (2n+1)l - 1 or the
// budget is below 1, ReductionFailed when a step exhausts its retries.
ReductionPlan reduce_dimension(const EmbeddingSpec& spec, int k, int l, int target_dim, const ReduceOptions& options);

}  // namespace regemb
