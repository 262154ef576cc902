#pragma once

#include <cstdint>
#include <optional>

#include "regemb/configuration.hpp"
#include "regemb/embeddings.hpp"
#include "regemb/lift.hpp"

namespace regemb {

struct SearchReport {
  double best_margin = 0.0;
  double best_scale = 1.0;  // largest singular value at the best configuration
  Configuration best_configuration;
  long long iterations_used = 0;
  long long evaluations = 0;
  int restarts = 0;
  long long samples = 0;
  // Configurations whose lifted matrix is rank deficient at the tolerance.
  long long violations = 0;
  std::uint64_t seed = 0;
  // For adversarial_search: a configuration with margin below tol * scale
  // was found.
  bool converged = false;
};

struct SampleOptions {
  long long num_samples = 1000;
  double delta_min = 1e-3;
  std::uint64_t seed = 0;
  double tol = kDefaultRankTolerance;
  TangentMode tangent_mode = TangentMode::single_direction;
  // 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

// Draws num_samples configurations uniformly from the chart box and records
// the minimum margin. Sample i uses stream_rng(seed, i), so the report does
// not depend on the thread count.
SearchReport sample_verify(const EmbeddingSpec& spec, int k, int l, const SampleOptions& options);

struct SearchOptions {
  int restarts = 10;
  int iters = 1000;
  double delta_min = 1e-2;
  // Half-width of the box for non-periodic chart coordinates; unset keeps the
  // spec's own box.
  std::optional<double> box;
  std::uint64_t seed = 0;
  double tol = kDefaultRankTolerance;
  // Stop a restart when the margin improved by less than this fraction over
  // stall_window iterations.
  double stall_improvement = 1e-12;
  int stall_window = 50;
  unsigned threads = 0;
};

// Minimizes the margin over configuration space with coordinate-wise
// trust-region descent from seeded random restarts. Points stay delta_min
// apart (moves that violate it are rejected); directions are renormalized.
SearchReport adversarial_search(const EmbeddingSpec& spec, int k, int l, const SearchOptions& options);

// Margin of a configuration, recomputed from scratch.
RankReport configuration_margin(const EmbeddingSpec& spec, const Configuration& config, double tol = kDefaultRankTolerance);

}  // namespace regemb
