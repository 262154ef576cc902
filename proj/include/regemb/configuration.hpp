#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "regemb/embeddings.hpp"
#include "regemb/rational.hpp"

namespace regemb {

inline constexpr double kDefaultDeltaMin = 1e-6;

// k through points and l tangency points on a chart. Each tangency point
// carries either one direction or a basis of a tangent subspace.
struct Configuration {
  std::vector<Eigen::VectorXd> through_points;
  std::vector<Eigen::VectorXd> tangency_points;
  std::vector<std::vector<Eigen::VectorXd>> directions;

  int k() const { return static_cast<int>(through_points.size()); }
  int l() const { return static_cast<int>(tangency_points.size()); }
  // k + l + sum of subspace dimensions
  int column_count() const;
};

struct RationalConfiguration {
  std::vector<RationalVector> through_points;
  std::vector<RationalVector> tangency_points;
  std::vector<std::vector<RationalVector>> directions;

  int k() const { return static_cast<int>(through_points.size()); }
  int l() const { return static_cast<int>(tangency_points.size()); }
  Configuration to_double() const;
};

// Throws EmptyConfiguration, DimensionMismatch, InvalidParameter (a direction
// set that is dependent or larger than the chart dimension) or
// DistinctnessViolation (two points closer than delta_min in the chart metric).
void validate_configuration(const DomainChart& chart, const Configuration& config, double delta_min = kDefaultDeltaMin);

enum class TangentMode {
  single_direction,  // one random unit direction per tangency point
  full_space,        // orthonormal basis of the whole tangent space
};

// Deterministic per-stream generator: the stream for (seed, index) does not
// depend on how many other streams exist or the order they are consumed in.
std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t index);

// Throws InvalidParameter when k + l points cannot be placed delta_min apart.
Configuration random_configuration(const DomainChart& chart, int k, int l, double delta_min, TangentMode mode, std::mt19937_64& rng);

// Uniform draw from a rational grid of the chart box with `denominator`
// steps per unit; used to produce exactly representable test configurations.
RationalConfiguration random_rational_configuration(const DomainChart& chart, int k, int l, double delta_min, TangentMode mode,
                                                    long denominator, std::mt19937_64& rng);

// Configuration CSV: rows "role, p_1..p_n[, u_1..u_n]" with role x (through)
// or y (tangency). Consecutive y rows with the same point form a subspace.
// Entries are exact rationals ("p/q" or decimals). An optional header row
// starting with "role" is skipped.
RationalConfiguration parse_configuration_csv(const std::string& text, int chart_dim);
RationalConfiguration load_configuration_csv(const std::string& path, int chart_dim);

}  // namespace regemb
