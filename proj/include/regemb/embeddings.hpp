#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "regemb/rational.hpp"

namespace regemb {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Parameter domain of a map. Coordinates of a product chart are the left
// coordinates followed by the right ones. Circle coordinates are angles kept
// in [0, 2pi) and compared with the arc metric.
class DomainChart {
 public:
  enum class Kind { real_line, circle, real_plane, product };

  static DomainChart real_line(double lower = -1.0, double upper = 1.0);
  static DomainChart circle();
  static DomainChart real_plane(double lower = -1.0, double upper = 1.0);
  static DomainChart product(const DomainChart& left, const DomainChart& right);
  // Flat chart of any dimension; 1 and 2 give real_line / real_plane, higher
  // dimensions are products of those.
  static DomainChart euclidean(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper);

  Kind kind() const { return kind_; }
  int dim() const { return static_cast<int>(periodic_.size()); }
  const DomainChart& left() const { return *left_; }
  const DomainChart& right() const { return *right_; }

  bool periodic(int coordinate) const { return periodic_[static_cast<size_t>(coordinate)]; }
  // Sampling box; for periodic coordinates always [0, 2pi).
  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }

  // Same chart with every non-periodic coordinate boxed to [lower, upper].
  DomainChart with_box(double lower, double upper) const;

  Eigen::VectorXd normalize(const Eigen::VectorXd& p) const;
  double distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
  bool contains(const Eigen::VectorXd& p) const;

  std::string describe() const;

 private:
  DomainChart() = default;

  Kind kind_ = Kind::real_line;
  std::vector<bool> periodic_;
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
  std::shared_ptr<const DomainChart> left_;
  std::shared_ptr<const DomainChart> right_;
};

// Rectangular grid of samples of a map R^n -> R^N.
struct SampledTable {
  std::vector<std::vector<double>> axes;  // sorted grid values per parameter
  // values.row(i) is the sample at the multi-index with the last axis varying
  // fastest.
  Eigen::MatrixXd values;

  int param_dim() const { return static_cast<int>(axes.size()); }
  int ambient_dim() const { return static_cast<int>(values.cols()); }
};

// Reads `param_1..param_n, out_1..out_N` CSV; rows may come in any order but
// must cover a full rectangular grid exactly once.
SampledTable load_sampled_table(const std::string& path);
SampledTable parse_sampled_table(const std::string& csv_text);

class EmbeddingSpec;

struct Jet {
  Eigen::VectorXd value;
  std::vector<Eigen::VectorXd> directional_derivatives;
};

struct RationalJet {
  RationalVector value;
  std::vector<RationalVector> directional_derivatives;
};

class EmbeddingSpec {
 public:
  enum class Kind { moment, trig, complex_moment, tensor, sampled, affine, projected };

  struct MomentCurve {
    int degree;
  };
  struct TrigCurve {
    int harmonics;
  };
  struct ComplexMomentCurve {
    int degree;
  };
  struct Tensor {
    std::shared_ptr<const EmbeddingSpec> left;
    std::shared_ptr<const EmbeddingSpec> right;
  };
  struct Sampled {
    std::shared_ptr<const SampledTable> table;
    double fd_step;
  };
  // x -> matrix * f(x) + offset
  struct Affine {
    std::shared_ptr<const EmbeddingSpec> base;
    Eigen::MatrixXd matrix;
    Eigen::VectorXd offset;
  };
  // Central projection of the normalized image y = (f(x) - origin) / scale
  // from the unit vector `center` onto the hyperplane <z, center> = 0,
  // expressed in the orthonormal `basis` (N x N-1) of that hyperplane.
  struct Projected {
    std::shared_ptr<const EmbeddingSpec> base;
    Eigen::VectorXd origin;
    double scale;
    Eigen::VectorXd center;
    Eigen::MatrixXd basis;
  };
  using Payload = std::variant<MomentCurve, TrigCurve, ComplexMomentCurve, Tensor, Sampled, Affine, Projected>;

  Kind kind() const;
  int ambient_dim() const { return ambient_dim_; }
  const DomainChart& domain() const { return domain_; }
  const Payload& payload() const { return payload_; }

  // Polynomial maps with rational coefficients can be evaluated exactly.
  bool supports_exact() const;

  // Same map with the non-periodic parameter box replaced.
  EmbeddingSpec with_box(double lower, double upper) const;

  std::string describe() const;

 private:
  friend EmbeddingSpec moment_curve(int);
  friend EmbeddingSpec trig_curve(int);
  friend EmbeddingSpec complex_moment_curve(int);
  friend EmbeddingSpec tensor_product(const EmbeddingSpec&, const EmbeddingSpec&);
  friend EmbeddingSpec sampled_map(SampledTable, double);
  friend EmbeddingSpec affine_image(const EmbeddingSpec&, const Eigen::MatrixXd&, const Eigen::VectorXd&);
  friend EmbeddingSpec projected_map(const EmbeddingSpec&, const Eigen::VectorXd&, double, const Eigen::VectorXd&,
                                     const Eigen::MatrixXd&);

  EmbeddingSpec(Payload payload, int ambient_dim, DomainChart domain)
      : payload_(std::move(payload)), ambient_dim_(ambient_dim), domain_(std::move(domain)) {}

  Payload payload_;
  int ambient_dim_;
  DomainChart domain_;
};

// t -> (t, t^2, ..., t^m) on the real line, box [-1, 1].
EmbeddingSpec moment_curve(int m);
// a -> (cos a, sin a, ..., cos h a, sin h a) on the circle.
EmbeddingSpec trig_curve(int h);
// z -> (z, z^2, ..., z^m) on R^2 = C, each complex coordinate stored as
// (real, imaginary).
EmbeddingSpec complex_moment_curve(int m);
// (x, y) -> (f(x) (x) g(y), f(x), g(y)); the outer product is flattened
// row-major, i.e. entry (i, j) sits at i * N_g + j.
EmbeddingSpec tensor_product(const EmbeddingSpec& f, const EmbeddingSpec& g);
EmbeddingSpec sampled_map(SampledTable table, double fd_step = 1e-5);
EmbeddingSpec affine_image(const EmbeddingSpec& base, const Eigen::MatrixXd& matrix, const Eigen::VectorXd& offset);
EmbeddingSpec projected_map(const EmbeddingSpec& base, const Eigen::VectorXd& origin, double scale,
                            const Eigen::VectorXd& center, const Eigen::MatrixXd& basis);

// First `count` coordinates of `base`.
EmbeddingSpec truncate(const EmbeddingSpec& base, int count);
// `base` followed by `extra` zero coordinates.
EmbeddingSpec zero_pad(const EmbeddingSpec& base, int extra);

Jet evaluate_jet(const EmbeddingSpec& spec, const Eigen::VectorXd& point, const std::vector<Eigen::VectorXd>& directions);
// Requires spec.supports_exact(); throws InvalidParameter otherwise.
RationalJet evaluate_jet_exact(const EmbeddingSpec& spec, const RationalVector& point,
                               const std::vector<RationalVector>& directions);

Eigen::VectorXd evaluate(const EmbeddingSpec& spec, const Eigen::VectorXd& point);

// Second derivative along a chart direction (analytic for curves and their
// affine images, central differences otherwise).
Eigen::VectorXd second_derivative(const EmbeddingSpec& spec, const Eigen::VectorXd& point, const Eigen::VectorXd& direction);

// Parses map descriptors such as "moment:3", "trig:2", "cmoment:2",
// "tensor:moment:2,moment:2", "tensor:(tensor:moment:1,moment:1),moment:1",
// "trunc:3:trig:2", "pad:1:moment:2" and "sampled:path.csv".
EmbeddingSpec parse_map(const std::string& descriptor);

}  // namespace regemb
