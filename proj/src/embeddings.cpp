#include "regemb/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <map>
#include <sstream>

#include "regemb/error.hpp"

namespace regemb {

// ---------------------------------------------------------------------------
// DomainChart

DomainChart DomainChart::real_line(double lower, double upper) {
  if (!(lower < upper)) throw Error(ErrorKind::InvalidParameter, "empty parameter box");
  DomainChart c;
  c.kind_ = Kind::real_line;
  c.periodic_ = {false};
  c.lower_ = Eigen::VectorXd::Constant(1, lower);
  c.upper_ = Eigen::VectorXd::Constant(1, upper);
  return c;
}

DomainChart DomainChart::circle() {
  DomainChart c;
  c.kind_ = Kind::circle;
  c.periodic_ = {true};
  c.lower_ = Eigen::VectorXd::Zero(1);
  c.upper_ = Eigen::VectorXd::Constant(1, kTwoPi);
  return c;
}

DomainChart DomainChart::real_plane(double lower, double upper) {
  if (!(lower < upper)) throw Error(ErrorKind::InvalidParameter, "empty parameter box");
  DomainChart c;
  c.kind_ = Kind::real_plane;
  c.periodic_ = {false, false};
  c.lower_ = Eigen::VectorXd::Constant(2, lower);
  c.upper_ = Eigen::VectorXd::Constant(2, upper);
  return c;
}

DomainChart DomainChart::product(const DomainChart& left, const DomainChart& right) {
  DomainChart c;
  c.kind_ = Kind::product;
  c.periodic_ = left.periodic_;
  c.periodic_.insert(c.periodic_.end(), right.periodic_.begin(), right.periodic_.end());
  c.lower_.resize(c.dim());
  c.upper_.resize(c.dim());
  c.lower_ << left.lower_, right.lower_;
  c.upper_ << left.upper_, right.upper_;
  c.left_ = std::make_shared<const DomainChart>(left);
  c.right_ = std::make_shared<const DomainChart>(right);
  return c;
}

DomainChart DomainChart::euclidean(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper) {
  const auto n = lower.size();
  if (n == 0 || upper.size() != n) throw Error(ErrorKind::InvalidParameter, "bad euclidean chart box");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(lower[i] <= upper[i])) throw Error(ErrorKind::InvalidParameter, "empty parameter box");
  }
  if (n == 1) {
    DomainChart c = real_line();
    c.lower_ = lower;
    c.upper_ = upper;
    return c;
  }
  if (n == 2) {
    DomainChart c = real_plane();
    c.lower_ = lower;
    c.upper_ = upper;
    return c;
  }
  return product(euclidean(lower.head(2), upper.head(2)), euclidean(lower.tail(n - 2), upper.tail(n - 2)));
}

DomainChart DomainChart::with_box(double lower, double upper) const {
  if (!(lower < upper)) throw Error(ErrorKind::InvalidParameter, "empty parameter box");
  DomainChart c = *this;
  for (int i = 0; i < dim(); ++i) {
    if (!periodic(i)) {
      c.lower_[i] = lower;
      c.upper_[i] = upper;
    }
  }
  if (left_) c.left_ = std::make_shared<const DomainChart>(left_->with_box(lower, upper));
  if (right_) c.right_ = std::make_shared<const DomainChart>(right_->with_box(lower, upper));
  return c;
}

Eigen::VectorXd DomainChart::normalize(const Eigen::VectorXd& p) const {
  Eigen::VectorXd out = p;
  for (int i = 0; i < dim(); ++i) {
    if (periodic(i)) {
      double a = std::fmod(out[i], kTwoPi);
      if (a < 0.0) a += kTwoPi;
      if (a >= kTwoPi) a = 0.0;
      out[i] = a;
    }
  }
  return out;
}

double DomainChart::distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  double sum = 0.0;
  for (int i = 0; i < dim(); ++i) {
    double d = std::abs(a[i] - b[i]);
    if (periodic(i)) {
      d = std::fmod(d, kTwoPi);
      d = std::min(d, kTwoPi - d);
    }
    sum += d * d;
  }
  return std::sqrt(sum);
}

bool DomainChart::contains(const Eigen::VectorXd& p) const {
  if (p.size() != dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    if (!std::isfinite(p[i])) return false;
    if (!periodic(i) && (p[i] < lower_[i] || p[i] > upper_[i])) return false;
  }
  return true;
}

std::string DomainChart::describe() const {
  switch (kind_) {
    case Kind::real_line: return "real_line";
    case Kind::circle: return "circle";
    case Kind::real_plane: return "real_plane";
    case Kind::product: return "product(" + left_->describe() + "," + right_->describe() + ")";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Sampled tables

SampledTable parse_sampled_table(const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::string line;
  int line_no = 0;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(s);
    while (std::getline(ls, cell, ',')) {
      cell.erase(0, cell.find_first_not_of(" \t\r"));
      cell.erase(cell.find_last_not_of(" \t\r") + 1);
      cells.push_back(cell);
    }
    return cells;
  };

  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    header = split(line);
    break;
  }
  if (header.empty()) throw Error(ErrorKind::InvalidInput, "sampled map CSV is empty");
  int n = 0;
  int big_n = 0;
  for (size_t i = 0; i < header.size(); ++i) {
    const std::string& h = header[i];
    if (h.rfind("param_", 0) == 0) {
      if (big_n > 0 || h != "param_" + std::to_string(n + 1)) {
        throw Error(ErrorKind::InvalidInput, "line 1: unexpected header column '" + h + "'");
      }
      ++n;
    } else if (h.rfind("out_", 0) == 0) {
      if (h != "out_" + std::to_string(big_n + 1)) throw Error(ErrorKind::InvalidInput, "line 1: unexpected header column '" + h + "'");
      ++big_n;
    } else {
      throw Error(ErrorKind::InvalidInput, "line 1: unexpected header column '" + h + "'");
    }
  }
  if (n == 0 || big_n == 0) throw Error(ErrorKind::InvalidInput, "line 1: need param_1.. and out_1.. columns");

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = split(line);
    if (static_cast<int>(cells.size()) != n + big_n) {
      throw Error(ErrorKind::InvalidInput, "line " + std::to_string(line_no) + ": expected " + std::to_string(n + big_n) +
                                               " fields, got " + std::to_string(cells.size()));
    }
    std::vector<double> row;
    for (const auto& cell : cells) {
      try {
        size_t used = 0;
        double v = std::stod(cell, &used);
        if (used != cell.size() || !std::isfinite(v)) throw std::invalid_argument(cell);
        row.push_back(v);
      } catch (const std::exception&) {
        throw Error(ErrorKind::InvalidInput, "line " + std::to_string(line_no) + ": bad number '" + cell + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::InvalidInput, "sampled map CSV has no samples");

  SampledTable table;
  table.axes.resize(static_cast<size_t>(n));
  for (int d = 0; d < n; ++d) {
    auto& axis = table.axes[static_cast<size_t>(d)];
    for (const auto& r : rows) axis.push_back(r[static_cast<size_t>(d)]);
    std::sort(axis.begin(), axis.end());
    axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
  }
  size_t expected = 1;
  for (const auto& axis : table.axes) expected *= axis.size();
  if (expected != rows.size()) {
    throw Error(ErrorKind::InvalidInput, "parameters do not form a rectangular grid: " + std::to_string(rows.size()) +
                                             " samples for a grid of " + std::to_string(expected));
  }
  table.values = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(expected), big_n, std::nan(""));
  std::vector<bool> seen(expected, false);
  for (const auto& r : rows) {
    size_t index = 0;
    for (int d = 0; d < n; ++d) {
      const auto& axis = table.axes[static_cast<size_t>(d)];
      auto pos = static_cast<size_t>(std::lower_bound(axis.begin(), axis.end(), r[static_cast<size_t>(d)]) - axis.begin());
      index = index * axis.size() + pos;
    }
    if (seen[index]) throw Error(ErrorKind::InvalidInput, "duplicate grid point in sampled map CSV");
    seen[index] = true;
    for (int j = 0; j < big_n; ++j) table.values(static_cast<Eigen::Index>(index), j) = r[static_cast<size_t>(n + j)];
  }
  return table;
}

SampledTable load_sampled_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open sampled map CSV '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_sampled_table(buffer.str());
}

namespace {

// Tensor-product cubic Hermite interpolation with finite-difference slopes;
// C1 across cells and exact at grid nodes.
class TableInterpolator {
 public:
  explicit TableInterpolator(const SampledTable& table) : table_(table) {
    strides_.assign(table.axes.size(), 1);
    for (int d = static_cast<int>(table.axes.size()) - 2; d >= 0; --d) {
      strides_[static_cast<size_t>(d)] = strides_[static_cast<size_t>(d) + 1] * table.axes[static_cast<size_t>(d) + 1].size();
    }
  }

  Eigen::VectorXd operator()(const Eigen::VectorXd& p) const { return eval(p, 0, 0); }

 private:
  Eigen::VectorXd eval(const Eigen::VectorXd& p, size_t axis_index, size_t offset) const {
    if (axis_index == table_.axes.size()) return table_.values.row(static_cast<Eigen::Index>(offset)).transpose();
    const auto& xs = table_.axes[axis_index];
    const size_t stride = strides_[axis_index];
    auto node = [&](size_t i) { return eval(p, axis_index + 1, offset + i * stride); };
    if (xs.size() == 1) return node(0);

    const double x = p[static_cast<Eigen::Index>(axis_index)];
    size_t i = static_cast<size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
    i = std::clamp<size_t>(i, 1, xs.size() - 1) - 1;  // cell [xs[i], xs[i+1]]
    const double h = xs[i + 1] - xs[i];
    const double s = (x - xs[i]) / h;

    Eigen::VectorXd y0 = node(i);
    Eigen::VectorXd y1 = node(i + 1);
    auto slope = [&](size_t j, const Eigen::VectorXd& yj) -> Eigen::VectorXd {
      if (j == 0) return (node(1) - yj) / (xs[1] - xs[0]);
      if (j == xs.size() - 1) return (yj - node(j - 1)) / (xs[j] - xs[j - 1]);
      return (node(j + 1) - node(j - 1)) / (xs[j + 1] - xs[j - 1]);
    };
    Eigen::VectorXd m0 = slope(i, y0);
    Eigen::VectorXd m1 = slope(i + 1, y1);
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * m0 + (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * m1;
  }

  const SampledTable& table_;
  std::vector<size_t> strides_;
};

int checked_dimension(int value, const char* what) {
  if (value < 1) throw Error(ErrorKind::InvalidParameter, std::string(what) + " must be at least 1");
  return value;
}

}  // namespace

// ---------------------------------------------------------------------------
// Constructors

EmbeddingSpec::Kind EmbeddingSpec::kind() const { return static_cast<Kind>(payload_.index()); }

EmbeddingSpec moment_curve(int m) {
  checked_dimension(m, "moment curve degree");
  return EmbeddingSpec(EmbeddingSpec::MomentCurve{m}, m, DomainChart::real_line());
}

EmbeddingSpec trig_curve(int h) {
  checked_dimension(h, "trigonometric curve harmonics");
  return EmbeddingSpec(EmbeddingSpec::TrigCurve{h}, 2 * h, DomainChart::circle());
}

EmbeddingSpec complex_moment_curve(int m) {
  checked_dimension(m, "complex moment curve degree");
  return EmbeddingSpec(EmbeddingSpec::ComplexMomentCurve{m}, 2 * m, DomainChart::real_plane());
}

EmbeddingSpec tensor_product(const EmbeddingSpec& f, const EmbeddingSpec& g) {
  const int nf = f.ambient_dim();
  const int ng = g.ambient_dim();
  return EmbeddingSpec(EmbeddingSpec::Tensor{std::make_shared<const EmbeddingSpec>(f), std::make_shared<const EmbeddingSpec>(g)},
                       nf * ng + nf + ng, DomainChart::product(f.domain(), g.domain()));
}

EmbeddingSpec sampled_map(SampledTable table, double fd_step) {
  if (table.axes.empty() || table.values.cols() == 0) throw Error(ErrorKind::InvalidInput, "empty sampled table");
  if (!(fd_step > 0.0)) throw Error(ErrorKind::InvalidParameter, "finite-difference step must be positive");
  Eigen::VectorXd lower(table.param_dim());
  Eigen::VectorXd upper(table.param_dim());
  for (int d = 0; d < table.param_dim(); ++d) {
    lower[d] = table.axes[static_cast<size_t>(d)].front();
    upper[d] = table.axes[static_cast<size_t>(d)].back();
  }
  const int ambient = table.ambient_dim();
  return EmbeddingSpec(EmbeddingSpec::Sampled{std::make_shared<const SampledTable>(std::move(table)), fd_step}, ambient,
                       DomainChart::euclidean(lower, upper));
}

EmbeddingSpec affine_image(const EmbeddingSpec& base, const Eigen::MatrixXd& matrix, const Eigen::VectorXd& offset) {
  if (matrix.cols() != base.ambient_dim() || offset.size() != matrix.rows() || matrix.rows() < 1) {
    throw Error(ErrorKind::DimensionMismatch, "affine map does not fit the base map dimensions");
  }
  return EmbeddingSpec(EmbeddingSpec::Affine{std::make_shared<const EmbeddingSpec>(base), matrix, offset},
                       static_cast<int>(matrix.rows()), base.domain());
}

EmbeddingSpec projected_map(const EmbeddingSpec& base, const Eigen::VectorXd& origin, double scale,
                            const Eigen::VectorXd& center, const Eigen::MatrixXd& basis) {
  const int n = base.ambient_dim();
  if (n < 2) throw Error(ErrorKind::InvalidParameter, "cannot project a map into R^0");
  if (origin.size() != n || center.size() != n || basis.rows() != n || basis.cols() != n - 1) {
    throw Error(ErrorKind::DimensionMismatch, "projection data does not fit the base map dimensions");
  }
  if (!(scale > 0.0)) throw Error(ErrorKind::InvalidParameter, "projection scale must be positive");
  return EmbeddingSpec(EmbeddingSpec::Projected{std::make_shared<const EmbeddingSpec>(base), origin, scale, center, basis}, n - 1,
                       base.domain());
}

EmbeddingSpec truncate(const EmbeddingSpec& base, int count) {
  if (count < 1 || count > base.ambient_dim()) throw Error(ErrorKind::InvalidParameter, "truncation count out of range");
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(count, base.ambient_dim());
  return affine_image(base, m, Eigen::VectorXd::Zero(count));
}

EmbeddingSpec zero_pad(const EmbeddingSpec& base, int extra) {
  if (extra < 0) throw Error(ErrorKind::InvalidParameter, "padding must be nonnegative");
  const int n = base.ambient_dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n + extra, n);
  return affine_image(base, m, Eigen::VectorXd::Zero(n + extra));
}

bool EmbeddingSpec::supports_exact() const {
  return std::visit(
      [](const auto& p) -> bool {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, MomentCurve> || std::is_same_v<T, ComplexMomentCurve>) {
          return true;
        } else if constexpr (std::is_same_v<T, Tensor>) {
          return p.left->supports_exact() && p.right->supports_exact();
        } else if constexpr (std::is_same_v<T, Affine>) {
          return p.base->supports_exact() && p.matrix.allFinite() && p.offset.allFinite();
        } else {
          return false;
        }
      },
      payload_);
}

EmbeddingSpec EmbeddingSpec::with_box(double lower, double upper) const {
  return std::visit(
      [&](const auto& p) -> EmbeddingSpec {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Tensor>) {
          return tensor_product(p.left->with_box(lower, upper), p.right->with_box(lower, upper));
        } else if constexpr (std::is_same_v<T, Affine>) {
          return affine_image(p.base->with_box(lower, upper), p.matrix, p.offset);
        } else if constexpr (std::is_same_v<T, Projected>) {
          return projected_map(p.base->with_box(lower, upper), p.origin, p.scale, p.center, p.basis);
        } else if constexpr (std::is_same_v<T, Sampled>) {
          return *this;  // a table defines its own range
        } else {
          return EmbeddingSpec(payload_, ambient_dim_, domain_.with_box(lower, upper));
        }
      },
      payload_);
}

std::string EmbeddingSpec::describe() const {
  return std::visit(
      [](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, MomentCurve>) {
          return "moment:" + std::to_string(p.degree);
        } else if constexpr (std::is_same_v<T, TrigCurve>) {
          return "trig:" + std::to_string(p.harmonics);
        } else if constexpr (std::is_same_v<T, ComplexMomentCurve>) {
          return "cmoment:" + std::to_string(p.degree);
        } else if constexpr (std::is_same_v<T, Tensor>) {
          return "tensor:(" + p.left->describe() + ")," + p.right->describe();
        } else if constexpr (std::is_same_v<T, Sampled>) {
          return "sampled:" + std::to_string(p.table->param_dim()) + "->" + std::to_string(p.table->ambient_dim());
        } else if constexpr (std::is_same_v<T, Affine>) {
          return "affine" + std::to_string(p.matrix.rows()) + "x" + std::to_string(p.matrix.cols()) + ":" + p.base->describe();
        } else {
          return "projected:" + p.base->describe();
        }
      },
      payload_);
}

// ---------------------------------------------------------------------------
// Jets

namespace {

Jet jet_impl(const EmbeddingSpec& spec, const Eigen::VectorXd& point, const std::vector<Eigen::VectorXd>& directions);

Jet sampled_jet(const EmbeddingSpec::Sampled& s, const DomainChart& chart, const Eigen::VectorXd& point,
                const std::vector<Eigen::VectorXd>& directions) {
  const double slack = 1e-12 * (1.0 + (chart.upper() - chart.lower()).cwiseAbs().maxCoeff());
  auto inside = [&](const Eigen::VectorXd& p) {
    for (int i = 0; i < chart.dim(); ++i) {
      if (p[i] < chart.lower()[i] - slack || p[i] > chart.upper()[i] + slack) return false;
    }
    return true;
  };
  auto clamp = [&](Eigen::VectorXd p) {
    return p.cwiseMax(chart.lower()).cwiseMin(chart.upper()).eval();
  };
  if (!inside(point)) throw Error(ErrorKind::OutOfDomain, "point outside the sampled parameter range");
  TableInterpolator interp(*s.table);
  Jet jet;
  jet.value = interp(clamp(point));
  for (const auto& u : directions) {
    if (u.isZero(0.0)) {
      jet.directional_derivatives.push_back(Eigen::VectorXd::Zero(jet.value.size()));
      continue;
    }
    const double h = s.fd_step;
    Eigen::VectorXd plus = point + h * u;
    Eigen::VectorXd minus = point - h * u;
    const bool has_plus = inside(plus);
    const bool has_minus = inside(minus);
    if (has_plus && has_minus) {
      jet.directional_derivatives.push_back((interp(clamp(plus)) - interp(clamp(minus))) / (2 * h));
    } else if (has_plus) {
      jet.directional_derivatives.push_back((interp(clamp(plus)) - jet.value) / h);
    } else if (has_minus) {
      jet.directional_derivatives.push_back((jet.value - interp(clamp(minus))) / h);
    } else {
      throw Error(ErrorKind::OutOfDomain, "finite-difference stencil leaves the sampled range");
    }
  }
  return jet;
}

Jet jet_impl(const EmbeddingSpec& spec, const Eigen::VectorXd& point, const std::vector<Eigen::VectorXd>& directions) {
  using S = EmbeddingSpec;
  const int n_out = spec.ambient_dim();
  return std::visit(
      [&](const auto& p) -> Jet {
        using T = std::decay_t<decltype(p)>;
        Jet jet;
        if constexpr (std::is_same_v<T, S::MomentCurve>) {
          const double t = point[0];
          jet.value.resize(n_out);
          Eigen::VectorXd dgamma(n_out);
          double power = 1.0;  // t^(i-1)
          for (int i = 1; i <= p.degree; ++i) {
            dgamma[i - 1] = i * power;
            power *= t;
            jet.value[i - 1] = power;
          }
          for (const auto& u : directions) jet.directional_derivatives.push_back(u[0] * dgamma);
        } else if constexpr (std::is_same_v<T, S::TrigCurve>) {
          const double a = point[0];
          jet.value.resize(n_out);
          Eigen::VectorXd dgamma(n_out);
          for (int j = 1; j <= p.harmonics; ++j) {
            const double c = std::cos(j * a);
            const double s = std::sin(j * a);
            jet.value[2 * j - 2] = c;
            jet.value[2 * j - 1] = s;
            dgamma[2 * j - 2] = -j * s;
            dgamma[2 * j - 1] = j * c;
          }
          for (const auto& u : directions) jet.directional_derivatives.push_back(u[0] * dgamma);
        } else if constexpr (std::is_same_v<T, S::ComplexMomentCurve>) {
          const std::complex<double> z(point[0], point[1]);
          jet.value.resize(n_out);
          std::vector<std::complex<double>> dgamma(static_cast<size_t>(p.degree));
          std::complex<double> power = 1.0;  // z^(j-1)
          for (int j = 1; j <= p.degree; ++j) {
            dgamma[static_cast<size_t>(j) - 1] = static_cast<double>(j) * power;
            power *= z;
            jet.value[2 * j - 2] = power.real();
            jet.value[2 * j - 1] = power.imag();
          }
          for (const auto& u : directions) {
            const std::complex<double> xi(u[0], u[1]);
            Eigen::VectorXd d(n_out);
            for (int j = 1; j <= p.degree; ++j) {
              const auto w = xi * dgamma[static_cast<size_t>(j) - 1];
              d[2 * j - 2] = w.real();
              d[2 * j - 1] = w.imag();
            }
            jet.directional_derivatives.push_back(std::move(d));
          }
        } else if constexpr (std::is_same_v<T, S::Tensor>) {
          const int nl = p.left->domain().dim();
          const int nr = p.right->domain().dim();
          std::vector<Eigen::VectorXd> dl, dr;
          for (const auto& u : directions) {
            dl.push_back(u.head(nl));
            dr.push_back(u.tail(nr));
          }
          Jet fx = jet_impl(*p.left, point.head(nl), dl);
          Jet gy = jet_impl(*p.right, point.tail(nr), dr);
          const auto nf = fx.value.size();
          const auto ng = gy.value.size();
          jet.value.resize(n_out);
          for (Eigen::Index i = 0; i < nf; ++i) jet.value.segment(i * ng, ng) = fx.value[i] * gy.value;
          jet.value.segment(nf * ng, nf) = fx.value;
          jet.value.tail(ng) = gy.value;
          for (size_t d = 0; d < directions.size(); ++d) {
            const Eigen::VectorXd& du = fx.directional_derivatives[d];
            const Eigen::VectorXd& dv = gy.directional_derivatives[d];
            Eigen::VectorXd out(n_out);
            for (Eigen::Index i = 0; i < nf; ++i) out.segment(i * ng, ng) = du[i] * gy.value + fx.value[i] * dv;
            out.segment(nf * ng, nf) = du;
            out.tail(ng) = dv;
            jet.directional_derivatives.push_back(std::move(out));
          }
        } else if constexpr (std::is_same_v<T, S::Sampled>) {
          jet = sampled_jet(p, spec.domain(), point, directions);
        } else if constexpr (std::is_same_v<T, S::Affine>) {
          Jet base = jet_impl(*p.base, point, directions);
          jet.value = p.matrix * base.value + p.offset;
          for (const auto& d : base.directional_derivatives) jet.directional_derivatives.push_back(p.matrix * d);
        } else {
          Jet base = jet_impl(*p.base, point, directions);
          const Eigen::VectorXd y = (base.value - p.origin) / p.scale;
          const double denom = 1.0 - y.dot(p.center);
          if (!(denom > 1e-12)) throw Error(ErrorKind::ProjectionSingularity, "image point on the plane through the projection center");
          const double t = 1.0 / denom;
          const Eigen::VectorXd qy = p.basis.transpose() * y;
          jet.value = t * qy;
          for (const auto& d : base.directional_derivatives) {
            const Eigen::VectorXd dy = d / p.scale;
            const double dt = t * t * dy.dot(p.center);
            jet.directional_derivatives.push_back(t * (p.basis.transpose() * dy) + dt * qy);
          }
        }
        return jet;
      },
      spec.payload());
}

void check_jet_inputs(const EmbeddingSpec& spec, const Eigen::Index point_size, const std::vector<Eigen::Index>& direction_sizes) {
  const int n = spec.domain().dim();
  if (point_size != n) {
    throw Error(ErrorKind::DimensionMismatch, "chart point of dimension " + std::to_string(point_size) + " for a " +
                                                  std::to_string(n) + "-dimensional domain");
  }
  for (auto s : direction_sizes) {
    if (s != n) throw Error(ErrorKind::DimensionMismatch, "chart direction of wrong dimension");
  }
}

}  // namespace

Jet evaluate_jet(const EmbeddingSpec& spec, const Eigen::VectorXd& point, const std::vector<Eigen::VectorXd>& directions) {
  std::vector<Eigen::Index> sizes;
  for (const auto& u : directions) sizes.push_back(u.size());
  check_jet_inputs(spec, point.size(), sizes);
  if (!point.allFinite()) throw Error(ErrorKind::InvalidInput, "non-finite chart point");
  for (const auto& u : directions) {
    if (!u.allFinite()) throw Error(ErrorKind::InvalidInput, "non-finite chart direction");
    if (u.isZero(0.0)) throw Error(ErrorKind::DegenerateDirection, "zero chart direction");
  }
  return jet_impl(spec, spec.domain().normalize(point), directions);
}

Eigen::VectorXd evaluate(const EmbeddingSpec& spec, const Eigen::VectorXd& point) { return evaluate_jet(spec, point, {}).value; }

namespace {

RationalJet exact_jet_impl(const EmbeddingSpec& spec, const RationalVector& point, const std::vector<RationalVector>& directions) {
  using S = EmbeddingSpec;
  return std::visit(
      [&](const auto& p) -> RationalJet {
        using T = std::decay_t<decltype(p)>;
        RationalJet jet;
        if constexpr (std::is_same_v<T, S::MomentCurve>) {
          const Rational& t = point[0];
          RationalVector dgamma;
          Rational power = 1;
          for (int i = 1; i <= p.degree; ++i) {
            dgamma.push_back(i * power);
            power *= t;
            jet.value.push_back(power);
          }
          for (const auto& u : directions) {
            RationalVector d;
            for (const auto& g : dgamma) d.push_back(u[0] * g);
            jet.directional_derivatives.push_back(std::move(d));
          }
        } else if constexpr (std::is_same_v<T, S::ComplexMomentCurve>) {
          // complex numbers as (re, im) pairs over Q
          const Rational x = point[0], y = point[1];
          Rational pre = 1, pim = 0;  // z^(j-1)
          std::vector<std::pair<Rational, Rational>> dgamma;
          for (int j = 1; j <= p.degree; ++j) {
            dgamma.emplace_back(j * pre, j * pim);
            Rational nre = pre * x - pim * y;
            Rational nim = pre * y + pim * x;
            pre = nre;
            pim = nim;
            jet.value.push_back(pre);
            jet.value.push_back(pim);
          }
          for (const auto& u : directions) {
            RationalVector d;
            for (const auto& [gre, gim] : dgamma) {
              d.push_back(u[0] * gre - u[1] * gim);
              d.push_back(u[0] * gim + u[1] * gre);
            }
            jet.directional_derivatives.push_back(std::move(d));
          }
        } else if constexpr (std::is_same_v<T, S::Tensor>) {
          const auto nl = static_cast<size_t>(p.left->domain().dim());
          RationalVector x(point.begin(), point.begin() + static_cast<std::ptrdiff_t>(nl));
          RationalVector y(point.begin() + static_cast<std::ptrdiff_t>(nl), point.end());
          std::vector<RationalVector> dl, dr;
          for (const auto& u : directions) {
            dl.emplace_back(u.begin(), u.begin() + static_cast<std::ptrdiff_t>(nl));
            dr.emplace_back(u.begin() + static_cast<std::ptrdiff_t>(nl), u.end());
          }
          RationalJet fx = exact_jet_impl(*p.left, x, dl);
          RationalJet gy = exact_jet_impl(*p.right, y, dr);
          for (const auto& a : fx.value) {
            for (const auto& b : gy.value) jet.value.push_back(a * b);
          }
          jet.value.insert(jet.value.end(), fx.value.begin(), fx.value.end());
          jet.value.insert(jet.value.end(), gy.value.begin(), gy.value.end());
          for (size_t d = 0; d < directions.size(); ++d) {
            const auto& du = fx.directional_derivatives[d];
            const auto& dv = gy.directional_derivatives[d];
            RationalVector out;
            for (size_t i = 0; i < fx.value.size(); ++i) {
              for (size_t j = 0; j < gy.value.size(); ++j) out.push_back(du[i] * gy.value[j] + fx.value[i] * dv[j]);
            }
            out.insert(out.end(), du.begin(), du.end());
            out.insert(out.end(), dv.begin(), dv.end());
            jet.directional_derivatives.push_back(std::move(out));
          }
        } else if constexpr (std::is_same_v<T, S::Affine>) {
          RationalJet base = exact_jet_impl(*p.base, point, directions);
          const RationalMatrix a = RationalMatrix::from_double(p.matrix);
          const RationalVector b = rational_from_vector(p.offset);
          auto apply = [&](const RationalVector& v, bool with_offset) {
            RationalVector out(static_cast<size_t>(a.rows()));
            for (int r = 0; r < a.rows(); ++r) {
              Rational s = with_offset ? b[static_cast<size_t>(r)] : Rational(0);
              for (int c = 0; c < a.cols(); ++c) s += a(r, c) * v[static_cast<size_t>(c)];
              out[static_cast<size_t>(r)] = s;
            }
            return out;
          };
          jet.value = apply(base.value, true);
          for (const auto& d : base.directional_derivatives) jet.directional_derivatives.push_back(apply(d, false));
        } else {
          throw Error(ErrorKind::InvalidParameter, "map has no exact evaluation");
        }
        return jet;
      },
      spec.payload());
}

}  // namespace

RationalJet evaluate_jet_exact(const EmbeddingSpec& spec, const RationalVector& point, const std::vector<RationalVector>& directions) {
  if (!spec.supports_exact()) throw Error(ErrorKind::InvalidParameter, "map " + spec.describe() + " has no exact evaluation");
  std::vector<Eigen::Index> sizes;
  for (const auto& u : directions) sizes.push_back(static_cast<Eigen::Index>(u.size()));
  check_jet_inputs(spec, static_cast<Eigen::Index>(point.size()), sizes);
  for (const auto& u : directions) {
    if (std::all_of(u.begin(), u.end(), [](const Rational& q) { return q == 0; })) {
      throw Error(ErrorKind::DegenerateDirection, "zero chart direction");
    }
  }
  return exact_jet_impl(spec, point, directions);
}

Eigen::VectorXd second_derivative(const EmbeddingSpec& spec, const Eigen::VectorXd& point, const Eigen::VectorXd& direction) {
  using S = EmbeddingSpec;
  if (direction.size() != spec.domain().dim() || point.size() != spec.domain().dim()) {
    throw Error(ErrorKind::DimensionMismatch, "chart point or direction of wrong dimension");
  }
  const int n_out = spec.ambient_dim();
  if (const auto* m = std::get_if<S::MomentCurve>(&spec.payload())) {
    const double t = point[0];
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n_out);
    double power = 1.0;  // t^(i-2)
    for (int i = 2; i <= m->degree; ++i) {
      out[i - 1] = i * (i - 1) * power;
      power *= t;
    }
    return direction[0] * direction[0] * out;
  }
  if (const auto* tc = std::get_if<S::TrigCurve>(&spec.payload())) {
    const double a = spec.domain().normalize(point)[0];
    Eigen::VectorXd out(n_out);
    for (int j = 1; j <= tc->harmonics; ++j) {
      out[2 * j - 2] = -j * j * std::cos(j * a);
      out[2 * j - 1] = -j * j * std::sin(j * a);
    }
    return direction[0] * direction[0] * out;
  }
  if (const auto* af = std::get_if<S::Affine>(&spec.payload())) {
    return af->matrix * second_derivative(*af->base, point, direction);
  }
  const double h = 1e-4;
  Eigen::VectorXd plus = evaluate_jet(spec, point + h * direction, {direction}).directional_derivatives[0];
  Eigen::VectorXd minus = evaluate_jet(spec, point - h * direction, {direction}).directional_derivatives[0];
  return (plus - minus) / (2 * h);
}

// ---------------------------------------------------------------------------
// Descriptor parsing

namespace {

std::string strip(std::string s) {
  s.erase(0, s.find_first_not_of(" \t"));
  s.erase(s.find_last_not_of(" \t") + 1);
  return s;
}

bool wrapped_in_parens(const std::string& s) {
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') return false;
  int depth = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (depth == 0 && i + 1 < s.size()) return false;
  }
  return true;
}

int parse_positive(const std::string& s, const std::string& descriptor) {
  try {
    size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidInput, "bad integer '" + s + "' in map descriptor '" + descriptor + "'");
  }
}

}  // namespace

EmbeddingSpec parse_map(const std::string& descriptor) {
  std::string d = strip(descriptor);
  while (wrapped_in_parens(d)) d = strip(d.substr(1, d.size() - 2));
  const auto colon = d.find(':');
  if (colon == std::string::npos) throw Error(ErrorKind::InvalidInput, "map descriptor '" + descriptor + "' lacks ':'");
  const std::string head = d.substr(0, colon);
  const std::string rest = d.substr(colon + 1);
  if (head == "moment") return moment_curve(parse_positive(rest, descriptor));
  if (head == "trig") return trig_curve(parse_positive(rest, descriptor));
  if (head == "cmoment") return complex_moment_curve(parse_positive(rest, descriptor));
  if (head == "sampled") return sampled_map(load_sampled_table(rest));
  if (head == "trunc" || head == "pad") {
    const auto c2 = rest.find(':');
    if (c2 == std::string::npos) throw Error(ErrorKind::InvalidInput, "expected " + head + ":COUNT:MAP in '" + descriptor + "'");
    const int count = parse_positive(rest.substr(0, c2), descriptor);
    EmbeddingSpec base = parse_map(rest.substr(c2 + 1));
    return head == "trunc" ? truncate(base, count) : zero_pad(base, count);
  }
  if (head == "tensor") {
    int depth = 0;
    for (size_t i = 0; i < rest.size(); ++i) {
      if (rest[i] == '(') ++depth;
      if (rest[i] == ')') --depth;
      if (rest[i] == ',' && depth == 0) return tensor_product(parse_map(rest.substr(0, i)), parse_map(rest.substr(i + 1)));
    }
    throw Error(ErrorKind::InvalidInput, "tensor descriptor needs two maps: '" + descriptor + "'");
  }
  throw Error(ErrorKind::InvalidInput, "unknown map kind '" + head + "'");
}

}  // namespace regemb
