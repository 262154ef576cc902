#include "regemb/configuration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <Eigen/SVD>

#include "regemb/error.hpp"

namespace regemb {

int Configuration::column_count() const {
  int count = k() + l();
  for (const auto& group : directions) count += static_cast<int>(group.size());
  return count;
}

Configuration RationalConfiguration::to_double() const {
  Configuration c;
  for (const auto& p : through_points) c.through_points.push_back(regemb::to_double(p));
  for (const auto& p : tangency_points) c.tangency_points.push_back(regemb::to_double(p));
  for (const auto& group : directions) {
    std::vector<Eigen::VectorXd> g;
    for (const auto& u : group) g.push_back(regemb::to_double(u));
    c.directions.push_back(std::move(g));
  }
  return c;
}

void validate_configuration(const DomainChart& chart, const Configuration& config, double delta_min) {
  if (config.k() + config.l() == 0) throw Error(ErrorKind::EmptyConfiguration, "k and l are both zero");
  const int n = chart.dim();
  if (static_cast<int>(config.directions.size()) != config.l()) {
    throw Error(ErrorKind::DimensionMismatch, "one direction group per tangency point required");
  }
  std::vector<Eigen::VectorXd> all;
  for (const auto& p : config.through_points) all.push_back(p);
  for (const auto& p : config.tangency_points) all.push_back(p);
  for (const auto& p : all) {
    if (p.size() != n) throw Error(ErrorKind::DimensionMismatch, "chart point of dimension " + std::to_string(p.size()) + ", chart has " + std::to_string(n));
    if (!p.allFinite()) throw Error(ErrorKind::InvalidInput, "non-finite chart point");
  }
  for (const auto& group : config.directions) {
    if (group.empty()) throw Error(ErrorKind::InvalidParameter, "tangency point without a direction");
    if (static_cast<int>(group.size()) > n) {
      throw Error(ErrorKind::InvalidParameter, "tangent subspace of dimension " + std::to_string(group.size()) +
                                                   " exceeds chart dimension " + std::to_string(n));
    }
    Eigen::MatrixXd basis(n, static_cast<Eigen::Index>(group.size()));
    for (size_t i = 0; i < group.size(); ++i) {
      if (group[i].size() != n) throw Error(ErrorKind::DimensionMismatch, "chart direction of wrong dimension");
      if (!group[i].allFinite()) throw Error(ErrorKind::InvalidInput, "non-finite chart direction");
      if (group[i].isZero(0.0)) throw Error(ErrorKind::DegenerateDirection, "zero chart direction");
      basis.col(static_cast<Eigen::Index>(i)) = group[i];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(basis);
    const auto& sv = svd.singularValues();
    if (sv[sv.size() - 1] <= 1e-12 * sv[0]) throw Error(ErrorKind::InvalidParameter, "dependent tangent directions");
  }
  for (size_t i = 0; i < all.size(); ++i) {
    for (size_t j = i + 1; j < all.size(); ++j) {
      const double d = chart.distance(all[i], all[j]);
      if (d < delta_min) {
        throw Error(ErrorKind::DistinctnessViolation, "points " + std::to_string(i) + " and " + std::to_string(j) +
                                                          " are " + std::to_string(d) + " apart, below delta_min");
      }
    }
  }
}

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32), 0x5eedu};
  return std::mt19937_64(seq);
}

namespace {

void check_feasible(const DomainChart& chart, int k, int l, double delta_min) {
  if (k < 0 || l < 0) throw Error(ErrorKind::InvalidParameter, "k and l must be nonnegative");
  if (k + l == 0) throw Error(ErrorKind::EmptyConfiguration, "k and l are both zero");
  if (!(delta_min >= 0.0)) throw Error(ErrorKind::InvalidParameter, "delta_min must be nonnegative");
  const int count = k + l;
  if (chart.dim() == 1) {
    const double room = chart.periodic(0) ? kTwoPi / count : (chart.upper()[0] - chart.lower()[0]) / std::max(count - 1, 1);
    if (count > 1 && delta_min > room) {
      throw Error(ErrorKind::InvalidParameter, "cannot place " + std::to_string(count) + " points delta_min apart in the chart");
    }
  }
}

constexpr int kMaxPlacementAttempts = 10000;

template <typename Draw>
std::vector<Eigen::VectorXd> place_points(const DomainChart& chart, int count, double delta_min, std::mt19937_64& rng, Draw draw) {
  for (int attempt = 0; attempt < kMaxPlacementAttempts; ++attempt) {
    std::vector<Eigen::VectorXd> pts;
    bool ok = true;
    for (int i = 0; i < count && ok; ++i) {
      Eigen::VectorXd p = draw(rng);
      for (const auto& q : pts) {
        if (chart.distance(p, q) < delta_min) {
          ok = false;
          break;
        }
      }
      pts.push_back(std::move(p));
    }
    if (ok) return pts;
  }
  throw Error(ErrorKind::InvalidParameter, "could not place points delta_min apart after " + std::to_string(kMaxPlacementAttempts) + " attempts");
}

}  // namespace

Configuration random_configuration(const DomainChart& chart, int k, int l, double delta_min, TangentMode mode, std::mt19937_64& rng) {
  check_feasible(chart, k, l, delta_min);
  const int n = chart.dim();
  auto draw = [&](std::mt19937_64& g) {
    Eigen::VectorXd p(n);
    for (int i = 0; i < n; ++i) {
      std::uniform_real_distribution<double> u(chart.lower()[i], chart.upper()[i]);
      p[i] = u(g);
    }
    return chart.normalize(p);
  };
  auto pts = place_points(chart, k + l, delta_min, rng, draw);
  Configuration c;
  c.through_points.assign(pts.begin(), pts.begin() + k);
  c.tangency_points.assign(pts.begin() + k, pts.end());
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int j = 0; j < l; ++j) {
    std::vector<Eigen::VectorXd> group;
    if (mode == TangentMode::full_space) {
      for (int i = 0; i < n; ++i) group.push_back(Eigen::VectorXd::Unit(n, i));
    } else {
      Eigen::VectorXd u(n);
      do {
        for (int i = 0; i < n; ++i) u[i] = gauss(rng);
      } while (u.norm() < 1e-8);
      group.push_back(u.normalized());
    }
    c.directions.push_back(std::move(group));
  }
  return c;
}

RationalConfiguration random_rational_configuration(const DomainChart& chart, int k, int l, double delta_min, TangentMode mode,
                                                    long denominator, std::mt19937_64& rng) {
  check_feasible(chart, k, l, delta_min);
  if (denominator < 1) throw Error(ErrorKind::InvalidParameter, "denominator must be positive");
  const int n = chart.dim();
  auto draw = [&]() {
    RationalVector q(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      const double lo_steps = std::ceil(chart.lower()[i] * static_cast<double>(denominator));
      const double hi_steps = std::floor(chart.upper()[i] * static_cast<double>(denominator)) - (chart.periodic(i) ? 1.0 : 0.0);
      std::uniform_int_distribution<long> pick(static_cast<long>(lo_steps), std::max(static_cast<long>(hi_steps), static_cast<long>(lo_steps)));
      q[static_cast<size_t>(i)] = Rational(pick(rng), denominator);
      q[static_cast<size_t>(i)].canonicalize();
    }
    return q;
  };

  RationalConfiguration c;
  bool placed = false;
  for (int attempt = 0; attempt < kMaxPlacementAttempts && !placed; ++attempt) {
    std::vector<RationalVector> pts;
    std::vector<Eigen::VectorXd> approx;
    placed = true;
    for (int i = 0; i < k + l && placed; ++i) {
      pts.push_back(draw());
      approx.push_back(regemb::to_double(pts.back()));
      for (size_t j = 0; j + 1 < approx.size(); ++j) {
        if (pts[j] == pts.back() || chart.distance(approx[j], approx.back()) < delta_min) placed = false;
      }
    }
    if (placed) {
      c.through_points.assign(pts.begin(), pts.begin() + k);
      c.tangency_points.assign(pts.begin() + k, pts.end());
    }
  }
  if (!placed) throw Error(ErrorKind::InvalidParameter, "could not place rational points delta_min apart");

  std::uniform_int_distribution<int> small(-4, 4);
  for (int j = 0; j < l; ++j) {
    std::vector<RationalVector> group;
    if (mode == TangentMode::full_space) {
      for (int i = 0; i < n; ++i) {
        RationalVector e(static_cast<size_t>(n), Rational(0));
        e[static_cast<size_t>(i)] = 1;
        group.push_back(std::move(e));
      }
    } else {
      RationalVector u(static_cast<size_t>(n), Rational(0));
      while (std::all_of(u.begin(), u.end(), [](const Rational& x) { return x == 0; })) {
        for (auto& x : u) x = small(rng);
      }
      group.push_back(std::move(u));
    }
    c.directions.push_back(std::move(group));
  }
  return c;
}

RationalConfiguration parse_configuration_csv(const std::string& text, int chart_dim) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  RationalConfiguration c;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> cells;
    {
      std::istringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) {
        cell.erase(0, cell.find_first_not_of(" \t\r"));
        cell.erase(cell.find_last_not_of(" \t\r") + 1);
        cells.push_back(cell);
      }
    }
    auto fail = [&](const std::string& why) { throw Error(ErrorKind::InvalidInput, "line " + std::to_string(line_no) + ": " + why); };
    if (cells.empty()) continue;
    if (cells[0] == "role") continue;
    if (cells[0] != "x" && cells[0] != "y") fail("role must be 'x' or 'y', got '" + cells[0] + "'");
    const bool tangency = cells[0] == "y";
    const size_t n = static_cast<size_t>(chart_dim);
    const size_t fields = cells.size() - 1;
    if (!tangency && fields != n) fail("expected " + std::to_string(n) + " coordinates for a through point, got " + std::to_string(fields));
    if (tangency && fields != 2 * n && !(n == 1 && fields == 1)) {
      fail("expected " + std::to_string(n) + " coordinates and " + std::to_string(n) + " direction entries, got " + std::to_string(fields));
    }
    RationalVector p, u;
    try {
      for (size_t i = 0; i < n; ++i) p.push_back(parse_rational(cells[1 + i]));
      if (tangency) {
        if (fields == 2 * n) {
          for (size_t i = 0; i < n; ++i) u.push_back(parse_rational(cells[1 + n + i]));
        } else {
          u.emplace_back(1);
        }
      }
    } catch (const Error& e) {
      fail(e.what());
    }
    if (!tangency) {
      c.through_points.push_back(std::move(p));
    } else if (!c.tangency_points.empty() && c.tangency_points.back() == p) {
      c.directions.back().push_back(std::move(u));
    } else {
      c.tangency_points.push_back(std::move(p));
      c.directions.push_back({std::move(u)});
    }
  }
  if (c.k() + c.l() == 0) throw Error(ErrorKind::EmptyConfiguration, "configuration CSV lists no points");
  return c;
}

RationalConfiguration load_configuration_csv(const std::string& path, int chart_dim) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open configuration CSV '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_configuration_csv(buffer.str(), chart_dim);
}

}  // namespace regemb
