#include "regemb/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

#include "regemb/error.hpp"
#include "regemb/verifier.hpp"

namespace regemb {

namespace {

// Runs fn(i) for i in [0, count) on a small worker pool. The first exception
// (by index) is rethrown after all workers finish.
template <typename Fn>
void parallel_for(long long count, unsigned threads, Fn fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<long long>(threads, std::max<long long>(count, 1)));
  std::atomic<long long> next{0};
  std::mutex error_mutex;
  long long error_index = std::numeric_limits<long long>::max();
  std::exception_ptr error;
  auto worker = [&] {
    for (;;) {
      const long long i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

RankReport configuration_margin(const EmbeddingSpec& spec, const Configuration& config, double tol) {
  return rank_and_margin(lifted_matrix(spec, config), tol);
}

SearchReport sample_verify(const EmbeddingSpec& spec, int k, int l, const SampleOptions& options) {
  if (options.num_samples < 1) throw Error(ErrorKind::InvalidParameter, "num_samples must be at least 1");
  {
    auto probe = stream_rng(options.seed, 0);
    random_configuration(spec.domain(), k, l, options.delta_min, options.tangent_mode, probe);  // feasibility
  }
  const auto count = options.num_samples;
  std::vector<double> margins(static_cast<size_t>(count));
  std::vector<char> deficient(static_cast<size_t>(count));
  parallel_for(count, options.threads, [&](long long i) {
    auto rng = stream_rng(options.seed, static_cast<std::uint64_t>(i));
    Configuration c = random_configuration(spec.domain(), k, l, options.delta_min, options.tangent_mode, rng);
    RankReport r = configuration_margin(spec, c, options.tol);
    margins[static_cast<size_t>(i)] = r.margin;
    deficient[static_cast<size_t>(i)] = r.full_column_rank() ? 0 : 1;
  });

  SearchReport report;
  report.seed = options.seed;
  report.samples = count;
  size_t best = 0;
  for (size_t i = 0; i < margins.size(); ++i) {
    if (margins[i] < margins[best]) best = i;
    report.violations += deficient[i];
  }
  auto rng = stream_rng(options.seed, best);
  report.best_configuration = random_configuration(spec.domain(), k, l, options.delta_min, options.tangent_mode, rng);
  RankReport r = configuration_margin(spec, report.best_configuration, options.tol);
  report.best_margin = r.margin;
  report.best_scale = r.scale;
  report.evaluations = count;
  return report;
}

namespace {

// Flat parameter vector: chart coordinates of every point, then one chart
// vector per tangency direction when the chart has dimension >= 2.
class SearchProblem {
 public:
  SearchProblem(const EmbeddingSpec& spec, int k, int l, double delta_min)
      : spec_(spec), k_(k), l_(l), n_(spec.domain().dim()), delta_min_(delta_min) {}

  int size() const { return (k_ + l_) * n_ + (n_ >= 2 ? l_ * n_ : 0); }

  bool is_point_coordinate(int i) const { return i < (k_ + l_) * n_; }
  int chart_coordinate(int i) const { return i % n_; }

  Eigen::VectorXd encode(const Configuration& c) const {
    Eigen::VectorXd theta(size());
    int at = 0;
    for (const auto& p : c.through_points) theta.segment(at, n_) = p, at += n_;
    for (const auto& p : c.tangency_points) theta.segment(at, n_) = p, at += n_;
    if (n_ >= 2) {
      for (const auto& g : c.directions) theta.segment(at, n_) = g.front(), at += n_;
    }
    return theta;
  }

  Configuration decode(const Eigen::VectorXd& theta) const {
    Configuration c;
    int at = 0;
    for (int i = 0; i < k_; ++i, at += n_) c.through_points.push_back(spec_.domain().normalize(theta.segment(at, n_)));
    for (int j = 0; j < l_; ++j, at += n_) c.tangency_points.push_back(spec_.domain().normalize(theta.segment(at, n_)));
    for (int j = 0; j < l_; ++j) {
      if (n_ >= 2) {
        c.directions.push_back({theta.segment(at, n_).normalized()});
        at += n_;
      } else {
        c.directions.push_back({Eigen::VectorXd::Ones(1)});
      }
    }
    return c;
  }

  // Keeps box coordinates inside the box.
  void clamp(Eigen::VectorXd& theta, int i) const {
    if (!is_point_coordinate(i)) return;
    const int d = chart_coordinate(i);
    if (spec_.domain().periodic(d)) return;
    theta[i] = std::clamp(theta[i], spec_.domain().lower()[d], spec_.domain().upper()[d]);
  }

  double initial_step(int i) const {
    if (!is_point_coordinate(i)) return 0.5;
    const int d = chart_coordinate(i);
    return 0.25 * (spec_.domain().upper()[d] - spec_.domain().lower()[d]);
  }

  // Margin, or +inf for infeasible or unevaluable configurations.
  double objective(const Eigen::VectorXd& theta) const {
    if (n_ >= 2) {
      for (int j = 0; j < l_; ++j) {
        if (theta.segment((k_ + l_) * n_ + j * n_, n_).norm() < 1e-12) return kInfeasible;
      }
    }
    Configuration c = decode(theta);
    std::vector<const Eigen::VectorXd*> pts;
    for (const auto& p : c.through_points) pts.push_back(&p);
    for (const auto& p : c.tangency_points) pts.push_back(&p);
    for (size_t a = 0; a < pts.size(); ++a) {
      for (size_t b = a + 1; b < pts.size(); ++b) {
        if (spec_.domain().distance(*pts[a], *pts[b]) < delta_min_) return kInfeasible;
      }
    }
    try {
      return configuration_margin(spec_, c).margin;
    } catch (const Error&) {
      return kInfeasible;
    }
  }

  static constexpr double kInfeasible = std::numeric_limits<double>::infinity();

 private:
  const EmbeddingSpec& spec_;
  int k_, l_, n_;
  double delta_min_;
};

struct RestartResult {
  double margin = std::numeric_limits<double>::infinity();
  Configuration config;
  long long iterations = 0;
  long long evaluations = 0;
};

RestartResult descend(const SearchProblem& problem, const EmbeddingSpec& spec, int k, int l, const SearchOptions& options, int restart) {
  auto rng = stream_rng(options.seed, static_cast<std::uint64_t>(restart));
  Configuration start = random_configuration(spec.domain(), k, l, options.delta_min, TangentMode::single_direction, rng);
  Eigen::VectorXd theta = problem.encode(start);
  const int dims = problem.size();
  Eigen::VectorXd step(dims), max_step(dims);
  for (int i = 0; i < dims; ++i) max_step[i] = step[i] = problem.initial_step(i);

  RestartResult result;
  double value = problem.objective(theta);
  ++result.evaluations;
  std::vector<double> history{value};
  for (int iter = 1; iter <= options.iters; ++iter) {
    result.iterations = iter;
    for (int i = 0; i < dims; ++i) {
      bool moved = false;
      for (double sign : {1.0, -1.0}) {
        Eigen::VectorXd trial = theta;
        trial[i] += sign * step[i];
        problem.clamp(trial, i);
        if (trial[i] == theta[i]) continue;
        const double v = problem.objective(trial);
        ++result.evaluations;
        if (v < value) {
          theta = std::move(trial);
          value = v;
          step[i] = std::min(2.0 * step[i], max_step[i]);
          moved = true;
          break;
        }
      }
      if (!moved) step[i] *= 0.5;
    }
    history.push_back(value);
    if (value == 0.0) break;
    if ((step.array() <= 1e-15 * max_step.array()).all()) break;
    if (iter >= options.stall_window) {
      const double before = history[static_cast<size_t>(iter - options.stall_window)];
      if (before - value <= options.stall_improvement * before) break;
    }
  }
  result.margin = value;
  result.config = problem.decode(theta);
  return result;
}

}  // namespace

SearchReport adversarial_search(const EmbeddingSpec& base_spec, int k, int l, const SearchOptions& options) {
  if (options.restarts < 1 || options.iters < 1) throw Error(ErrorKind::InvalidParameter, "restarts and iters must be at least 1");
  if (options.box && !(*options.box > 0.0)) throw Error(ErrorKind::InvalidParameter, "box half-width must be positive");
  const EmbeddingSpec spec = options.box ? base_spec.with_box(-*options.box, *options.box) : base_spec;
  {
    auto probe = stream_rng(options.seed, 0);
    random_configuration(spec.domain(), k, l, options.delta_min, TangentMode::single_direction, probe);  // feasibility
  }
  SearchProblem problem(spec, k, l, options.delta_min);
  std::vector<RestartResult> results(static_cast<size_t>(options.restarts));
  parallel_for(options.restarts, options.threads,
               [&](long long r) { results[static_cast<size_t>(r)] = descend(problem, spec, k, l, options, static_cast<int>(r)); });

  SearchReport report;
  report.seed = options.seed;
  report.restarts = options.restarts;
  size_t best = 0;
  for (size_t r = 0; r < results.size(); ++r) {
    report.iterations_used += results[r].iterations;
    report.evaluations += results[r].evaluations;
    if (results[r].margin < results[best].margin) best = r;
  }
  report.best_configuration = results[best].config;
  RankReport r = configuration_margin(spec, report.best_configuration, options.tol);
  report.best_margin = r.margin;
  report.best_scale = r.scale;
  report.samples = options.restarts;
  report.violations = r.full_column_rank() ? 0 : 1;
  report.converged = report.best_margin < options.tol * report.best_scale;
  return report;
}

}  // namespace regemb
