#include "regemb/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <Eigen/SVD>

#include "regemb/bounds.hpp"
#include "regemb/configuration.hpp"
#include "regemb/embeddings.hpp"
#include "regemb/error.hpp"
#include "regemb/io.hpp"
#include "regemb/polynomial.hpp"
#include "regemb/reduction.hpp"
#include "regemb/search.hpp"
#include "regemb/verifier.hpp"

#ifndef REGEMB_VERSION
#define REGEMB_VERSION "0.0.0"
#endif

namespace regemb {

const char* version() { return REGEMB_VERSION; }

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Outcome {
  Json parameters = Json::object();
  Json results = Json::object();
  std::uint64_t seed = 0;
  int exit_code = kExitOk;
  std::optional<std::string> text;  // printed instead of the JSON report
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::vector<Rational> parse_rational_list(const std::string& s) {
  std::vector<Rational> out;
  for (const auto& item : split_list(s)) out.push_back(parse_rational(item));
  return out;
}

Json rational_list_json(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& q : v) a.push_back(to_string(q));
  return a;
}

// Coefficients of a linear dependence among the lifted columns.
Json dependency_json(const EmbeddingSpec& spec, const Configuration& c) {
  const LiftedMatrix m = lifted_matrix(spec, c);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m.columns, Eigen::ComputeFullV);
  return vector_json(svd.matrixV().col(m.cols() - 1));
}

Json violation_json(const EmbeddingSpec& spec, const RegularityVerdict& v) {
  Json j;
  j["dependency"] = dependency_json(spec, v.configuration);
  if (v.hyperplane_witness) {
    const IncidenceResiduals r = incidence_residuals(spec, v.configuration, *v.hyperplane_witness);
    j["incidence_residual"] = number_json(r.max());
  }
  if (auto flat = find_violating_hyperplane(spec, v.configuration, v.rank_report.tolerance)) {
    j["violating_flat_dimension"] = flat->dimension;
  }
  return j;
}

void require_kl(int k, int l) {
  if (k < 0 || l < 0) throw UsageError("--k and --l must be nonnegative");
  if (k + l == 0) throw Error(ErrorKind::EmptyConfiguration, "k + l must be at least 1");
}

Outcome run_verify(const std::string& map, std::optional<int> k, std::optional<int> l, const std::string& config_path,
                   long long samples, std::uint64_t seed, double tol, double delta, const std::string& tangent, unsigned threads) {
  Outcome o;
  o.seed = seed;
  o.parameters = Json{{"map", map},         {"k", k ? Json(*k) : Json()}, {"l", l ? Json(*l) : Json()},
                      {"config", config_path.empty() ? Json() : Json(config_path)}, {"samples", samples},
                      {"seed", seed},       {"tol", tol},                 {"delta", delta},
                      {"tangent", tangent}};
  const EmbeddingSpec spec = parse_map(map);
  if (!config_path.empty()) {
    const RationalConfiguration rc = load_configuration_csv(config_path, spec.domain().dim());
    if ((k && *k != rc.k()) || (l && *l != rc.l())) throw UsageError("--k/--l disagree with the configuration file");
    const bool subspaces = std::any_of(rc.directions.begin(), rc.directions.end(), [](const auto& g) { return g.size() != 1; });
    const RegularityVerdict v =
        subspaces ? check_subspace_configuration(spec, rc, tol, delta) : check_configuration(spec, rc, tol, delta);
    o.results["mode"] = "config";
    o.results["verdict"] = to_json(v);
    if (!v.regular) {
      o.results["violation"] = violation_json(spec, v);
      o.exit_code = kExitViolation;
    }
    return o;
  }
  if (!k || !l) throw UsageError("--k and --l are required without --config");
  require_kl(*k, *l);
  SampleOptions opt;
  opt.num_samples = samples;
  opt.delta_min = delta;
  opt.seed = seed;
  opt.tol = tol;
  opt.threads = threads;
  opt.tangent_mode = tangent == "space" ? TangentMode::full_space : TangentMode::single_direction;
  const SearchReport report = sample_verify(spec, *k, *l, opt);
  o.results["mode"] = "samples";
  o.results["report"] = to_json(report);
  const RegularityVerdict v = opt.tangent_mode == TangentMode::full_space
                                  ? check_subspace_configuration(spec, report.best_configuration, tol, 0.0)
                                  : check_configuration(spec, report.best_configuration, tol, 0.0);
  o.results["worst_verdict"] = to_json(v);
  if (report.violations > 0 || !v.regular) {
    o.results["violation"] = violation_json(spec, v);
    o.exit_code = kExitViolation;
  }
  return o;
}

Outcome run_search(const std::string& map, int k, int l, int restarts, int iters, std::optional<double> box, std::uint64_t seed,
                   double tol, double delta, unsigned threads) {
  Outcome o;
  o.seed = seed;
  o.parameters = Json{{"map", map},   {"k", k},         {"l", l},         {"restarts", restarts},
                      {"iters", iters}, {"box", box ? Json(*box) : Json()}, {"seed", seed}, {"tol", tol},
                      {"delta", delta}};
  require_kl(k, l);
  const EmbeddingSpec spec = parse_map(map);
  SearchOptions opt;
  opt.restarts = restarts;
  opt.iters = iters;
  opt.box = box;
  opt.seed = seed;
  opt.tol = tol;
  opt.delta_min = delta;
  opt.threads = threads;
  const SearchReport report = adversarial_search(spec, k, l, opt);
  o.results["report"] = to_json(report);
  if (report.converged) {
    const EmbeddingSpec boxed = box ? spec.with_box(-*box, *box) : spec;
    const RegularityVerdict v = check_configuration(boxed, report.best_configuration, tol, 0.0);
    o.results["verdict"] = to_json(v);
    o.results["violation"] = violation_json(boxed, v);
    o.exit_code = kExitViolation;
  }
  return o;
}

Outcome run_bounds(int n, int k, int l, bool closed, bool range, const std::string& format) {
  Outcome o;
  o.parameters = Json{{"n", n}, {"k", k}, {"l", l}, {"closed", closed}, {"range", range}, {"format", format}};
  std::vector<BoundsResult> rows;
  if (range) {
    if (n < 1 || k < 0 || l < 0) throw UsageError("--range needs n >= 1 and k, l >= 0");
    rows = bounds_grid(n, k, l, closed);
  } else {
    rows.push_back(bounds_table(n, k, l, closed));
  }
  if (range) {
    o.results["rows"] = Json::array();
    for (const auto& r : rows) o.results["rows"].push_back(to_json(r));
  } else {
    o.results = to_json(rows.front());
  }
  if (format == "table") o.text = format_bounds_table(rows);
  return o;
}

Outcome run_certify(const std::optional<std::string>& simple, const std::optional<std::string>& dbl,
                    const std::optional<std::string>& poly, const std::string& basis, double lower, double upper) {
  Outcome o;
  o.parameters = Json{{"simple", simple ? Json(*simple) : Json()}, {"double", dbl ? Json(*dbl) : Json()},
                      {"poly", poly ? Json(*poly) : Json()},       {"basis", basis},
                      {"lower", number_json(lower)},               {"upper", number_json(upper)}};
  if (poly && (simple || dbl)) throw UsageError("--poly cannot be combined with --simple/--double");
  if (poly) {
    const std::vector<Rational> c = parse_rational_list(*poly);
    if (c.empty()) throw UsageError("--poly needs at least one coefficient");
    int count = 0, bound = 0;
    if (basis == "trig") {
      if (c.size() % 2 != 1) throw UsageError("a trigonometric polynomial needs 2h+1 coefficients a0,a1,b1,...");
      count = count_trig_roots(c);
      bound = static_cast<int>(c.size()) - 1;
    } else {
      count = count_monomial_roots(c, RootDomain{lower, upper});
      bound = static_cast<int>(c.size()) - 1;
    }
    o.results = Json{{"basis", basis}, {"coefficients", rational_list_json(c)}, {"roots_with_multiplicity", count}, {"bound", bound}};
    o.exit_code = count <= bound ? kExitOk : kExitViolation;
    return o;
  }
  if (!simple && !dbl) throw UsageError("certify needs --simple/--double or --poly");
  const std::vector<Rational> s = simple ? parse_rational_list(*simple) : std::vector<Rational>{};
  const std::vector<Rational> d = dbl ? parse_rational_list(*dbl) : std::vector<Rational>{};
  const VandermondeCertificate cert = confluent_vandermonde_certificate(s, d);
  o.results = to_json(cert);
  o.results["simple_nodes"] = rational_list_json(s);
  o.results["double_nodes"] = rational_list_json(d);
  o.exit_code = cert.determinant != 0 ? kExitOk : kExitViolation;
  return o;
}

Outcome run_reduce(const std::string& map, int k, int l, int target, long long budget, int retries, std::uint64_t seed, double tol,
                   double delta, int search_restarts, int search_iters, unsigned threads) {
  Outcome o;
  o.seed = seed;
  o.parameters = Json{{"map", map},     {"k", k},         {"l", l},     {"target", target},
                      {"budget", budget}, {"retries", retries}, {"seed", seed}, {"tol", tol},
                      {"delta", delta}, {"search_restarts", search_restarts}, {"search_iters", search_iters}};
  require_kl(k, l);
  if (budget < 1) throw UsageError("--budget must be at least 1");
  if (retries < 1) throw UsageError("--retries must be at least 1");
  const EmbeddingSpec spec = parse_map(map);
  ReduceOptions opt;
  opt.max_retries = retries;
  opt.seed = seed;
  opt.budget = budget;
  opt.tol = tol;
  opt.delta_min = delta;
  opt.search_restarts = search_restarts;
  opt.search_iters = search_iters;
  opt.threads = threads;
  o.results = to_json(reduce_dimension(spec, k, l, target, opt));
  return o;
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::ReductionFailed:
    case ErrorKind::StepRejected:
    case ErrorKind::ProjectionSingularity:
      return kExitFailure;
    default:
      return kExitUsage;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Regular embeddings toolkit: verification, search, bounds, certificates, reduction", "regemb"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version()));

  std::string map, config_path, out_path, tangent = "line", format = "json", basis = "monomial";
  std::optional<int> vk, vl;
  int k = 0, l = 0, n = 1, restarts = 10, iters = 1000, target = 0, retries = 32, search_restarts = 4, search_iters = 100;
  long long samples = 1000, budget = 10000;
  std::uint64_t seed = 0;
  double tol = kDefaultRankTolerance, delta_verify = 1e-3, delta_search = 1e-2, delta_reduce = 1e-3;
  double lower = -std::numeric_limits<double>::infinity(), upper = std::numeric_limits<double>::infinity();
  std::optional<double> box;
  std::optional<std::string> simple, dbl, poly;
  bool closed = false, range = false;
  unsigned threads = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "random seed")->capture_default_str();
    sub->add_option("--tol", tol, "relative rank tolerance")->capture_default_str();
    sub->add_option("--threads", threads, "worker threads (0: hardware concurrency)")->capture_default_str();
  };

  auto* verify = app.add_subcommand("verify", "check (k,l)-regularity on a configuration file or random samples");
  verify->add_option("--map", map, "map descriptor")->required();
  verify->add_option("--k", vk, "through points");
  verify->add_option("--l", vl, "tangency points");
  auto* config_opt = verify->add_option("--config", config_path, "configuration CSV")->check(CLI::ExistingFile);
  verify->add_option("--samples", samples, "random configurations")->capture_default_str()->excludes(config_opt);
  verify->add_option("--delta", delta_verify, "minimum point separation")->capture_default_str();
  verify->add_option("--tangent", tangent, "line or space")->check(CLI::IsMember({"line", "space"}))->capture_default_str();
  verify->add_option("--out", out_path, "also write the JSON report here");
  common(verify);

  auto* search = app.add_subcommand("search", "adversarial search for a violating configuration");
  search->add_option("--map", map, "map descriptor")->required();
  search->add_option("--k", k, "through points")->required();
  search->add_option("--l", l, "tangency points")->required();
  search->add_option("--restarts", restarts)->capture_default_str()->check(CLI::PositiveNumber);
  search->add_option("--iters", iters)->capture_default_str()->check(CLI::PositiveNumber);
  search->add_option("--box", box, "half-width of the parameter box")->check(CLI::PositiveNumber);
  search->add_option("--delta", delta_search, "minimum point separation")->capture_default_str();
  search->add_option("--out", out_path, "also write the JSON report here");
  common(search);

  auto* bounds = app.add_subcommand("bounds", "dimension bounds");
  bounds->add_option("--n", n, "manifold dimension")->required();
  bounds->add_option("--k", k, "through points")->required();
  bounds->add_option("--l", l, "tangency points")->required();
  bounds->add_flag("--closed", closed, "closed manifold");
  bounds->add_flag("--range", range, "grid over 1..n, 0..k, 0..l");
  bounds->add_option("--format", format)->check(CLI::IsMember({"json", "table"}))->capture_default_str();
  bounds->add_option("--out", out_path, "also write the JSON report here");

  auto* certify = app.add_subcommand("certify", "exact confluent Vandermonde determinant or root count");
  certify->add_option("--simple", simple, "simple nodes p/q,...");
  certify->add_option("--double", dbl, "double nodes p/q,...");
  certify->add_option("--poly", poly, "coefficients, constant term first (trig: a0,a1,b1,...)");
  certify->add_option("--basis", basis)->check(CLI::IsMember({"monomial", "trig"}))->capture_default_str();
  certify->add_option("--lower", lower, "monomial roots: lower end");
  certify->add_option("--upper", upper, "monomial roots: upper end");
  certify->add_option("--out", out_path, "also write the JSON report here");

  auto* reduce = app.add_subcommand("reduce", "reduce the target dimension by central projections");
  reduce->add_option("--map", map, "map descriptor")->required();
  reduce->add_option("--k", k, "through points")->required();
  reduce->add_option("--l", l, "tangency points")->required();
  reduce->add_option("--target", target, "target dimension")->required();
  reduce->add_option("--budget", budget, "validation samples per step")->capture_default_str();
  reduce->add_option("--retries", retries, "centers tried per step")->capture_default_str();
  reduce->add_option("--delta", delta_reduce, "minimum point separation in validation")->capture_default_str();
  reduce->add_option("--search-restarts", search_restarts, "restarts of the search run after each validation (0 skips it)")->capture_default_str();
  reduce->add_option("--search-iters", search_iters, "iterations per search restart")->capture_default_str();
  reduce->add_option("--out", out_path, "also write the JSON report here");
  common(reduce);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  std::string command;
  try {
    if (*verify) {
      command = "verify";
      o = run_verify(map, vk, vl, config_path, samples, seed, tol, delta_verify, tangent, threads);
    } else if (*search) {
      command = "search";
      o = run_search(map, k, l, restarts, iters, box, seed, tol, delta_search, threads);
    } else if (*bounds) {
      command = "bounds";
      o = run_bounds(n, k, l, closed, range, format);
    } else if (*certify) {
      command = "certify";
      o = run_certify(simple, dbl, poly, basis, lower, upper);
    } else {
      command = "reduce";
      o = run_reduce(map, k, l, target, budget, retries, seed, tol, delta_reduce, search_restarts, search_iters, threads);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitFailure;
  }
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);

  Json report{{"command", command}, {"parameters", o.parameters}, {"results", o.results},
              {"seed", o.seed},     {"wall_time_ms", elapsed.count()}, {"version", version()}};
  const std::string text = report.dump(2);
  if (o.text) {
    out << *o.text;
  } else {
    out << text << '\n';
  }
  if (!out_path.empty()) {
    std::ofstream file(out_path);
    if (!file) {
      err << "error: cannot write " << out_path << '\n';
      return kExitUsage;
    }
    file << text << '\n';
  }
  return o.exit_code;
}

}  // namespace regemb
