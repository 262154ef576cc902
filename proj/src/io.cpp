#include "regemb/io.hpp"

#include <cmath>

namespace regemb {

Json number_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

Json vector_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number_json(v[i]));
  return a;
}

Json to_json(const Configuration& c) {
  Json j;
  j["through_points"] = Json::array();
  for (const auto& p : c.through_points) j["through_points"].push_back(vector_json(p));
  j["tangency_points"] = Json::array();
  for (const auto& p : c.tangency_points) j["tangency_points"].push_back(vector_json(p));
  j["directions"] = Json::array();
  for (const auto& g : c.directions) {
    Json group = Json::array();
    for (const auto& u : g) group.push_back(vector_json(u));
    j["directions"].push_back(group);
  }
  return j;
}

Json to_json(const RankReport& r) {
  return Json{{"rank", r.rank},     {"columns", r.columns},          {"margin", number_json(r.margin)},
              {"scale", number_json(r.scale)}, {"tolerance", number_json(r.tolerance)}, {"exact", r.exact}};
}

Json to_json(const Hyperplane& h) { return Json{{"normal", vector_json(h.normal)}, {"offset", number_json(h.offset)}}; }

Json to_json(const RegularityVerdict& v) {
  Json j{{"regular", v.regular}, {"rank_report", to_json(v.rank_report)}, {"configuration", to_json(v.configuration)}};
  j["hyperplane_witness"] = v.hyperplane_witness ? to_json(*v.hyperplane_witness) : Json();
  return j;
}

Json to_json(const SearchReport& r) {
  return Json{{"best_margin", number_json(r.best_margin)},
              {"best_scale", number_json(r.best_scale)},
              {"best_configuration", to_json(r.best_configuration)},
              {"iterations_used", r.iterations_used},
              {"evaluations", r.evaluations},
              {"restarts", r.restarts},
              {"samples", r.samples},
              {"violations", r.violations},
              {"seed", r.seed},
              {"converged", r.converged}};
}

Json to_json(const BoundsResult& b) {
  auto opt = [](const std::optional<int>& v) { return v ? Json(*v) : Json(); };
  Json j{{"n", b.n},
         {"k", b.k},
         {"l", b.l},
         {"closed", b.closed},
         {"lower_count", b.lower_count},
         {"lower_main", b.lower_main},
         {"lower_closed", opt(b.lower_closed)},
         {"upper_main", b.upper_main},
         {"brs_lower", opt(b.brs_lower)}};
  j["exact"] = b.exact ? Json{{"value", b.exact->value}, {"source", b.exact->source}} : Json();
  return j;
}

Json to_json(const VandermondeCertificate& c) {
  return Json{{"determinant", to_string(c.determinant)},
              {"product_formula", to_string(c.product_formula)},
              {"dimension", c.dimension},
              {"nonzero", c.determinant != 0}};
}

Json to_json(const ProjectionStep& s) {
  Json j{{"input_dim", s.input_dim},
         {"output_dim", s.output_dim},
         {"center", vector_json(s.center)},
         {"unit_center", vector_json(s.unit_center)},
         {"origin", vector_json(s.origin)},
         {"scale", number_json(s.scale)},
         {"target_hyperplane", to_json(s.target_hyperplane)}};
  j["validation"] = Json{{"min_margin", number_json(s.validation.best_margin)},
                         {"scale", number_json(s.validation.best_scale)},
                         {"samples", s.validation.samples},
                         {"violations", s.validation.violations},
                         {"seed", s.validation.seed}};
  if (s.search_check) {
    j["search_check"] = Json{{"min_margin", number_json(s.search_check->best_margin)},
                             {"scale", number_json(s.search_check->best_scale)},
                             {"restarts", s.search_check->restarts},
                             {"evaluations", s.search_check->evaluations},
                             {"seed", s.search_check->seed}};
  }
  return j;
}

Json to_json(const ReductionPlan& p) {
  Json j{{"start_spec", p.start_spec.describe()},
         {"final_spec", p.spec.describe()},
         {"k", p.k},
         {"l", p.l},
         {"start_dim", p.start_dim},
         {"target_dim", p.target_dim},
         {"final_dim", p.final_dim},
         {"budget", p.budget}};
  j["attempts"] = p.attempts;
  j["steps"] = Json::array();
  for (const auto& s : p.steps) j["steps"].push_back(to_json(s));
  return j;
}

}  // namespace regemb
