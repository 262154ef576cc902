#pragma once

#include <json.hpp>

#include "regemb/bounds.hpp"
#include "regemb/configuration.hpp"
#include "regemb/lift.hpp"
#include "regemb/reduction.hpp"
#include "regemb/search.hpp"
#include "regemb/verifier.hpp"

namespace regemb {

using Json = nlohmann::ordered_json;

// Non-finite doubles become the strings "inf", "-inf" and "nan".
Json number_json(double x);
Json vector_json(const Eigen::VectorXd& v);

Json to_json(const Configuration& c);
Json to_json(const RankReport& r);
Json to_json(const Hyperplane& h);
Json to_json(const RegularityVerdict& v);
Json to_json(const SearchReport& r);
Json to_json(const BoundsResult& b);
Json to_json(const VandermondeCertificate& c);
Json to_json(const ProjectionStep& s);
Json to_json(const ReductionPlan& p);

}  // namespace regemb
