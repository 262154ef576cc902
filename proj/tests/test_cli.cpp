#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "regemb/cli.hpp"

using namespace regemb;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json report(const Run& r) {
  auto j = nlohmann::json::parse(r.out);
  j.erase("wall_time_ms");
  return j;
}

}  // namespace

TEST_CASE("verify exit codes") {
  CHECK(run({"verify", "--map", "moment:3", "--k", "2", "--l", "1", "--samples", "10000", "--seed", "7"}).code == kExitOk);
  const Run bad = run({"verify", "--map", "trig:1", "--k", "0", "--l", "2", "--samples", "100"});
  REQUIRE(bad.code == kExitViolation);
  const auto j = nlohmann::json::parse(bad.out);
  CHECK(j["command"] == "verify");
  CHECK(j["results"].contains("violation"));
  CHECK(run({"verify", "--map", "moment:3", "--k", "0", "--l", "0"}).code == kExitUsage);
  CHECK(run({"verify", "--map", "nonsense:3", "--k", "1", "--l", "0"}).code == kExitUsage);
  CHECK(run({"verify", "--map", "moment:3", "--k", "1", "--l", "0", "--config", "/nonexistent.csv"}).code == kExitUsage);
}

TEST_CASE("search exit codes") {
  CHECK(run({"search", "--map", "trunc:3:trig:2", "--k", "2", "--l", "1", "--restarts", "10", "--iters", "1000"}).code ==
        kExitViolation);
  CHECK(run({"search", "--map", "moment:4", "--k", "3", "--l", "1", "--restarts", "20", "--iters", "2000"}).code == kExitOk);
  CHECK(run({"search", "--map", "moment:4", "--l", "1"}).code == kExitUsage);
}

TEST_CASE("bounds reports") {
  auto exact = [](std::vector<std::string> args) {
    const Run r = run(args);
    REQUIRE(r.code == kExitOk);
    return nlohmann::json::parse(r.out)["results"]["exact"]["value"].get<int>();
  };
  CHECK(exact({"bounds", "--n", "1", "--k", "0", "--l", "2", "--closed"}) == 4);
  CHECK(exact({"bounds", "--n", "1", "--k", "3", "--l", "1"}) == 4);
  CHECK(exact({"bounds", "--n", "2", "--k", "0", "--l", "2"}) == 6);
  const Run table = run({"bounds", "--n", "2", "--k", "1", "--l", "1", "--range", "--format", "table"});
  CHECK(table.code == kExitOk);
  CHECK(table.out.find('\n') != std::string::npos);
  CHECK(run({"bounds", "--n", "0", "--k", "1", "--l", "1"}).code == kExitUsage);
  CHECK(run({"bounds", "--n", "1", "--k", "1", "--l", "1", "--format", "xml"}).code == kExitUsage);
}

TEST_CASE("certify") {
  const Run det = run({"certify", "--simple", "1", "--double", "0"});
  REQUIRE(det.code == kExitOk);
  const auto d = nlohmann::json::parse(det.out)["results"]["determinant"].get<std::string>();
  CHECK((d == "1" || d == "-1"));
  const Run roots = run({"certify", "--poly", "0,-1,1", "--basis", "monomial"});
  REQUIRE(roots.code == kExitOk);
  CHECK(nlohmann::json::parse(roots.out)["results"]["roots_with_multiplicity"] == 2);
  CHECK(run({"certify", "--simple", "1,1", "--double", "0"}).code == kExitUsage);
  CHECK(run({"certify", "--simple", "1/3,x", "--double", "0"}).code == kExitUsage);
}

TEST_CASE("reduce") {
  CHECK(run({"reduce", "--map", "tensor:moment:2,moment:2", "--k", "1", "--l", "1", "--target", "7", "--budget", "2000"}).code ==
        kExitOk);
  CHECK(run({"reduce", "--map", "tensor:moment:2,moment:2", "--k", "1", "--l", "1", "--target", "3"}).code == kExitUsage);
  CHECK(run({"reduce", "--map", "tensor:moment:2,moment:2", "--k", "1", "--l", "1", "--target", "7", "--budget", "0"}).code ==
        kExitUsage);
  CHECK(run({"reduce", "--map", "pad:4:trig:1", "--k", "0", "--l", "2", "--target", "5", "--budget", "50", "--retries", "2"})
            .code == kExitFailure);
}

TEST_CASE("reports are reproducible apart from timing") {
  const std::vector<std::vector<std::string>> commands = {
      {"verify", "--map", "moment:3", "--k", "2", "--l", "1", "--samples", "500", "--seed", "3", "--threads", "1"},
      {"search", "--map", "moment:3", "--k", "2", "--l", "1", "--restarts", "3", "--iters", "100", "--seed", "5"},
      {"bounds", "--n", "2", "--k", "1", "--l", "1", "--range"},
      {"certify", "--simple", "1/2,3", "--double", "-1"},
      {"reduce", "--map", "tensor:moment:2,moment:2", "--k", "1", "--l", "1", "--target", "7", "--budget", "500"},
  };
  for (const auto& c : commands) {
    const Run a = run(c);
    const Run b = run(c);
    CHECK(a.code == b.code);
    const auto ja = report(a), jb = report(b);
    CHECK(ja.dump() == jb.dump());
    CHECK(ja.contains("version"));
    CHECK(ja.contains("seed"));
    CHECK(ja.contains("parameters"));
  }
  // thread count does not change the verdict
  auto one = report(run({"verify", "--map", "moment:3", "--k", "2", "--l", "1", "--samples", "500", "--seed", "3", "--threads", "1"}));
  auto four = report(run({"verify", "--map", "moment:3", "--k", "2", "--l", "1", "--samples", "500", "--seed", "3", "--threads", "4"}));
  CHECK(one["results"].dump() == four["results"].dump());
}
