#include <doctest.h>

#include <string>

#include "finsler/config.hpp"
#include "finsler/error.hpp"

using namespace finsler;
using nlohmann::json;

namespace {

std::string error_of(const json& j) {
  try {
    parse_config(j);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::input);
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal config takes the defaults") {
  const auto c = parse_config(json{{"schema_version", 1}});
  CHECK(c.N == 3);
  CHECK(c.criteria.empty());
  CHECK(c.format == "json");
}

TEST_CASE("schema violations name the offending path") {
  CHECK(error_of(json::object()).find("$.schema_version") != std::string::npos);
  CHECK(error_of(json{{"schema_version", 2}}).find("unsupported") != std::string::npos);
  CHECK(error_of(json{{"schema_version", 1}, {"tolerance", 1}}).find("$.tolerance") !=
        std::string::npos);
  CHECK(error_of(json{{"schema_version", 1}, {"tolerances", {{"equivalnce", 1e-6}}}})
            .find("$.tolerances.equivalnce") != std::string::npos);
  CHECK(error_of(json{{"schema_version", 1}, {"p", "two"}}).find("$.p") != std::string::npos);
  CHECK(error_of(json{{"schema_version", 1}, {"criteria", {1, 11}}}).find("$.criteria[1]") !=
        std::string::npos);
  CHECK(error_of(json{{"schema_version", 1}, {"families", {"sobolev", "nope"}}})
            .find("$.families[1]") != std::string::npos);
  CHECK(error_of(json{{"schema_version", 1}, {"norm", {{"kind", "weighted_lq"}, {"q", 0.5}, {"dim", 3}}}})
            .find("$.norm.q") != std::string::npos);
  CHECK(error_of(json{{"schema_version", 1}, {"output", {{"format", "xml"}}}})
            .find("$.output.format") != std::string::npos);
}

TEST_CASE("norm serialisation round-trips") {
  const json w = {{"kind", "weighted_lq"}, {"q", "inf"}, {"weights", {1.0, 2.0}}};
  const auto spec = parse_norm(w);
  CHECK(std::isinf(spec.q()));
  const auto back = parse_norm(norm_to_json(spec));
  CHECK(back.weights() == spec.weights());
  CHECK_THROWS_AS(parse_norm(json{{"kind", "quadratic"}, {"matrix", {{1, 2}, {2, 1}}}}), Error);
}

TEST_CASE("config round-trips through JSON") {
  json j = {{"schema_version", 1},
            {"norm", {{"kind", "euclidean"}, {"dim", 3}}},
            {"N", 4},
            {"p", 2.5},
            {"criteria", {1, 2}},
            {"tolerances", {{"extremal", 1e-4}}},
            {"seed", 17},
            {"workers", 2}};
  const auto c = parse_config(j);
  const auto d = parse_config(config_to_json(c));
  CHECK(config_to_json(d) == config_to_json(c));
  CHECK(d.tolerances.extremal == 1e-4);
  CHECK(d.seed == 17u);
}

TEST_CASE("missing config file is an input error") {
  try {
    load_config("/nonexistent/finsler.json");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::input);
  }
}
