#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <functional>
#include <string>

#include <json.hpp>

#include "advecta/errors.hpp"
#include "advecta/scenario.hpp"

using namespace advecta;
using nlohmann::json;

namespace {

json minimal_scalar() {
    return json::parse(R"({
        "name": "minimal",
        "n": 1,
        "t0": 0.0,
        "T": 1.0,
        "dt": 0.01,
        "terms": [{"A": [["0.5"]], "h": "0.1"}],
        "x0": [1.0]
    })");
}

std::string error_message(const std::function<void()>& fn, ErrorKind expect) {
    try {
        fn();
    } catch (const Error& e) {
        CHECK(e.kind() == expect);
        return e.what();
    }
    FAIL("expected an Error");
    return {};
}

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("minimal scalar scenario loads with defaults") {
    const Scenario sc = scenario_from_json(minimal_scalar());
    CHECK(sc.name == "minimal");
    CHECK(sc.n == 1);
    CHECK(sc.terms.size() == 1);
    CHECK(sc.lookahead_depth == 3);
    CHECK(sc.extension == ExtensionPolicy::HoldLastValue);
    CHECK(sc.L == 1.0);
    CHECK(sc.tol == 1e-8);
    CHECK(sc.max_iter == 200);
    CHECK(sc.phi_threshold == 1e-6);
    CHECK_FALSE(sc.has_sweep());

    const AdvancedSystem sys = sc.system();
    CHECK(sys.dim() == 1);
    CHECK(sys.num_terms() == 1);
    CHECK(sys.coefficient(0, 0.0)(0, 0) == 0.5);
}

TEST_CASE("negative advance is rejected at validation with the term index") {
    json doc = minimal_scalar();
    doc["terms"][0]["h"] = "-1";
    const std::string msg =
        error_message([&] { scenario_from_json(doc); }, ErrorKind::NegativeAdvance);
    CHECK(msg.find("terms[0]") != std::string::npos);
}

TEST_CASE("broken coefficient expression names the entry") {
    json doc = minimal_scalar();
    doc["terms"][0]["A"][0][0] = "2*+t";
    const std::string msg =
        error_message([&] { scenario_from_json(doc); }, ErrorKind::SyntaxError);
    CHECK(msg.find("terms[0].A[0][0]") != std::string::npos);
}

TEST_CASE("schema violations carry a JSON pointer") {
    json doc = minimal_scalar();
    doc.erase("t0");
    CHECK(error_message([&] { scenario_from_json(doc); }, ErrorKind::SchemaError).find("/t0") !=
          std::string::npos);

    doc = minimal_scalar();
    doc["x0"] = {1.0, 2.0};
    CHECK(error_message([&] { scenario_from_json(doc); }, ErrorKind::SchemaError).find("/x0") !=
          std::string::npos);

    doc = minimal_scalar();
    doc["terms"][0]["A"] = json::array({json::array({"0.5", "0.1"})});
    CHECK(error_message([&] { scenario_from_json(doc); }, ErrorKind::SchemaError)
              .find("/terms/0/A") != std::string::npos);

    doc = minimal_scalar();
    doc["dt"] = 0.3;  // (T - t0)/dt not an integer
    CHECK(error_message([&] { scenario_from_json(doc); }, ErrorKind::SchemaError).find("/dt") !=
          std::string::npos);

    doc = minimal_scalar();
    doc["extension"] = "both";
    CHECK(error_message([&] { scenario_from_json(doc); }, ErrorKind::SchemaError)
              .find("/extension") != std::string::npos);

    doc = minimal_scalar();
    doc["schema_version"] = 2;
    CHECK(error_message([&] { scenario_from_json(doc); }, ErrorKind::SchemaError)
              .find("/schema_version") != std::string::npos);

    doc = minimal_scalar();
    doc["unknown_knob"] = 1;
    CHECK(error_message([&] { scenario_from_json(doc); }, ErrorKind::SchemaError)
              .find("/unknown_knob") != std::string::npos);

    doc = minimal_scalar();
    doc["terms"][0]["delay"] = "0.1";
    CHECK(error_message([&] { scenario_from_json(doc); }, ErrorKind::SchemaError)
              .find("/terms/0/delay") != std::string::npos);
}

TEST_CASE("sweep block is validated and ordered") {
    json doc = minimal_scalar();
    doc["terms"][0]["A"][0][0] = "gain";
    doc["terms"][0]["h"] = "lag";
    doc["sweep"]["gain"] = {0.1, 0.2};
    doc["sweep"]["lag"] = {0.0, 0.3};
    const Scenario sc = scenario_from_json(doc);
    REQUIRE(sc.sweep.size() == 2);
    CHECK(sc.sweep[0].first == "gain");
    CHECK(sc.sweep[1].first == "lag");

    const Scenario bound = substitute(sc, {{"gain", 0.5}, {"lag", 0.25}});
    CHECK_FALSE(bound.has_sweep());
    CHECK(bound.system().coefficient(0, 0.0)(0, 0) == 0.5);
    CHECK(bound.system().advance(0, 0.0) == 0.25);
}

TEST_CASE("sweep names cannot shadow builtins") {
    json doc = minimal_scalar();
    doc["sweep"]["sin"] = {1.0};
    CHECK(error_message([&] { scenario_from_json(doc); }, ErrorKind::SchemaError)
              .find("/sweep/sin") != std::string::npos);
}

TEST_CASE("substitution only replaces whole identifiers") {
    json doc = minimal_scalar();
    doc["terms"][0]["A"][0][0] = "gain*t + gain2";
    doc["sweep"]["gain"] = {2.0};
    doc["sweep"]["gain2"] = {5.0};
    const Scenario sc = scenario_from_json(doc);
    const Scenario bound = substitute(sc, {{"gain", 2.0}, {"gain2", 5.0}});
    CHECK(bound.system().coefficient(0, 3.0)(0, 0) == 11.0);
}

TEST_CASE("load_scenario reads files and reports bad JSON") {
    const auto dir = std::filesystem::temp_directory_path() / "advecta_scenario_test";
    std::filesystem::create_directories(dir);

    const auto good = dir / "good.json";
    std::ofstream(good) << minimal_scalar().dump();
    CHECK(load_scenario(good).name == "minimal");

    const auto bad = dir / "bad.json";
    std::ofstream(bad) << "{ not json";
    CHECK(error_message([&] { load_scenario(bad); }, ErrorKind::SchemaError).find("bad.json") !=
          std::string::npos);

    CHECK_THROWS_AS(load_scenario(dir / "missing.json"), Error);
}

TEST_CASE("shipped schema file parses and pins the contract") {
    const std::filesystem::path schema_path =
        std::filesystem::path(ADVECTA_SOURCE_DIR) / "schemas" / "scenario-v1.schema.json";
    std::ifstream in(schema_path);
    REQUIRE(in.good());
    json schema;
    in >> schema;
    CHECK(schema.at("title") == "advecta scenario");
    const auto& required = schema.at("required");
    for (const char* key : {"name", "n", "t0", "T", "dt", "terms", "x0"}) {
        CHECK(std::find(required.begin(), required.end(), json(key)) != required.end());
    }
}

}  // TEST_SUITE
