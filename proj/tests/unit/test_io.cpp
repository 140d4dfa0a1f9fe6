// Copyright (c) troprelu contributors.
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "../support/fixtures.hpp"
#include "troprelu/io.hpp"

using namespace troprelu;
using nlohmann::json;

namespace {

std::string data(const std::string& name) { return std::string(TROPRELU_DATA_DIR) + "/" + name; }

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised");
    return ErrorCode::internal;
}

bool same_network(const Network& a, const Network& b) {
    if (a.inputs() != b.inputs() || a.layers().size() != b.layers().size()) {
        return false;
    }
    for (std::size_t l = 0; l < a.layers().size(); ++l) {
        const auto& x = a.layers()[l];
        const auto& y = b.layers()[l];
        if (!(x.weights == y.weights) || x.bias != y.bias || x.relu != y.relu) {
            return false;
        }
    }
    return true;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        out.push_back(line);
    }
    return out;
}

} // namespace

TEST_CASE("fixture networks load as expected") {
    CHECK(same_network(parse_sherlock(data("running.nt")), fixture::running_network()));
    CHECK(same_network(parse_sherlock(data("running2.nt")), fixture::running2_network()));
    CHECK(same_network(parse_sherlock(data("multi.nt")), fixture::multi_network()));
    CHECK(same_network(parse_sherlock(data("krelu.nt")), fixture::krelu_network()));
}

TEST_CASE("serialised networks parse back unchanged") {
    for (const char* name : {"running.nt", "running2.nt", "multi.nt", "krelu.nt"}) {
        const Network net = parse_sherlock(data(name));
        const std::string text = serialize_sherlock(net);
        CHECK(same_network(parse_sherlock_text(text), net));
        CHECK(serialize_sherlock(parse_sherlock_text(text)) == text);
    }
    const Network linear = fixture::running_network(false);
    CHECK(same_network(parse_sherlock_text(serialize_sherlock(linear)), linear));
}

TEST_CASE("hidden layers and comments") {
    const Network net = parse_sherlock_text("# two inputs\n2\n1\n1\n2\n1\n0\n0\n0\n1\n0\n1\n1\n0.5\n");
    CHECK(net.inputs() == 2);
    REQUIRE(net.layers().size() == 2);
    CHECK(net.width(1) == 2);
    CHECK(net.layers()[0].relu);
    CHECK_FALSE(net.layers()[1].relu);
    CHECK(net.layers()[1].bias[0] == 0.5);
}

TEST_CASE("broken network files") {
    CHECK(code_of([] { (void)parse_sherlock(data("truncated.nt")); }) == ErrorCode::malformed);
    CHECK(code_of([] { (void)parse_sherlock(data("nonnumeric.nt")); }) == ErrorCode::malformed);
    CHECK(code_of([] { (void)parse_sherlock(data("trailing.nt")); }) == ErrorCode::malformed);
    CHECK(code_of([] { (void)parse_sherlock(data("empty.nt")); }) == ErrorCode::empty_input);
    CHECK(code_of([] { (void)parse_sherlock(data("missing.nt")); }) == ErrorCode::io);
    CHECK(code_of([] { (void)parse_sherlock_text("0\n1\n0\n"); }) != ErrorCode::internal);
}

TEST_CASE("trailing tokens are accepted in lenient mode") {
    const Network net = parse_sherlock(data("trailing.nt"), false);
    CHECK(net.inputs() == 2);
    CHECK(net.outputs() == 1);
}

TEST_CASE("spec files") {
    const SpecFile p1 = parse_spec(data("p1.json"));
    CHECK(p1.input_box == Box::uniform(2, -1, 1));
    REQUIRE(p1.assertions.size() == 1);
    CHECK(p1.assertions[0].name == "P1");
    CHECK(p1.assertions[0].out_coeffs == std::vector<double>{-1, 1});
    CHECK_FALSE(p1.assertions[0].restrict_box.has_value());
    const SpecFile p2 = parse_spec(data("p2.json"));
    CHECK(p2.assertions[0].constant == 0.5);
    CHECK(*p2.assertions[0].restrict_box == Box({{-0.25, 0.25}, {-1, 1}}));
    CHECK(parse_spec(data("box2.json")).assertions.empty());
}

TEST_CASE("spec defaults and errors") {
    const SpecFile s = parse_spec_text(R"({"input_box": [[0, 1]], "assertions": [{"in_coeffs": [1], "out_coeffs": [1]}]})");
    CHECK(s.assertions[0].name == "assertion1");
    CHECK(s.assertions[0].constant == 0);
    CHECK(code_of([] { (void)parse_spec_text("{"); }) == ErrorCode::malformed);
    CHECK(code_of([] { (void)parse_spec_text("{}"); }) == ErrorCode::malformed);
    CHECK(code_of([] { (void)parse_spec_text(R"({"input_box": [[0]]})"); }) == ErrorCode::malformed);
    CHECK(code_of([] { (void)parse_spec_text(R"({"input_box": [["a", 1]]})"); }) == ErrorCode::malformed);
    CHECK(code_of([] {
              (void)parse_spec_text(R"({"input_box": [[0, 1]], "assertions": [{"in_coeffs": [1]}]})");
          }) == ErrorCode::malformed);
}

TEST_CASE("subdivision strings") {
    const Box box = Box::uniform(3, 0, 1);
    const SubdivisionGrid g = parse_subdivision("x1:2, 3:4", box);
    CHECK(g.cells_along(0) == 2);
    CHECK(g.cells_along(1) == 1);
    CHECK(g.cells_along(2) == 4);
    CHECK(g.cuts[0] == std::vector<double>{0, 0.5, 1});
    CHECK(code_of([&] { (void)parse_subdivision("x4:2", box); }) == ErrorCode::bad_index);
    CHECK(code_of([&] { (void)parse_subdivision("x1=2", box); }) == ErrorCode::invalid_argument);
    CHECK(code_of([&] { (void)parse_subdivision("x1:0", box); }) == ErrorCode::invalid_argument);
    CHECK(code_of([&] { (void)parse_subdivision("x1:two", box); }) == ErrorCode::invalid_argument);
}

TEST_CASE("run and report") {
    const RunOutcome run = run_analysis(parse_sherlock(data("running.nt")), parse_spec(data("p2.json")), {});
    CHECK(run.unknown_count() == 1);
    const nlohmann::ordered_json j = nlohmann::ordered_json::parse(report_json(run));
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) {
        keys.push_back(k);
    }
    const std::vector<std::string> expected{"tool",   "version",        "network",    "config",  "input_box",
                                            "bounds", "outputs",        "variables",  "generators",
                                            "enclosing_zone", "assertions", "summary", "timings"};
    CHECK(keys == expected);
    CHECK(j["outputs"][0]["lo"] == 0.0);
    CHECK(j["outputs"][1]["hi"] == 3.0);
    CHECK(j["assertions"][0]["name"] == "P2");
    CHECK(j["assertions"][0]["status"] == "unknown");
    CHECK(j["assertions"][0]["minimum"].get<double>() == doctest::Approx(-0.5));
    CHECK(j["network"]["layer_sizes"] == json::array({2, 2}));
    CHECK_FALSE(json::parse(report_json(run, false)).contains("timings"));
}

TEST_CASE("report is deterministic without timings") {
    const Network net = parse_sherlock(data("multi.nt"));
    const SpecFile spec = parse_spec(data("box2.json"));
    const std::string a = report_json(run_analysis(net, spec, {}), false);
    const std::string b = report_json(run_analysis(net, spec, {}), false);
    CHECK(a == b);
}

TEST_CASE("report with a cut and external rows") {
    AnalysisOptions o;
    o.mode = ChainMode::external;
    const SpecFile spec = parse_spec(data("p2.json"));
    o.subdivision = parse_subdivision("x1:2", spec.input_box);
    const RunOutcome run = run_analysis(parse_sherlock(data("running.nt")), spec, o);
    CHECK(run.unknown_count() == 0);
    const json j = json::parse(report_json(run, false));
    CHECK(j.contains("external_rows"));
    CHECK(j["assertions"][0]["status"] == "verified");
    CHECK(j["assertions"][0]["cells"] == 2);
    CHECK(j["config"]["mode"] == "external");
}

TEST_CASE("run rejects a spec of the wrong size") {
    SpecFile spec;
    spec.input_box = Box::uniform(3, 0, 1);
    CHECK(code_of([&] { (void)run_analysis(fixture::running_network(), spec, {}); }) ==
          ErrorCode::dimension_mismatch);
}

TEST_CASE("csv of the output generators") {
    const RunOutcome run = run_analysis(parse_sherlock(data("running.nt")), parse_spec(data("box2.json")), {});
    const auto lines = lines_of(csv_text(run, {"y1", "y2"}));
    REQUIRE(!lines.empty());
    CHECK(lines[0] == "kind,y1,y2");
    std::vector<Point> gens;
    std::size_t corners = 0;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto first = lines[k].find(',');
        const auto second = lines[k].find(',', first + 1);
        const std::string kind = lines[k].substr(0, first);
        const double a = std::stod(lines[k].substr(first + 1, second - first - 1));
        const double b = std::stod(lines[k].substr(second + 1));
        if (kind == "generator") {
            gens.push_back({a, b});
        } else {
            CHECK(kind == "zone_corner");
            ++corners;
        }
    }
    CHECK(fixture::same_points(gens, {{0, 0}, {1, 1}, {0, 3}}));
    CHECK(corners >= 3);
    CHECK_THROWS_AS((void)csv_text(run, {"y9"}), Error);
}
