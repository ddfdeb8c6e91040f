#include <doctest.h>

#include <fstream>
#include <sstream>

#include "pathdep/model_io.hpp"
#include "pathdep/random.hpp"
#include "support.hpp"

using namespace pathdep;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const std::string kData = PATHDEP_TEST_DATA;

}  // namespace

TEST_SUITE("model_io") {

TEST_CASE("fork model file") {
    const Model m = load_model(kData + "/fork.model");
    CHECK(m.dag.size() == 5);
    CHECK(m.dag.edges().size() == 4);
    CHECK(m.dag.has_edge(m.dag.at("Z'"), m.dag.at("Z")));
    CHECK(m.params.coefficient_at(m.dag.at("X"), m.dag.at("A")) == 1.0);
    CHECK(m.params.noise_variance_at(m.dag.at("Z")) == 1.0);
}

TEST_CASE("grammar details") {
    const Model m = parse_model("  # leading comment\n"
                                "node A   # trailing\n"
                                "node B\r\n"
                                "\n"
                                "edge A -> B -0.5e1\n"
                                "var A +2\n"
                                "var B 0.25");
    CHECK(m.params.coefficient_at(m.dag.at("A"), m.dag.at("B")) == -5.0);
    CHECK(m.params.noise_variance_at(m.dag.at("A")) == 2.0);
    CHECK(m.params.noise_variance_at(m.dag.at("B")) == 0.25);
}

TEST_CASE("parse errors carry codes and line numbers") {
    CHECK_CODE(parse_model("node A\nedge A -> B 1\nvar A 1\n"), ErrorCode::ParseError);
    CHECK_CODE(parse_model("node X\nvar X 0\n"), ErrorCode::NonpositiveVariance);
    CHECK_CODE(parse_model("node X\n"), ErrorCode::ParseError);
    CHECK_CODE(parse_model("node X\nvar X 1\nvar X 2\n"), ErrorCode::ParseError);
    CHECK_CODE(parse_model("node X\nnode X\n"), ErrorCode::DuplicateVertex);
    CHECK_CODE(parse_model("vertex X\n"), ErrorCode::ParseError);
    CHECK_CODE(parse_model("node X\nvar X one\n"), ErrorCode::ParseError);
    CHECK_CODE(parse_model("node A\nnode B\nedge A B 1\n"), ErrorCode::ParseError);
    CHECK_CODE(parse_model("node A\nnode B\nedge A -> B 1\nedge A -> B 2\nvar A 1\nvar B 1\n"), ErrorCode::ParseError);
    CHECK_CODE(parse_model("node A\nnode B\nedge A -> B 1\nedge B -> A 1\nvar A 1\nvar B 1\n"), ErrorCode::CycleError);
    CHECK_CODE(parse_model("node A\nnode B\nedge A -> B 0\nvar A 1\nvar B 1\n"), ErrorCode::ZeroCoefficient);
    CHECK_CODE(load_model(kData + "/missing.model"), ErrorCode::ParseError);
    try {
        parse_model("node A\nvar A 1\nedge A -> Q 1\n");
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("serialize round-trips exactly") {
    const std::string text = slurp(kData + "/collider.model");
    const Model m = parse_model(text);
    const Model back = parse_model(serialize_model(m.dag, m.params));
    CHECK(back.dag.names() == m.dag.names());
    CHECK(back.dag.edges() == m.dag.edges());
    CHECK(back.params.coefficients() == m.params.coefficients());

    Rng rng(107);
    for (int t = 0; t < 50; ++t) {
        const Dag g = random_polytree(rng.between(1, 12), rng);
        const GaussianParams p = sample_params(g, rng);
        const Model r = parse_model(serialize_model(g, p));
        CHECK(r.dag.edges() == g.edges());
        CHECK(r.params.coefficients() == p.coefficients());
        CHECK(r.params.noise_variances() == p.noise_variances());
    }
}

TEST_CASE("shortest number form") {
    CHECK(format_double(0.16) == "0.16");
    CHECK(format_double(1.0) == "1");
    CHECK(std::stod(format_double(1.0 / 3)) == 1.0 / 3);
}

}  // TEST_SUITE
