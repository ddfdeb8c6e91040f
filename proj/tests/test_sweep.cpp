#include <doctest.h>

#include <sstream>

#include "oracle/order_oracle.hpp"
#include "oracle/schur_oracle.hpp"
#include "pathdep/sweep.hpp"
#include "support.hpp"

using namespace pathdep;

namespace {

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        bool quoted = false;
        for (char ch : line) {
            if (ch == '"') {
                quoted = !quoted;
            } else if (ch == ',' && !quoted) {
                cells.push_back(cell);
                cell.clear();
            } else {
                cell += ch;
            }
        }
        cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST_SUITE("sweep") {

TEST_CASE("fork sweep rises toward the marginal value") {
    const SweepTable t = sweep_chain_length(FamilyKind::ForkChain, 2);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.anchor.rho2 <= 1e-12);
    CHECK(t.rows[0].rho2 == doctest::Approx(1.0 / 9).epsilon(1e-12));
    CHECK(t.rows[1].rho2 == doctest::Approx(4.0 / 25).epsilon(1e-12));
    CHECK(t.reference == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(t.trend == Trend::Increasing);
    CHECK(t.shape_ok());

    const SweepTable long_run = sweep_chain_length(FamilyKind::ForkChain, 40);
    CHECK(long_run.shape_ok());
    CHECK(long_run.rows.back().rho2 < 0.25);
    CHECK(long_run.rows.back().rho2 > 0.24);
}

TEST_CASE("collider sweep falls away from the value at the path") {
    const SweepTable t = sweep_chain_length(FamilyKind::ColliderTail, 2, 0);
    CHECK(t.anchor.rho2 == doctest::Approx(0.25).epsilon(1e-12));
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0].rho2 == doctest::Approx(1.0 / 9).epsilon(1e-12));
    CHECK(t.rows[1].rho2 == doctest::Approx(1.0 / 16).epsilon(1e-12));
    CHECK(t.trend == Trend::Decreasing);
    CHECK(t.approach == Approach::TowardPath);
    CHECK(t.shape_ok());
}

TEST_CASE("sweep edge cases") {
    const SweepTable one = sweep_chain_length(FamilyKind::DoubleSource, 1);
    CHECK(one.rows.size() == 1);
    CHECK(one.monotone);
    CHECK_CODE(sweep_chain_length(FamilyKind::ForkChain, 0), ErrorCode::DomainError);
    CHECK_CODE(sweep_chain_length(FamilyKind::ForkChain, 3, std::nullopt, {1.0, 0.0}), ErrorCode::NonpositiveVariance);
    for (FamilyKind k : kAllFamilyKinds) CHECK_MESSAGE(sweep_chain_length(k, 8).shape_ok(), to_string(k));
    CHECK(sweep_chain_length(FamilyKind::ForkChain, 6, std::nullopt, {0.5, 2.0}).shape_ok());
}

TEST_CASE("sweep CSV round-trips") {
    const SweepTable t = sweep_chain_length(FamilyKind::AnomalousChain, 4);
    std::ostringstream out;
    write_sweep_csv(out, t);
    const auto rows = read_csv(out.str());
    REQUIRE(rows.size() == t.rows.size() + 2);
    CHECK(rows[0] == std::vector<std::string>{"chain_length", "distance", "vertex", "rho2", "reference"});
    CHECK(rows[1][2] == t.anchor.vertex);
    CHECK(std::stod(rows[1][3]) == t.anchor.rho2);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        CHECK(std::stoul(rows[i + 2][0]) == t.rows[i].chain_length);
        CHECK(rows[i + 2][2] == t.rows[i].vertex);
        CHECK(std::stod(rows[i + 2][3]) == t.rows[i].rho2);
        CHECK(std::stod(rows[i + 2][4]) == t.reference);
    }
}

TEST_CASE("counterexample search finds a reversal off polytrees") {
    SearchConfig cfg;
    cfg.seed = 1;
    const SearchResult r = counterexample_search(cfg);
    REQUIRE(r.witness);
    const Witness& w = *r.witness;
    CHECK_FALSE(w.graph.singly_connected());
    CHECK(w.tree.singly_connected());
    CHECK(w.order_at_zero_holds);
    CHECK(!w.crossings.empty());
    CHECK(w.flips_below_zero + w.flips_above_zero > 0);

    // the pair is ordered on the tree by the definition itself
    CHECK(oracle::Order(w.tree, w.a, w.c).precedes(w.z1, w.z2));

    // re-evaluate one reversed grid point with the dense oracle
    bool checked = false;
    for (const SweepPoint& pt : w.sweep) {
        if (pt.rho2_z1 <= pt.rho2_z2 + kFlipMargin) continue;
        GaussianParams p = w.params;
        p.set_coefficient(w.swept.parent, w.swept.child, pt.coefficient);
        const Eigen::MatrixXd s = oracle::dense_sigma(w.graph, p);
        CHECK(oracle::schur_pcorr2(s, w.a.index, w.c.index, oracle::indices(w.z1)) ==
              doctest::Approx(pt.rho2_z1).epsilon(1e-9));
        CHECK(oracle::schur_pcorr2(s, w.a.index, w.c.index, oracle::indices(w.z2)) ==
              doctest::Approx(pt.rho2_z2).epsilon(1e-9));
        checked = true;
        break;
    }
    CHECK(checked);

    std::ostringstream out;
    write_witness_csv(out, w);
    const auto rows = read_csv(out.str());
    REQUIRE(rows.size() == w.sweep.size() + 1);
    CHECK(rows[0] == std::vector<std::string>{"coefficient", "rho2_z1", "rho2_z2", "difference"});
    CHECK(std::stod(rows[1][0]) == w.sweep[0].coefficient);
}

TEST_CASE("no reversal when the swept graph stays a polytree") {
    SearchConfig cfg;
    cfg.seed = 2;
    cfg.trials = 1000;
    cfg.polytree_only = true;
    const SearchResult r = counterexample_search(cfg);
    CHECK_FALSE(r.witness);
    CHECK(r.trials_run == 1000);
    CHECK(r.instances_swept > 0);
}

TEST_CASE("search configuration errors") {
    SearchConfig cfg;
    cfg.max_vertices = 2;
    CHECK_CODE(counterexample_search(cfg), ErrorCode::DomainError);
    cfg.max_vertices = 8;
    cfg.steps = 1;
    CHECK_CODE(counterexample_search(cfg), ErrorCode::DomainError);
    cfg.steps = 10;
    cfg.lo = 1;
    cfg.hi = -1;
    CHECK_CODE(counterexample_search(cfg), ErrorCode::DomainError);
}

}  // TEST_SUITE
