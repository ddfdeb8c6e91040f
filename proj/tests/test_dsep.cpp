#include <doctest.h>

#include "oracle/path_oracle.hpp"
#include "pathdep/dsep.hpp"
#include "pathdep/random.hpp"
#include "support.hpp"

using namespace pathdep;

namespace {

VertexSet random_subset(const Dag& g, Rng& rng, double p) {
    VertexSet out;
    for (Vertex v : g.vertices()) {
        if (rng.coin(p)) out.insert(v);
    }
    return out;
}

}  // namespace

TEST_SUITE("dsep") {

TEST_CASE("active paths") {
    const Dag f = fixture::fork3();
    const Path p = unique_path(f, f.at("A"), f.at("C"));
    CHECK(is_active_path(f, p, {}));
    CHECK_FALSE(is_active_path(f, p, fixture::set(f, {"X"})));
    CHECK_CODE(is_active_path(f, p, fixture::set(f, {"A"})), ErrorCode::EndpointConditioned);

    const Dag k = fixture::collider();
    const Path q = unique_path(k, k.at("A"), k.at("C"));
    CHECK(is_active_path(k, q, fixture::set(k, {"Z"})));
    CHECK_FALSE(is_active_path(k, q, {}));
}

TEST_CASE("separation queries on the fixtures") {
    const Dag f = fixture::fork3();
    CHECK(d_separated(f, {fixture::set(f, {"A"}), fixture::set(f, {"C"}), fixture::set(f, {"X"})}));
    CHECK_FALSE(d_separated(f, {fixture::set(f, {"A"}), fixture::set(f, {"C"}), {}}));

    const Dag k = fixture::collider();
    const VertexSet a = fixture::set(k, {"A"}), c = fixture::set(k, {"C"});
    CHECK(d_separated(k, {a, c, {}}));
    CHECK_FALSE(d_separated(k, {a, c, fixture::set(k, {"Z"})}));
    CHECK_FALSE(d_separated(k, {a, c, fixture::set(k, {"X"})}));

    CHECK_CODE(d_separated(k, {a, a, {}}), ErrorCode::OverlappingSets);
    CHECK_CODE(d_separated(k, {{}, c, {}}), ErrorCode::OverlappingSets);
    CHECK_CODE(d_separated(k, {a, c, a}), ErrorCode::OverlappingSets);
    CHECK_CODE(d_separated_polytree(fixture::diamond(), {{Vertex{0}}, {Vertex{2}}, {}}), ErrorCode::NotSinglyConnected);
}

TEST_CASE("polytree routine matches path enumeration") {
    Rng rng(41);
    for (int t = 0; t < 300; ++t) {
        const Dag g = random_polytree(rng.between(2, 10), rng);
        std::vector<Vertex> vs = g.vertices();
        rng.shuffle(vs);
        const VertexSet x{vs[0]}, y{vs[1]};
        VertexSet z;
        for (std::size_t i = 2; i < vs.size(); ++i) {
            if (rng.coin(0.3)) z.insert(vs[i]);
        }
        const bool expected = oracle::d_separated(g, x, y, z);
        CHECK(d_separated_polytree(g, {x, y, z}) == expected);
        CHECK(d_separated_general(g, {x, y, z}) == expected);
    }
}

TEST_CASE("general routine matches path enumeration on multiply connected graphs") {
    Rng rng(43);
    for (int t = 0; t < 200; ++t) {
        Dag g = random_polytree(rng.between(3, 8), rng);
        for (int extra = 0; extra < 2; ++extra) {
            const Vertex u{static_cast<std::uint32_t>(rng.below(g.size()))};
            const Vertex v{static_cast<std::uint32_t>(rng.below(g.size()))};
            if (u == v || g.adjacent(u, v)) continue;
            const bool forward = g.topo_rank(u) < g.topo_rank(v);
            g = forward ? g.with_edge(u, v) : g.with_edge(v, u);
        }
        VertexSet pool = random_subset(g, rng, 1.0);
        std::vector<Vertex> vs(pool.begin(), pool.end());
        rng.shuffle(vs);
        const VertexSet x{vs[0]}, y{vs[1], vs[2]};
        VertexSet z;
        for (std::size_t i = 3; i < vs.size(); ++i) {
            if (rng.coin(0.4)) z.insert(vs[i]);
        }
        CHECK(d_separated(g, {x, y, z}) == oracle::d_separated(g, x, y, z));
    }
}

TEST_CASE("subgraph equivalence along a path") {
    const Dag f = fixture::fork();
    CHECK(lemma52_equiv_check(f, f.at("A"), f.at("Z"), 100, 1).empty());
    const Dag e = Dag::build({"A", "B"}, {{"A", "B"}});
    CHECK(lemma52_equiv_check(e, e.at("A"), e.at("B"), 20, 1).empty());
    Rng rng(47);
    for (int t = 0; t < 30; ++t) {
        const Dag g = random_polytree(rng.between(3, 10), rng);
        CHECK(lemma52_equiv_check(g, Vertex{0}, Vertex{static_cast<std::uint32_t>(g.size() - 1)}, 30, t).empty());
    }
}

TEST_CASE("faithfulness probe") {
    const Dag f = fixture::fork();
    const GaussianParams u = GaussianParams::unit(f);
    CHECK(faithfulness_probe(f, u, f.at("A"), f.at("C"), fixture::set(f, {"X"})));
    CHECK(faithfulness_probe(f, u, f.at("A"), f.at("C"), fixture::set(f, {"Z'"})));
    const Dag k = fixture::collider();
    CHECK(faithfulness_probe(k, GaussianParams::unit(k), k.at("A"), k.at("C"), {}));
}

}  // TEST_SUITE
