#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracle/rational_oracle.hpp"
#include "oracle/schur_oracle.hpp"
#include "pathdep/gaussian.hpp"
#include "pathdep/random.hpp"
#include "support.hpp"

using namespace pathdep;
using oracle::Rational;

namespace {

int idx(const Dag& g, const char* n) { return static_cast<int>(g.at(n).index); }

std::vector<int> idx(const Dag& g, std::initializer_list<const char*> names) {
    std::vector<int> out;
    for (const char* n : names) out.push_back(idx(g, n));
    return out;
}

}  // namespace

TEST_SUITE("gaussian") {

TEST_CASE("single vertex") {
    const Dag g = Dag::build({"V"}, {});
    const CovMatrix s = build_sigma(g, GaussianParams::unit(g));
    CHECK(s.size() == 1);
    CHECK(s(Vertex{0}, Vertex{0}) == 1.0);
}

TEST_CASE("fork covariance against the exact oracle") {
    const Dag g = fixture::fork();
    const GaussianParams p = GaussianParams::unit(g);
    const CovMatrix s = build_sigma(g, p);
    const oracle::RMatrix r = oracle::rational_sigma(g, p);
    CHECK(r[idx(g, "A")][idx(g, "A")] == 2);
    CHECK(r[idx(g, "A")][idx(g, "C")] == 1);
    CHECK(r[idx(g, "Z'")][idx(g, "Z'")] == 2);
    CHECK(r[idx(g, "Z")][idx(g, "Z")] == 3);
    CHECK(r[idx(g, "A")][idx(g, "Z")] == 1);
    for (Vertex u : g.vertices())
        for (Vertex v : g.vertices()) CHECK(s(u, v) == doctest::Approx(r[u.index][v.index].convert_to<double>()).epsilon(1e-15));
}

TEST_CASE("collider covariance against the exact oracle") {
    const Dag g = fixture::collider();
    const oracle::RMatrix r = oracle::rational_sigma(g, GaussianParams::unit(g));
    const CovMatrix s = build_sigma(g, GaussianParams::unit(g));
    CHECK(r[idx(g, "X")][idx(g, "X")] == 3);
    CHECK(r[idx(g, "A")][idx(g, "C")] == 0);
    CHECK(r[idx(g, "Z")][idx(g, "Z")] == 5);
    CHECK(s(g.at("X"), g.at("X")) == 3.0);
    CHECK(s(g.at("A"), g.at("C")) == 0.0);
    CHECK(s(g.at("Z"), g.at("Z")) == 5.0);
}

TEST_CASE("triangular solve matches the dense inverse on random models") {
    Rng rng(3);
    for (int t = 0; t < 200; ++t) {
        const Dag g = random_polytree(rng.between(1, 12), rng);
        const GaussianParams p = sample_params(g, rng);
        const CovMatrix s = build_sigma(g, p);
        const Eigen::MatrixXd d = oracle::dense_sigma(g, p);
        CHECK((s.matrix() - d).cwiseAbs().maxCoeff() <= 1e-10 * d.cwiseAbs().maxCoeff());
        CHECK(s.is_symmetric());
        CHECK(s.is_positive_definite());
    }
}

TEST_CASE("conditional covariance") {
    const Dag g = fixture::fork();
    const CovMatrix s = build_sigma(g, GaussianParams::unit(g));
    const Vertex a = g.at("A"), c = g.at("C");
    CHECK(cond_cov(s, a, c, VertexSet{}) == s(a, c));
    CHECK(std::abs(cond_cov(s, a, c, fixture::set(g, {"X"}))) <= 1e-15);
    const Rational exact = oracle::rational_cond_cov(oracle::rational_sigma(g, GaussianParams::unit(g)), idx(g, "A"),
                                                     idx(g, "C"), idx(g, {"Z"}));
    CHECK(exact == Rational(2, 3));
    CHECK(cond_cov(s, a, c, fixture::set(g, {"Z"})) == doctest::Approx(2.0 / 3).epsilon(1e-14));
}

TEST_CASE("recursion agrees with the Schur complement under permuted elimination orders") {
    Rng rng(17);
    for (int t = 0; t < 300; ++t) {
        const Dag g = random_polytree(rng.between(3, 12), rng);
        const GaussianParams p = sample_params(g, rng);
        const CovMatrix s = build_sigma(g, p);
        std::vector<Vertex> vs = g.vertices();
        rng.shuffle(vs);
        const Vertex a = vs[0], c = vs[1];
        std::vector<Vertex> order(vs.begin() + 2, vs.begin() + 2 + rng.below(vs.size() - 1));
        const Eigen::Matrix2d ref = oracle::schur_pair(s.matrix(), a.index, c.index, oracle::indices({order.begin(), order.end()}));
        for (int k = 0; k < 4; ++k) {
            rng.shuffle(order);
            const PairCovariance pc = cond_pair_cov(s, a, c, order);
            CHECK(pc.ac == doctest::Approx(ref(0, 1)).epsilon(1e-9).scale(std::sqrt(ref(0, 0) * ref(1, 1))));
            CHECK(pc.aa == doctest::Approx(ref(0, 0)).epsilon(1e-9));
            CHECK(pc.cc == doctest::Approx(ref(1, 1)).epsilon(1e-9));
        }
    }
}

TEST_CASE("partial correlations of the canonical families") {
    const Dag f = fixture::fork();
    const CovMatrix sf = build_sigma(f, GaussianParams::unit(f));
    const oracle::RMatrix rf = oracle::rational_sigma(f, GaussianParams::unit(f));
    const int a = idx(f, "A"), c = idx(f, "C");
    CHECK(oracle::rational_pcorr2(rf, a, c, idx(f, {"Z'"})) == Rational(1, 9));
    CHECK(oracle::rational_pcorr2(rf, a, c, idx(f, {"Z"})) == Rational(4, 25));
    CHECK(oracle::rational_pcorr2(rf, a, c, idx(f, {"X"})) == 0);
    CHECK(pcorr2(sf, f.at("A"), f.at("C"), fixture::set(f, {"Z'"})) == doctest::Approx(1.0 / 9).epsilon(1e-12));
    CHECK(pcorr2(sf, f.at("A"), f.at("C"), fixture::set(f, {"Z"})) == doctest::Approx(4.0 / 25).epsilon(1e-12));
    CHECK(pcorr2(sf, f.at("A"), f.at("C"), fixture::set(f, {"X"})) <= 1e-12);

    const Dag k = fixture::collider();
    const CovMatrix sk = build_sigma(k, GaussianParams::unit(k));
    const oracle::RMatrix rk = oracle::rational_sigma(k, GaussianParams::unit(k));
    CHECK(oracle::rational_pcorr2(rk, idx(k, "A"), idx(k, "C"), idx(k, {"X"})) == Rational(1, 4));
    CHECK(oracle::rational_pcorr2(rk, idx(k, "A"), idx(k, "C"), idx(k, {"Z'"})) == Rational(1, 9));
    CHECK(oracle::rational_pcorr2(rk, idx(k, "A"), idx(k, "C"), idx(k, {"Z"})) == Rational(1, 16));
    CHECK(pcorr2(sk, k.at("A"), k.at("C"), fixture::set(k, {"X"})) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(pcorr2(sk, k.at("A"), k.at("C"), fixture::set(k, {"Z'"})) == doctest::Approx(1.0 / 9).epsilon(1e-12));
    CHECK(pcorr2(sk, k.at("A"), k.at("C"), fixture::set(k, {"Z"})) == doctest::Approx(1.0 / 16).epsilon(1e-12));
    CHECK(pcorr2(sk, k.at("A"), k.at("C"), VertexSet{}) == 0.0);
}

TEST_CASE("pcorr2 stays in [0, 1]") {
    Rng rng(23);
    for (int t = 0; t < 200; ++t) {
        const Dag g = random_polytree(rng.between(2, 10), rng);
        const CovMatrix s = build_sigma(g, sample_params(g, rng));
        VertexSet given;
        for (Vertex v : g.vertices()) {
            if (v.index > 1 && rng.coin(0.4)) given.insert(v);
        }
        const double r = pcorr2(s, Vertex{0}, Vertex{1}, given);
        CHECK(r >= 0.0);
        CHECK(r <= 1.0);
    }
}

TEST_CASE("information proper") {
    CHECK(info_proper(0.0) == 0.0);
    CHECK(info_proper(0.25) == doctest::Approx(-0.5 * std::log(0.75)).epsilon(1e-15));
    CHECK_CODE(info_proper(1.0), ErrorCode::DomainError);
    CHECK_CODE(info_proper(-0.1), ErrorCode::DomainError);
}

TEST_CASE("parameter validation") {
    const Dag g = fixture::fork3();
    GaussianParams p = GaussianParams::unit(g);
    p.set_noise_variance(g.at("X"), 0.0);
    CHECK_CODE(p.validate(g), ErrorCode::NonpositiveVariance);
    CHECK_CODE(build_sigma(g, p), ErrorCode::NonpositiveVariance);

    GaussianParams q = GaussianParams::unit(g);
    q.set_coefficient(g.at("X"), g.at("A"), 0.0);
    CHECK_CODE(q.validate(g), ErrorCode::ZeroCoefficient);

    GaussianParams r;
    for (Vertex v : g.vertices()) r.set_noise_variance(v, 1.0);
    CHECK_CODE(r.validate(g), ErrorCode::MissingCoefficient);
}

TEST_CASE("conditioning errors") {
    const Dag g = fixture::fork();
    const CovMatrix s = build_sigma(g, GaussianParams::unit(g));
    CHECK_CODE(pcorr2(s, g.at("A"), g.at("C"), fixture::set(g, {"A"})), ErrorCode::OverlapError);
    CHECK_CODE(pcorr2(s, g.at("A"), g.at("A"), VertexSet{}), ErrorCode::SameVertex);
    CHECK_CODE(pcorr2(s, g.at("A"), Vertex{99}, VertexSet{}), ErrorCode::UnknownVertex);
}

}  // TEST_SUITE
