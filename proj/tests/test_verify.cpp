#include <doctest.h>

#include "oracle/order_oracle.hpp"
#include "oracle/schur_oracle.hpp"
#include "pathdep/suite.hpp"
#include "pathdep/verify.hpp"
#include "support.hpp"

using namespace pathdep;
using fixture::set;

TEST_SUITE("verify") {

TEST_CASE("lemma chains on unit parameters") {
    const Family fork = canonical_family(FamilyKind::ForkChain);
    const LemmaResult r = check_lemma(fork, GaussianParams::unit(fork.dag));
    CHECK(r.holds);
    REQUIRE(r.chain.size() == 3);
    CHECK(r.chain[0].rho2 <= 1e-12);
    CHECK(r.chain[1].rho2 == doctest::Approx(1.0 / 9).epsilon(1e-12));
    CHECK(r.chain[2].rho2 == doctest::Approx(4.0 / 25).epsilon(1e-12));

    const Family col = make_family(FamilyKind::ColliderTail, 2, 0);
    const LemmaResult c = check_lemma(col, GaussianParams::unit(col.dag));
    CHECK(c.holds);
    CHECK(c.chain.back().rho2 == doctest::Approx(1.0 / 16).epsilon(1e-12));

    for (FamilyKind k : kAllFamilyKinds) {
        const Family f = canonical_family(k);
        CHECK_MESSAGE(check_lemma(f, GaussianParams::unit(f.dag)).holds, to_string(k));
    }
}

TEST_CASE("fork lemma with a negative coefficient product") {
    const Family fork = canonical_family(FamilyKind::ForkChain);
    GaussianParams p = GaussianParams::unit(fork.dag);
    p.set_coefficient(fork.at("X"), fork.at("A"), -1.0);
    CHECK(check_lemma(fork, p).holds);
}

TEST_CASE("lemma chains on random parameters") {
    Rng rng(97);
    for (FamilyKind k : kAllFamilyKinds) {
        for (int t = 0; t < 40; ++t) {
            const Family f = make_family(k, rng.between(1, 3), k == FamilyKind::ForkChain ? 0 : rng.between(0, 3));
            const LemmaResult r = check_lemma(f, sample_family_params(f, rng));
            CHECK_MESSAGE(r.holds, to_string(k), " ", r.detail);
        }
    }
}

TEST_CASE("structural implication") {
    const Dag f = fixture::fork();
    CHECK(check_theorem1(f, f.at("A"), f.at("C"), set(f, {"X"}), set(f, {"X", "Z"})));
    CHECK(check_theorem1(f, f.at("A"), f.at("C"), set(f, {"Z'"}), set(f, {"Z"})));
    const Dag k = fixture::collider();
    CHECK(check_theorem1(k, k.at("A"), k.at("C"), set(k, {"Z"}), set(k, {"Z'"})));
    // the empty set is not ordered before {Z} under the clause rule
    CHECK_CODE(check_theorem1(k, k.at("A"), k.at("C"), {}, set(k, {"Z"})), ErrorCode::PrecedenceNotEstablished);
}

TEST_CASE("monotonicity") {
    const Dag f = fixture::fork();
    const Comparison a = check_monotonicity(f, GaussianParams::unit(f), f.at("A"), f.at("C"), set(f, {"Z'"}),
                                            set(f, {"Z"}));
    CHECK(a.holds);
    CHECK(a.lhs == doctest::Approx(1.0 / 9).epsilon(1e-12));
    CHECK(a.rhs == doctest::Approx(4.0 / 25).epsilon(1e-12));

    const Dag k = fixture::collider();
    const Comparison b = check_monotonicity(k, GaussianParams::unit(k), k.at("A"), k.at("C"), set(k, {"Z"}),
                                            set(k, {"Z'"}));
    CHECK(b.holds);
    CHECK(b.lhs == doctest::Approx(1.0 / 16).epsilon(1e-12));

    const Comparison e = check_monotonicity(f, GaussianParams::unit(f), f.at("A"), f.at("C"), set(f, {"Z"}),
                                            set(f, {"Z"}));
    CHECK(e.holds);
    CHECK(e.lhs == e.rhs);
    CHECK_CODE(check_monotonicity(f, GaussianParams::unit(f), f.at("A"), f.at("C"), set(f, {"Z"}), set(f, {"Z'"})),
               ErrorCode::PrecedenceNotEstablished);
}

TEST_CASE("monotonicity against the oracles on sampled instances") {
    Rng rng(101);
    for (int t = 0; t < 100; ++t) {
        const OrderedInstance inst = sample_ordered_instance(rng, 9);
        const oracle::Order ord(inst.dag, inst.a, inst.c);
        CHECK(ord.precedes(inst.z1, inst.z2));
        const GaussianParams p = sample_params(inst.dag, rng);
        const Eigen::MatrixXd s = oracle::dense_sigma(inst.dag, p);
        const double r1 = oracle::schur_pcorr2(s, inst.a.index, inst.c.index, oracle::indices(inst.z1));
        const double r2 = oracle::schur_pcorr2(s, inst.a.index, inst.c.index, oracle::indices(inst.z2));
        CHECK(r1 <= r2 + 1e-10);
        CHECK(check_monotonicity(inst.dag, p, inst.a, inst.c, inst.z1, inst.z2).holds);
        const bool sep2 = oracle::d_separated(inst.dag, {inst.a}, {inst.c}, inst.z2);
        const bool sep1 = oracle::d_separated(inst.dag, {inst.a}, {inst.c}, inst.z1);
        CHECK((!sep2 || sep1));
    }
}

TEST_CASE("telescoping") {
    const Dag f = fixture::fork();
    const GaussianParams u = GaussianParams::unit(f);
    const TelescopingReport same = telescoping_check(f, u, f.at("A"), f.at("C"), set(f, {"Z"}), set(f, {"Z"}));
    CHECK(same.passes());
    for (double x : same.factors) CHECK(x == 1.0);

    const TelescopingReport one = telescoping_check(f, u, f.at("A"), f.at("C"), set(f, {"Z'"}), set(f, {"Z"}));
    CHECK(one.passes());
    REQUIRE(one.factors.size() == 1);
    CHECK(one.factors[0] == doctest::Approx((1.0 / 9) / (4.0 / 25)).epsilon(1e-12));

    Rng rng(103);
    int judged = 0;
    for (int t = 0; t < 100; ++t) {
        const OrderedInstance inst = sample_ordered_instance(rng, 10);
        const TelescopingReport r =
            telescoping_check(inst.dag, sample_params(inst.dag, rng), inst.a, inst.c, inst.z1, inst.z2);
        if (!r.applicable()) continue;
        ++judged;
        CHECK(r.product_matches);
        CHECK(r.factors_bounded);
        CHECK(r.hybrids.size() == r.factors.size() + 1);
    }
    CHECK(judged > 50);
}

TEST_CASE("trial suites") {
    CHECK(run_trial_suite(SuiteId::Theorem1, 1, 0).trials == 0);
    CHECK(run_trial_suite(SuiteId::Theorem1, 1, 0).violations.empty());
    CHECK(run_trial_suite(SuiteId::Monotonicity, 42, 1000).violations.empty());
    const TrialReport faith = run_trial_suite(SuiteId::Faithfulness, 7, 1000);
    CHECK(faith.trials - faith.violations.size() >= 999);
    CHECK(faith.passes());
    CHECK(run_trial_suite(SuiteId::Reduction, 3, 200).passes());
    CHECK(run_trial_suite(SuiteId::Lemmas, 3, 20).trials == 100);
    CHECK_CODE(parse_suite_id("everything"), ErrorCode::UnknownKind);
}

TEST_CASE("suites are deterministic in the seed") {
    const TrialReport a = run_trial_suite(SuiteId::Telescoping, 5, 50);
    const TrialReport b = run_trial_suite(SuiteId::Telescoping, 5, 50);
    CHECK(a.trials == b.trials);
    CHECK(a.excluded == b.excluded);
    CHECK(a.violations.size() == b.violations.size());
    Rng r1(9), r2(9);
    const OrderedInstance x = sample_ordered_instance(r1);
    const OrderedInstance y = sample_ordered_instance(r2);
    CHECK(x.dag.edges() == y.dag.edges());
    CHECK(x.z1 == y.z1);
    CHECK(x.z2 == y.z2);
}

}  // TEST_SUITE
