#include "pathdep/suite.hpp"

#include <algorithm>
#include <cmath>

#include "pathdep/dsep.hpp"
#include "pathdep/error.hpp"
#include "pathdep/families.hpp"
#include "pathdep/ordering.hpp"
#include "pathdep/verify.hpp"

namespace pathdep {

std::string_view to_string(SuiteId id) noexcept {
    switch (id) {
        case SuiteId::Lemmas: return "lemmas";
        case SuiteId::Theorem1: return "theorem1";
        case SuiteId::Monotonicity: return "monotonicity";
        case SuiteId::Telescoping: return "telescoping";
        case SuiteId::Faithfulness: return "faithfulness";
        case SuiteId::Reduction: return "reduction";
    }
    return "?";
}

SuiteId parse_suite_id(std::string_view text) {
    for (SuiteId id : {SuiteId::Lemmas, SuiteId::Theorem1, SuiteId::Monotonicity, SuiteId::Telescoping,
                       SuiteId::Faithfulness, SuiteId::Reduction}) {
        if (to_string(id) == text) return id;
    }
    fail(ErrorCode::UnknownKind, "unknown suite '" + std::string(text) + "'");
}

namespace {

std::pair<Vertex, Vertex> random_pair(std::size_t n, Rng& rng) {
    const Vertex a{static_cast<std::uint32_t>(rng.below(n))};
    Vertex c{static_cast<std::uint32_t>(rng.below(n - 1))};
    if (c.index >= a.index) ++c.index;
    return {a, c};
}

VertexSet random_subset(const std::vector<Vertex>& pool, double p, Rng& rng) {
    VertexSet out;
    for (Vertex v : pool) {
        if (rng.coin(p)) out.insert(v);
    }
    return out;
}

}  // namespace

OrderedInstance sample_ordered_instance(Rng& rng, std::size_t max_vertices) {
    for (;;) {
        const std::size_t n = rng.between(3, std::max<std::size_t>(3, max_vertices));
        Dag dag = random_polytree(n, rng);
        const auto [a, c] = random_pair(n, rng);
        const PathFrame frame(dag, a, c);
        const std::vector<Vertex> rel(frame.relevant().begin(), frame.relevant().end());
        if (rel.empty()) continue;

        std::vector<VertexSet> subsets{{}};
        for (std::size_t i = 0; i < rel.size(); ++i) {
            subsets.push_back({rel[i]});
            for (std::size_t j = i + 1; j < rel.size(); ++j) subsets.push_back({rel[i], rel[j]});
        }
        if (rel.size() >= 3) {
            for (int k = 0; k < 24; ++k) {
                std::vector<Vertex> pick = rel;
                rng.shuffle(pick);
                subsets.push_back({pick[0], pick[1], pick[2]});
            }
        }
        std::vector<ConditioningPartition> parts;
        parts.reserve(subsets.size());
        for (const VertexSet& s : subsets) parts.push_back(frame.partition(s));

        std::vector<std::pair<std::size_t, std::size_t>> ordered;
        for (std::size_t i = 0; i < subsets.size(); ++i) {
            for (std::size_t j = 0; j < subsets.size(); ++j) {
                if (subsets[i] != subsets[j] && frame.precedes(parts[i], parts[j]).holds) ordered.emplace_back(i, j);
            }
        }
        if (ordered.empty()) continue;
        const auto [i, j] = ordered[rng.below(ordered.size())];
        return OrderedInstance{std::move(dag), a, c, subsets[i], subsets[j]};
    }
}

namespace {

void record(TrialReport& rep, Violation v, double magnitude) {
    rep.max_violation_magnitude = std::max(rep.max_violation_magnitude, magnitude);
    rep.violations.push_back(std::move(v));
}

void lemma_trials(TrialReport& rep, std::uint64_t seed, std::size_t n) {
    std::uint64_t stream = 0;
    for (FamilyKind kind : kAllFamilyKinds) {
        for (std::size_t i = 0; i < n; ++i, ++stream) {
            const std::uint64_t s = Rng::child_seed(seed, stream);
            Rng rng(s);
            const std::size_t length = rng.between(1, 3);
            const std::size_t b_side = kind == FamilyKind::ForkChain ? 0 : rng.between(0, 3);
            const Family fam = make_family(kind, length, b_side);
            const SignRegime regime = i % 2 == 0 ? SignRegime::Positive : SignRegime::Negative;
            const GaussianParams p = sample_family_params(fam, rng, regime);
            ++rep.trials;
            const LemmaResult r = check_lemma(fam, p);
            if (!r.holds) {
                record(rep,
                       {s, p.flatten(fam.dag), r.worst_lhs, r.worst_rhs,
                        std::string(to_string(kind)) + " length " + std::to_string(length) + " B " +
                            std::to_string(b_side) + ": " + r.detail},
                       r.worst_excess);
            }
        }
    }
}

}  // namespace

TrialReport run_trial_suite(SuiteId id, std::uint64_t seed, std::size_t n_trials) {
    TrialReport rep;
    rep.suite = id;
    if (id == SuiteId::Lemmas) {
        lemma_trials(rep, seed, n_trials);
        return rep;
    }

    for (std::size_t t = 0; t < n_trials; ++t) {
        const std::uint64_t s = Rng::child_seed(seed, t);
        Rng rng(s);
        ++rep.trials;
        switch (id) {
            case SuiteId::Theorem1: {
                const OrderedInstance inst = sample_ordered_instance(rng);
                if (!check_theorem1(inst.dag, inst.a, inst.c, inst.z1, inst.z2)) {
                    record(rep,
                           {s, {}, 0, 0,
                            inst.dag.format_set(inst.z2) + " separates but " + inst.dag.format_set(inst.z1) +
                                " does not"},
                           1);
                }
                break;
            }
            case SuiteId::Monotonicity: {
                const OrderedInstance inst = sample_ordered_instance(rng);
                const GaussianParams p = sample_params(inst.dag, rng);
                const Comparison cmp = check_monotonicity(inst.dag, p, inst.a, inst.c, inst.z1, inst.z2);
                if (!cmp.holds) {
                    record(rep,
                           {s, p.flatten(inst.dag), cmp.lhs, cmp.rhs,
                            inst.dag.format_set(inst.z1) + " vs " + inst.dag.format_set(inst.z2)},
                           cmp.lhs - cmp.rhs);
                }
                break;
            }
            case SuiteId::Telescoping: {
                bool judged = false;
                for (int attempt = 0; attempt < 32 && !judged; ++attempt) {
                    const OrderedInstance inst = sample_ordered_instance(rng);
                    const GaussianParams p = sample_params(inst.dag, rng);
                    TelescopingReport tr;
                    try {
                        tr = telescoping_check(inst.dag, p, inst.a, inst.c, inst.z1, inst.z2);
                    } catch (const Error& e) {
                        if (e.code() != ErrorCode::NormalizationFailed) throw;
                        record(rep, {s, p.flatten(inst.dag), 0, 0, e.what()}, 0);
                        judged = true;
                        break;
                    }
                    if (!tr.applicable()) continue;
                    judged = true;
                    if (!tr.passes()) {
                        const double mag = tr.factors_bounded ? std::abs(tr.product - tr.target) : tr.max_factor - 1;
                        record(rep,
                               {s, p.flatten(inst.dag), tr.product, tr.target,
                                std::string(tr.factors_bounded ? "" : "factor above 1; ") +
                                    (tr.product_matches ? "" : "product mismatch; ") +
                                    inst.dag.format_set(inst.z1) + " vs " + inst.dag.format_set(inst.z2)},
                               mag);
                    }
                }
                if (!judged) ++rep.excluded;
                break;
            }
            case SuiteId::Faithfulness: {
                const std::size_t n = rng.between(2, 12);
                const Dag dag = random_polytree(n, rng);
                const auto [a, c] = random_pair(n, rng);
                std::vector<Vertex> others;
                for (Vertex v : dag.vertices()) {
                    if (v != a && v != c) others.push_back(v);
                }
                const VertexSet z = random_subset(others, 0.3, rng);
                const GaussianParams p = sample_params(dag, rng);
                if (!faithfulness_probe(dag, p, a, c, z)) {
                    const double r2 = pcorr2(build_sigma(dag, p), a, c, z);
                    record(rep, {s, p.flatten(dag), r2, kRho2ZeroTolerance, "separation disagrees with rho2"}, r2);
                }
                break;
            }
            case SuiteId::Reduction: {
                const std::size_t n = rng.between(3, 12);
                const Dag dag = random_polytree(n, rng);
                const auto [a, c] = random_pair(n, rng);
                const PathFrame frame(dag, a, c);
                const std::vector<Vertex> rel(frame.relevant().begin(), frame.relevant().end());
                const VertexSet z = random_subset(rel, 0.5, rng);
                const VertexSet nz = frame.reduce_to_nearest(z);
                const GaussianParams p = sample_params(dag, rng);
                const CovMatrix sigma = build_sigma(dag, p);
                const double lhs = pcorr2(sigma, a, c, z);
                const double rhs = pcorr2(sigma, a, c, nz);
                if (std::abs(lhs - rhs) > 1e-9) {
                    record(rep, {s, p.flatten(dag), lhs, rhs, dag.format_set(z) + " vs " + dag.format_set(nz)},
                           std::abs(lhs - rhs));
                }
                break;
            }
            case SuiteId::Lemmas: break;
        }
    }
    if (id == SuiteId::Faithfulness) rep.allowed_violations = rep.trials / 1000;
    return rep;
}

}  // namespace pathdep
