#include "pathdep/verify.hpp"

#include <algorithm>
#include <cmath>

#include "pathdep/dsep.hpp"
#include "pathdep/error.hpp"

namespace pathdep {

LemmaResult check_lemma(const Family& family, const GaussianParams& params) {
    params.validate(family.dag);
    const CovMatrix sigma = build_sigma(family.dag, params);
    auto rho2_with = [&](Vertex v) {
        VertexSet given = family.b_set;
        given.insert(v);
        return ChainValue{family.dag.format_set(given), pcorr2(sigma, family.a, family.c, given)};
    };

    LemmaResult r;
    const bool downward = family.l_form_shape() == LFormShape::NearAsD;
    if (downward) r.chain.push_back(rho2_with(family.attach));
    for (Vertex v : family.chain) r.chain.push_back(rho2_with(v));
    if (family.blocker) r.blocked = rho2_with(*family.blocker).rho2;

    const bool increasing = family.kind == FamilyKind::ForkChain;
    for (std::size_t i = 0; i + 1 < r.chain.size(); ++i) {
        const double lo = increasing ? r.chain[i].rho2 : r.chain[i + 1].rho2;
        const double hi = increasing ? r.chain[i + 1].rho2 : r.chain[i].rho2;
        if (lo - hi > r.worst_excess) {
            r.worst_excess = lo - hi;
            r.worst_lhs = lo;
            r.worst_rhs = hi;
            r.detail = "rho2 given " + r.chain[i].label + " vs " + r.chain[i + 1].label;
        }
    }
    if (r.blocked && *r.blocked > r.worst_excess) {
        r.worst_excess = *r.blocked;
        r.worst_lhs = *r.blocked;
        r.worst_rhs = 0;
        r.detail = "blocked rho2 is not zero";
    }
    r.holds = r.worst_excess <= kInequalitySlack;
    if (r.holds) r.detail.clear();
    return r;
}

namespace {

void require_precedes(const PathFrame& frame, const VertexSet& z1, const VertexSet& z2) {
    if (!frame.precedes(z1, z2).holds) {
        fail(ErrorCode::PrecedenceNotEstablished,
             frame.dag().format_set(z1) + " does not precede " + frame.dag().format_set(z2));
    }
}

}  // namespace

bool check_theorem1(const Dag& dag, Vertex a, Vertex c, const VertexSet& z1, const VertexSet& z2) {
    const PathFrame frame(dag, a, c);
    require_precedes(frame, z1, z2);
    return !d_separated(dag, {{a}, {c}, z2}) || d_separated(dag, {{a}, {c}, z1});
}

Comparison check_monotonicity(const Dag& dag, const GaussianParams& params, Vertex a, Vertex c,
                              const VertexSet& z1, const VertexSet& z2) {
    const PathFrame frame(dag, a, c);
    require_precedes(frame, z1, z2);
    const CovMatrix sigma = build_sigma(dag, params);
    Comparison cmp;
    cmp.lhs = pcorr2(sigma, a, c, z1);
    cmp.rhs = pcorr2(sigma, a, c, z2);
    cmp.holds = cmp.lhs <= cmp.rhs + kInequalitySlack;
    return cmp;
}

TelescopingReport telescoping_check(const Dag& dag, const GaussianParams& params, Vertex a, Vertex c,
                                    const VertexSet& z1, const VertexSet& z2) {
    const PathFrame frame(dag, a, c);
    TelescopingReport rep;
    rep.normalized = frame.normalize_cardinality(z1, z2);

    VertexSet current = rep.normalized.z1;
    rep.hybrids.push_back(current);
    for (const SwapStep& s : rep.normalized.steps) {
        current.erase(s.z1_side);
        current.insert(s.z2_side);
        rep.hybrids.push_back(current);
    }
    if (current != rep.normalized.z2) {
        fail(ErrorCode::NormalizationFailed, "swap sequence does not end at the normalized z2 side");
    }

    const CovMatrix sigma = build_sigma(dag, params);
    for (const VertexSet& h : rep.hybrids) rep.rho2.push_back(pcorr2(sigma, a, c, h));
    const double lhs = pcorr2(sigma, a, c, z1);
    const double rhs = pcorr2(sigma, a, c, z2);

    rep.zero_denominator = rhs < kRho2ZeroTolerance;
    for (std::size_t i = 1; i < rep.rho2.size(); ++i) {
        if (rep.rho2[i] < kRho2ZeroTolerance) rep.zero_denominator = true;
    }
    if (rep.zero_denominator) return rep;

    rep.target = lhs / rhs;
    rep.factors_bounded = true;
    for (std::size_t i = 1; i < rep.rho2.size(); ++i) {
        const double f = rep.rho2[i - 1] / rep.rho2[i];
        rep.factors.push_back(f);
        rep.product *= f;
        rep.max_factor = std::max(rep.max_factor, f);
        if (f > 1 + kInequalitySlack) rep.factors_bounded = false;
    }
    // The floor covers z1 sets that separate: both sides are then roundoff around 0.
    rep.product_matches = std::abs(rep.product - rep.target) <=
                          kTelescopingRelTolerance * std::max(std::abs(rep.product), std::abs(rep.target)) +
                              kTelescopingAbsFloor;
    return rep;
}

}  // namespace pathdep
