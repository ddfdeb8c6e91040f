#pragma once

#include <string>
#include <vector>

#include "pathdep/dag.hpp"
#include "pathdep/families.hpp"
#include "pathdep/gaussian.hpp"
#include "pathdep/ordering.hpp"

namespace pathdep {

/// One-sided slack for rho^2 inequalities: lhs <= rhs + kInequalitySlack.
inline constexpr double kInequalitySlack = 1e-12;

struct ChainValue {
    std::string label;  ///< conditioning set, e.g. "{B1,Z'}"
    double rho2 = 0;
};

struct LemmaResult {
    bool holds = false;
    /// rho^2 along the chain, ordered away from the path.
    std::vector<ChainValue> chain;
    /// rho^2 given B and the blocking path vertex, when the family has one.
    std::optional<double> blocked;
    /// Largest amount by which an inequality of the chain is violated (0 if none).
    double worst_excess = 0;
    /// The two sides of the worst inequality (lhs <= rhs expected).
    double worst_lhs = 0;
    double worst_rhs = 0;
    std::string detail;
};

/// Evaluates the family's inequality chain on the given parameters: for the
/// fork rho^2 grows away from the path, for the other kinds it shrinks, and
/// where a blocking vertex exists conditioning on it gives 0.
LemmaResult check_lemma(const Family& family, const GaussianParams& params);

struct Comparison {
    bool holds = false;
    double lhs = 0;
    double rhs = 0;
};

/// d-separated(a, c | z2) implies d-separated(a, c | z1).
/// Throws PrecedenceNotEstablished unless z1 precedes z2.
bool check_theorem1(const Dag& dag, Vertex a, Vertex c, const VertexSet& z1, const VertexSet& z2);

/// rho^2(a, c | z1) <= rho^2(a, c | z2) + kInequalitySlack.
/// Throws PrecedenceNotEstablished unless z1 precedes z2.
Comparison check_monotonicity(const Dag& dag, const GaussianParams& params, Vertex a, Vertex c,
                              const VertexSet& z1, const VertexSet& z2);

inline constexpr double kTelescopingRelTolerance = 1e-9;
/// Absolute slack added to the product comparison; the ratios lie in [0, 1].
inline constexpr double kTelescopingAbsFloor = 1e-12;

struct TelescopingReport {
    NormalizedPair normalized;
    /// Hybrid sets S_0 = normalized z1, ..., S_k = normalized z2.
    std::vector<VertexSet> hybrids;
    std::vector<double> rho2;     ///< rho^2 given each hybrid set
    std::vector<double> factors;  ///< rho2[i-1] / rho2[i]
    double product = 1;
    double target = 1;  ///< rho^2(z1) / rho^2(z2) on the original sets
    bool zero_denominator = false;
    bool product_matches = false;
    bool factors_bounded = false;
    double max_factor = 0;

    /// False when a hybrid rho^2 vanished; such instances are reported, not judged.
    bool applicable() const { return !zero_denominator; }
    bool passes() const { return applicable() && product_matches && factors_bounded; }
};

/// Swaps one nearest vertex at a time (nc class, then c-c, then c-nc) and
/// checks the product of successive rho^2 ratios against the end-to-end
/// ratio and each factor against 1. Throws PrecedenceNotEstablished and
/// NormalizationFailed from normalization.
TelescopingReport telescoping_check(const Dag& dag, const GaussianParams& params, Vertex a, Vertex c,
                                    const VertexSet& z1, const VertexSet& z2);

}  // namespace pathdep
