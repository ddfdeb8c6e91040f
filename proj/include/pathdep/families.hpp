#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pathdep/dag.hpp"
#include "pathdep/gaussian.hpp"
#include "pathdep/random.hpp"

namespace pathdep {

enum class FamilyKind {
    ForkChain,             ///< X -> A, X -> C, X -> ... -> Z' -> Z
    ColliderTail,          ///< A -> X <- C, X -> ... -> Z' -> Z, B children of X
    AnomalousChain,        ///< A -> X <- C, Z -> X, Z' -> ... -> Z, B children of X
    DoubleSource,          ///< A -> X1 -> X2 -> C, Z -> X1, Z' -> ... -> Z
    ExtendedDoubleSource,  ///< A -> X1 -> Y <- C, Z -> X1, Z' -> ... -> Z
};

inline constexpr FamilyKind kAllFamilyKinds[] = {FamilyKind::ForkChain, FamilyKind::ColliderTail,
                                                  FamilyKind::AnomalousChain, FamilyKind::DoubleSource,
                                                  FamilyKind::ExtendedDoubleSource};

std::string_view to_string(FamilyKind kind) noexcept;
/// Accepts the full names ("fork_chain", ...) and the short forms
/// fork, collider, anomalous, double, extended. Throws UnknownKind.
FamilyKind parse_family_kind(std::string_view text);

/// How two chain vertices relate to each other when recast as L(a):
/// NearAsD conditions on the far vertex through a child of the near one,
/// FarAsD reaches the near vertex through its parent chain.
enum class LFormShape { NearAsD, FarAsD };

/// A generated member of one of the canonical families.
struct Family {
    FamilyKind kind;
    std::size_t chain_length;
    std::size_t b_side;
    Dag dag;
    Vertex a, c;
    /// Path vertex the chain hangs from (X, or X1 for the double-source kinds).
    Vertex attach;
    /// Chain vertices ordered away from the path. Downward kinds end in Z'
    /// then Z; the others start at Z and end at Z'.
    std::vector<Vertex> chain;
    /// The adjacent pair compared by the lemma.
    Vertex near, far;
    VertexSet b_set;
    /// Path vertex whose conditioning (with B) separates A and C, if any.
    std::optional<Vertex> blocker;

    Vertex at(std::string_view name) const { return dag.at(name); }
    /// True for the shapes the closed-form identities are written for.
    bool is_canonical_shape() const;
    LFormShape l_form_shape() const;
};

/// Throws DomainError for chain_length 0 or a fork with a B side.
Family make_family(FamilyKind kind, std::size_t chain_length, std::size_t b_side);
/// fork 2/0, collider 2/2, anomalous 1/2, double 1/2, extended 1/2.
Family canonical_family(FamilyKind kind);
/// B-side size used for distance sweeps when none is given.
std::size_t default_sweep_b_side(FamilyKind kind);

enum class SignRegime { Any, Positive, Negative };

/// Random parameters for the family. For the fork the regime fixes the sign
/// of b1 * b2 (coefficients X->A and X->C).
GaussianParams sample_family_params(const Family& family, Rng& rng, SignRegime regime = SignRegime::Any,
                                    const ParamRanges& ranges = {});

/// L(a) and its ingredients for one family member, everything conditioned on B.
struct LForm {
    LFormShape shape;
    Vertex d, other;
    double a_family = 0;  ///< a at which L(a) is the other vertex's rho^2
    double K = 0, K_prime = 0;
    double s_aa = 0, s_cc = 0, s_dd = 0, s_ac = 0, s_ad = 0, s_cd = 0;
    double r_ac = 0, r_ad = 0, r_cd = 0;

    double L(double a) const;
    /// Exact derivative by the quotient rule.
    double dL(double a) const;
    double M1() const;
    double M2() const;
    double M3(double a) const;
    /// K M3 {Q1 s_aa M1 + Q2 s_cc M2}, carrying the sign of dL/da.
    double derivative_sign_form(double a) const;
    /// Magnitude of the terms of derivative_sign_form before cancellation.
    double derivative_sign_scale(double a) const;
    /// (a-K') - K r_ad^2 and (a-K') - K r_cd^2.
    double q_ad(double a) const;
    double q_cd(double a) const;
};

LForm l_form(const Family& family, const CovMatrix& sigma);

struct LemmaAlgebraTrace {
    double a = 0, K = 0, K_prime = 0;
    double M1 = 0, M2 = 0, M3 = 0;
    /// Only the double-source family has closed-form Q quantities; NaN elsewhere.
    double Q1 = 0, Q2 = 0, Q3 = 0;
    double L = 0;
    double dL_finite_difference = 0;
    double dL_sign_form = 0;
    int sign_expected = 0;
    int sign_observed = 0;
    bool constraints_hold = false;
    /// At a = 1 and a = a_family, L matches the direct rho^2; true elsewhere.
    bool endpoint_matches = true;
};

struct IdentityCheck {
    std::string name;
    double lhs = 0;
    double rhs = 0;
    /// Magnitude of the terms involved; guards identities whose value is ~0.
    double scale = 0;
    bool holds = false;
};

inline constexpr double kIdentityRelTolerance = 1e-9;

struct ConformanceReport {
    FamilyKind kind;
    std::vector<IdentityCheck> identities;
    LemmaAlgebraTrace trace;

    bool passes() const;
    /// Name of the first failing identity, empty when all hold.
    std::string first_failure() const;
};

/// Evaluates both sides of every closed-form identity known for the family.
ConformanceReport conformance_report(const Family& family, const GaussianParams& params);
/// As conformance_report, throwing ConformanceFailure on any mismatch.
ConformanceReport conformance_probe(const Family& family, const GaussianParams& params);

/// L(a) along a grid between 1 and a_family (an empty grid picks 9 points),
/// each point checked for the derivative sign, the nonnegativity constraints
/// and, at the two ends, agreement with the direct rho^2. Throws DomainError
/// for grid points outside the lemma's range and ConformanceFailure on any
/// disagreement.
std::vector<LemmaAlgebraTrace> appendix_sign_probe(const Family& family, const GaussianParams& params,
                                                   std::vector<double> grid = {});

}  // namespace pathdep
