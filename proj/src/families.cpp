#include "pathdep/families.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "pathdep/error.hpp"

namespace pathdep {

namespace {

struct Builder {
    std::vector<std::string> names;
    std::vector<std::pair<std::string, std::string>> edges;

    void node(const std::string& n) { names.push_back(n); }
    void edge(const std::string& p, const std::string& c) { edges.emplace_back(p, c); }
};

// Away from the path: W1 .. W{L-2}, Z', Z (just Z when L = 1).
std::vector<std::string> downward_chain(std::size_t length) {
    if (length == 1) return {"Z"};
    std::vector<std::string> out;
    for (std::size_t i = 1; i + 1 < length; ++i) out.push_back("W" + std::to_string(i));
    out.push_back("Z'");
    out.push_back("Z");
    return out;
}

// Away from the path: Z, W1 .. W{L-1}, Z'; edges point toward Z.
std::vector<std::string> upward_chain(std::size_t length) {
    std::vector<std::string> out{"Z"};
    for (std::size_t i = 1; i < length; ++i) out.push_back("W" + std::to_string(i));
    out.push_back("Z'");
    return out;
}

std::string b_name(std::size_t i) { return "B" + std::to_string(i + 1); }

double sgn_or_zero(double v, double zero_below) {
    if (std::abs(v) <= zero_below) return 0;
    return v > 0 ? 1 : -1;
}

}  // namespace

std::string_view to_string(FamilyKind kind) noexcept {
    switch (kind) {
        case FamilyKind::ForkChain: return "fork_chain";
        case FamilyKind::ColliderTail: return "collider_tail";
        case FamilyKind::AnomalousChain: return "anomalous_chain";
        case FamilyKind::DoubleSource: return "double_source";
        case FamilyKind::ExtendedDoubleSource: return "extended_double_source";
    }
    return "?";
}

FamilyKind parse_family_kind(std::string_view text) {
    struct Alias {
        std::string_view name;
        FamilyKind kind;
    };
    static constexpr Alias aliases[] = {
        {"fork_chain", FamilyKind::ForkChain},
        {"fork", FamilyKind::ForkChain},
        {"collider_tail", FamilyKind::ColliderTail},
        {"collider", FamilyKind::ColliderTail},
        {"anomalous_chain", FamilyKind::AnomalousChain},
        {"anomalous", FamilyKind::AnomalousChain},
        {"double_source", FamilyKind::DoubleSource},
        {"double", FamilyKind::DoubleSource},
        {"extended_double_source", FamilyKind::ExtendedDoubleSource},
        {"extended", FamilyKind::ExtendedDoubleSource},
    };
    for (const Alias& al : aliases) {
        if (al.name == text) return al.kind;
    }
    fail(ErrorCode::UnknownKind, "unknown family kind '" + std::string(text) + "'");
}

bool Family::is_canonical_shape() const {
    const Family ref = canonical_family(kind);
    return chain_length == ref.chain_length && b_side == ref.b_side;
}

LFormShape Family::l_form_shape() const {
    return kind == FamilyKind::ForkChain || kind == FamilyKind::ColliderTail ? LFormShape::NearAsD
                                                                              : LFormShape::FarAsD;
}

Family make_family(FamilyKind kind, std::size_t chain_length, std::size_t b_side) {
    if (chain_length == 0) fail(ErrorCode::DomainError, "chain_length must be at least 1");
    if (kind == FamilyKind::ForkChain && b_side != 0) {
        fail(ErrorCode::DomainError, "fork_chain has no B side");
    }
    Builder g;
    g.node("A");
    g.node("C");
    std::string attach = "X";
    const bool downward = kind == FamilyKind::ForkChain || kind == FamilyKind::ColliderTail;
    const std::vector<std::string> chain = downward ? downward_chain(chain_length) : upward_chain(chain_length);

    switch (kind) {
        case FamilyKind::ForkChain:
            g.node("X");
            g.edge("X", "A");
            g.edge("X", "C");
            break;
        case FamilyKind::ColliderTail:
        case FamilyKind::AnomalousChain:
            g.node("X");
            g.edge("A", "X");
            g.edge("C", "X");
            break;
        case FamilyKind::DoubleSource:
            attach = "X1";
            g.node("X1");
            g.node("X2");
            g.edge("A", "X1");
            g.edge("X1", "X2");
            g.edge("X2", "C");
            break;
        case FamilyKind::ExtendedDoubleSource:
            attach = "X1";
            g.node("X1");
            g.node("Y");
            g.edge("A", "X1");
            g.edge("X1", "Y");
            g.edge("C", "Y");
            break;
    }
    for (const std::string& n : chain) g.node(n);
    if (downward) {
        std::string prev = attach;
        for (const std::string& n : chain) {
            g.edge(prev, n);
            prev = n;
        }
    } else {
        g.edge(chain.front(), attach);
        for (std::size_t i = 1; i < chain.size(); ++i) g.edge(chain[i], chain[i - 1]);
    }
    for (std::size_t i = 0; i < b_side; ++i) {
        const std::string b = b_name(i);
        g.node(b);
        std::string parent = "X";
        if (kind == FamilyKind::DoubleSource) parent = i % 2 == 0 ? "X1" : "X2";
        if (kind == FamilyKind::ExtendedDoubleSource) parent = i % 2 == 0 ? "Y" : "X1";
        g.edge(parent, b);
    }

    Dag dag = Dag::build(g.names, g.edges);
    std::vector<Vertex> chain_v;
    for (const std::string& n : chain) chain_v.push_back(dag.at(n));
    VertexSet bs;
    for (std::size_t i = 0; i < b_side; ++i) bs.insert(dag.at(b_name(i)));
    const Vertex attach_v = dag.at(attach);
    Vertex near = chain_v.front();
    Vertex far = chain_v.back();
    if (downward) near = chain_length >= 2 ? chain_v[chain_length - 2] : attach_v;
    std::optional<Vertex> blocker;
    if (kind == FamilyKind::ForkChain || kind == FamilyKind::DoubleSource ||
        kind == FamilyKind::ExtendedDoubleSource) {
        blocker = attach_v;
    }
    const Vertex a = dag.at("A");
    const Vertex c = dag.at("C");
    return Family{kind, chain_length, b_side, std::move(dag), a, c, attach_v,
                  std::move(chain_v), near, far, std::move(bs), blocker};
}

Family canonical_family(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::ForkChain: return make_family(kind, 2, 0);
        case FamilyKind::ColliderTail: return make_family(kind, 2, 2);
        default: return make_family(kind, 1, 2);
    }
}

std::size_t default_sweep_b_side(FamilyKind kind) {
    return kind == FamilyKind::AnomalousChain || kind == FamilyKind::ExtendedDoubleSource ? 1 : 0;
}

GaussianParams sample_family_params(const Family& family, Rng& rng, SignRegime regime,
                                    const ParamRanges& ranges) {
    GaussianParams p = sample_params(family.dag, rng, ranges);
    if (family.kind == FamilyKind::ForkChain && regime != SignRegime::Any) {
        const Vertex x = family.at("X");
        const double b1 = p.coefficient_at(x, family.a);
        const double b2 = p.coefficient_at(x, family.c);
        const bool positive = b1 * b2 > 0;
        if (positive != (regime == SignRegime::Positive)) p.set_coefficient(x, family.c, -b2);
    }
    return p;
}

// ---------------------------------------------------------------- L(a)

double LForm::q_ad(double a) const { return (a - K_prime) - K * r_ad * r_ad; }
double LForm::q_cd(double a) const { return (a - K_prime) - K * r_cd * r_cd; }

double LForm::L(double a) const {
    const double n = (a - K_prime) * r_ac - K * r_ad * r_cd;
    return n * n / (q_ad(a) * q_cd(a));
}

double LForm::dL(double a) const {
    const double n = (a - K_prime) * r_ac - K * r_ad * r_cd;
    const double q1 = q_ad(a);
    const double q2 = q_cd(a);
    return n * (2 * r_ac * q1 * q2 - n * (q1 + q2)) / (q1 * q1 * q2 * q2);
}

double LForm::M1() const { return s_cd * (s_ad * s_cc - s_ac * s_cd); }
double LForm::M2() const { return s_ad * (s_cd * s_aa - s_ac * s_ad); }
double LForm::M3(double a) const { return (a - K_prime) * s_ac * s_dd - K * s_ad * s_cd; }

double LForm::derivative_sign_form(double a) const {
    return K * M3(a) * (q_ad(a) * s_aa * M1() + q_cd(a) * s_cc * M2());
}

double LForm::derivative_sign_scale(double a) const {
    const double m1 = std::abs(s_cd) * (std::abs(s_ad * s_cc) + std::abs(s_ac * s_cd));
    const double m2 = std::abs(s_ad) * (std::abs(s_cd * s_aa) + std::abs(s_ac * s_ad));
    const double m3 = std::abs((a - K_prime) * s_ac * s_dd) + std::abs(K * s_ad * s_cd);
    return std::abs(K) * m3 * (std::abs(q_ad(a) * s_aa) * m1 + std::abs(q_cd(a) * s_cc) * m2);
}

LForm l_form(const Family& family, const CovMatrix& sigma) {
    LForm f;
    f.shape = family.l_form_shape();
    if (f.shape == LFormShape::NearAsD) {
        f.d = family.near;
        f.other = family.far;
    } else {
        f.d = family.far;
        f.other = family.near;
    }
    const double s_do = sigma(f.d, f.other);
    const double rho2_do = s_do * s_do / (sigma(f.d, f.d) * sigma(f.other, f.other));
    f.a_family = f.shape == LFormShape::NearAsD ? 1.0 / rho2_do : rho2_do;

    const VertexSet& b = family.b_set;
    auto cc = [&](Vertex u, Vertex v) { return cond_cov(sigma, u, v, b); };
    f.s_aa = cc(family.a, family.a);
    f.s_cc = cc(family.c, family.c);
    f.s_dd = cc(f.d, f.d);
    f.s_ac = cc(family.a, family.c);
    f.s_ad = cc(family.a, f.d);
    f.s_cd = cc(family.c, f.d);
    f.r_ac = f.s_ac / std::sqrt(f.s_aa * f.s_cc);
    f.r_ad = f.s_ad / std::sqrt(f.s_aa * f.s_dd);
    f.r_cd = f.s_cd / std::sqrt(f.s_cc * f.s_dd);
    f.K = f.s_dd / sigma(f.d, f.d);
    f.K_prime = 1.0 - f.K;
    return f;
}

// ------------------------------------------------------------ conformance

bool ConformanceReport::passes() const { return first_failure().empty(); }

std::string ConformanceReport::first_failure() const {
    for (const IdentityCheck& id : identities) {
        if (!id.holds) return id.name;
    }
    return {};
}

namespace {

class IdentityList {
public:
    explicit IdentityList(std::vector<IdentityCheck>& out) : out_(out) {}

    void add(std::string name, double lhs, double rhs, double scale = 0) {
        const double mag = std::max({std::abs(lhs), std::abs(rhs), std::abs(scale)});
        const bool ok = std::isfinite(lhs) && std::isfinite(rhs) &&
                        std::abs(lhs - rhs) <= kIdentityRelTolerance * mag;
        out_.push_back({std::move(name), lhs, rhs, scale, ok});
    }

private:
    std::vector<IdentityCheck>& out_;
};

LemmaAlgebraTrace trace_at(const LForm& f, double a) {
    LemmaAlgebraTrace t;
    t.a = a;
    t.K = f.K;
    t.K_prime = f.K_prime;
    t.M1 = f.M1();
    t.M2 = f.M2();
    t.M3 = f.M3(a);
    t.Q1 = t.Q2 = t.Q3 = std::numeric_limits<double>::quiet_NaN();
    t.L = f.L(a);
    const double h = 1e-6 * std::max(1.0, std::abs(a));
    t.dL_finite_difference = (f.L(a + h) - f.L(a - h)) / (2 * h);
    t.dL_sign_form = f.derivative_sign_form(a);
    t.sign_expected = static_cast<int>(sgn_or_zero(t.dL_sign_form, 1e-10 * f.derivative_sign_scale(a)));
    t.sign_observed =
        static_cast<int>(sgn_or_zero(t.dL_finite_difference, 1e-7 * std::max(std::abs(t.L), 1e-12)));
    constexpr double slack = -1e-12;
    t.constraints_hold = f.K >= slack && f.q_ad(a) >= slack && f.q_cd(a) >= slack;
    return t;
}

struct DoubleSourceQ {
    double q1, q2, q3;
};

DoubleSourceQ double_source_q(const Family& fam, const GaussianParams& p, const CovMatrix& s) {
    const Vertex x1 = fam.at("X1"), x2 = fam.at("X2"), b1v = fam.at("B1"), b2v = fam.at("B2");
    const double b4 = p.coefficient_at(x1, x2);
    const double b31 = p.coefficient_at(x1, b1v);
    const double b32 = p.coefficient_at(x2, b2v);
    Eigen::Matrix2d sbb;
    sbb << s(b1v, b1v), s(b1v, b2v), s(b2v, b1v), s(b2v, b2v);
    const Eigen::Matrix2d inv = sbb.inverse();
    const Eigen::Vector2d bt(b31, b32 * b4);
    const Eigen::Vector2d bs(b31 * b4 * s(x1, x1), b32 * s(x2, x2));
    const double q1 = bt.dot(inv * bs);
    const double q2 = bt.dot(inv * bt);
    return {q1, q2, b4 - q1};
}

void generic_identities(const Family& fam, const CovMatrix& s, const LForm& f, IdentityList& ids) {
    const VertexSet& b = fam.b_set;
    const Vertex a = fam.a, c = fam.c, o = f.other;
    auto cc = [&](Vertex u, Vertex v) { return cond_cov(s, u, v, b); };
    VertexSet with_o = b, with_d = b;
    with_o.insert(o);
    with_d.insert(f.d);

    const double s_ao = cc(a, o), s_co = cc(c, o), s_oo = cc(o, o);
    const double r_ao = s_ao / std::sqrt(f.s_aa * s_oo);
    const double r_co = s_co / std::sqrt(f.s_cc * s_oo);
    const double den = (1 - r_ao * r_ao) * (1 - r_co * r_co);
    const double num = f.r_ac - r_ao * r_co;
    ids.add("rho2 given B and one vertex from correlations given B", pcorr2(s, a, c, with_o), num * num / den,
            std::pow(std::abs(f.r_ac) + std::abs(r_ao * r_co), 2) / den);

    const double ratio = f.K / (f.a_family - f.K_prime);
    const double ac_scale = std::sqrt(f.s_aa * f.s_cc);
    ids.add("product through the other vertex rescaled by K/(a-K')", s_ao * s_co / s_oo,
            ratio * f.s_ad * f.s_cd / f.s_dd, ac_scale);
    ids.add("squared A-side term rescaled by K/(a-K')", s_ao * s_ao / s_oo, ratio * f.s_ad * f.s_ad / f.s_dd,
            f.s_aa);
    ids.add("squared C-side term rescaled by K/(a-K')", s_co * s_co / s_oo, ratio * f.s_cd * f.s_cd / f.s_dd,
            f.s_cc);

    auto l_scale = [&](double x) {
        const double n = std::abs((x - f.K_prime) * f.r_ac) + std::abs(f.K * f.r_ad * f.r_cd);
        return n * n / std::abs(f.q_ad(x) * f.q_cd(x));
    };
    ids.add("L(1) equals rho2 given B and D", f.L(1.0), pcorr2(s, a, c, with_d), l_scale(1.0));
    ids.add("L(a) equals rho2 given B and the other vertex", f.L(f.a_family), pcorr2(s, a, c, with_o),
            l_scale(f.a_family));

    const double m1_scale = std::abs(f.s_cd) * (std::abs(f.s_ad * f.s_cc) + std::abs(f.s_ac * f.s_cd));
    const double m2_scale = std::abs(f.s_ad) * (std::abs(f.s_cd * f.s_aa) + std::abs(f.s_ac * f.s_ad));
    ids.add("M1 from correlations",
            f.r_cd * (f.r_ad - f.r_ac * f.r_cd) * std::pow(f.s_cc, 1.5) * f.s_dd * std::sqrt(f.s_aa), f.M1(),
            m1_scale);
    ids.add("M2 from correlations",
            f.r_ad * (f.r_cd - f.r_ac * f.r_ad) * std::pow(f.s_aa, 1.5) * f.s_dd * std::sqrt(f.s_cc), f.M2(),
            m2_scale);
    const double u = f.a_family - f.K_prime;
    ids.add("M3 from correlations", (u * f.r_ac - f.K * f.r_ad * f.r_cd) * ac_scale * f.s_dd, f.M3(f.a_family),
            std::abs(u * f.s_ac * f.s_dd) + std::abs(f.K * f.s_ad * f.s_cd));

    const double q12 = f.q_ad(f.a_family) * f.q_cd(f.a_family);
    ids.add("dL/da in terms of M1, M2, M3",
            f.dL(f.a_family) * q12 * q12 * ac_scale * f.s_dd * f.s_dd * std::pow(f.s_aa * f.s_cc, 1.5),
            f.derivative_sign_form(f.a_family), f.derivative_sign_scale(f.a_family));
}

void near_as_d_identities(const Family& fam, const GaussianParams& p, const CovMatrix& s, const LForm& f,
                          IdentityList& ids) {
    const Vertex n = fam.near, z = fam.far;
    const double b = p.coefficient_at(n, z);
    const double tau = p.noise_variance_at(z);
    std::vector<Vertex> others{fam.a, fam.c};
    others.insert(others.end(), fam.b_set.begin(), fam.b_set.end());
    for (Vertex v : others) {
        ids.add("cov(" + fam.dag.name(v) + ", far) = b cov(" + fam.dag.name(v) + ", near)", s(v, z), b * s(v, n),
                std::sqrt(s(v, v) * s(z, z)));
    }
    ids.add("var(far) = b^2 var(near) + tau2", s(z, z), b * b * s(n, n) + tau);
    auto cc = [&](Vertex u, Vertex v) { return cond_cov(s, u, v, fam.b_set); };
    for (Vertex y : {fam.a, fam.c}) {
        ids.add("cov(" + fam.dag.name(y) + ", far | B) = b cov(" + fam.dag.name(y) + ", near | B)", cc(y, z),
                b * cc(y, n), std::sqrt(cc(y, y) * cc(z, z)));
    }
    ids.add("var(far | B) = b^2 var(near | B) + tau2", cc(z, z), b * b * cc(n, n) + tau);
    ids.add("a from coefficients", f.a_family, 1 + tau / (b * b * s(n, n)));
}

void far_as_d_identities(const Family& fam, const GaussianParams& p, const CovMatrix& s, const LForm& f,
                         IdentityList& ids) {
    const Vertex z = fam.near, zp = fam.far;
    const double tau_zp = p.noise_variance_at(zp);
    const bool direct = fam.chain_length == 1;
    const double cov_z_zp = direct ? p.coefficient_at(zp, z) * tau_zp : s(z, zp);
    const double g = s(z, z) / cov_z_zp;
    for (Vertex bi : fam.b_set) {
        ids.add("cov(" + fam.dag.name(bi) + ", Z) proportional to cov(" + fam.dag.name(bi) + ", Z')", s(bi, z),
                g * s(bi, zp), std::sqrt(s(bi, bi) * s(z, z)));
    }
    auto cc = [&](Vertex u, Vertex v) { return cond_cov(s, u, v, fam.b_set); };
    for (Vertex y : {fam.a, fam.c}) {
        ids.add("cov(" + fam.dag.name(y) + ", Z | B) proportional to cov(" + fam.dag.name(y) + ", Z' | B)", cc(y, z),
                g * cc(y, zp), std::sqrt(cc(y, y) * cc(z, z)));
    }
    const double q = s(zp, zp) - cc(zp, zp);
    ids.add("var(Z | B) through Z'", cc(z, z), g * g * (cov_z_zp * cov_z_zp / s(z, z) - q), s(z, z));
    ids.add("var(Z' | B) = tau2_Z' - q", cc(zp, zp), tau_zp - q, tau_zp);
    ids.add("cov(A, Z) = 0", s(fam.a, z), 0, std::sqrt(s(fam.a, fam.a) * s(z, z)));
    ids.add("cov(A, Z') = 0", s(fam.a, zp), 0, std::sqrt(s(fam.a, fam.a) * s(zp, zp)));
    if (direct) {
        const double b6 = p.coefficient_at(zp, z);
        ids.add("a from coefficients", f.a_family, 1 / (1 + p.noise_variance_at(z) / (b6 * b6 * tau_zp)));
    }
}

void fork_closed_forms(const Family& fam, const GaussianParams& p, const CovMatrix& s, IdentityList& ids) {
    const Vertex A = fam.a, C = fam.c, X = fam.at("X"), Zp = fam.at("Z'"), Z = fam.at("Z");
    const double b1 = p.coefficient_at(X, A), b2 = p.coefficient_at(X, C);
    const double b3 = p.coefficient_at(X, Zp), b4 = p.coefficient_at(Zp, Z);
    const double tX = p.noise_variance_at(X), tA = p.noise_variance_at(A), tC = p.noise_variance_at(C);
    const double tZp = p.noise_variance_at(Zp), tZ = p.noise_variance_at(Z);
    const double sAA = s(A, A), sCC = s(C, C), sAC = s(A, C), sAZp = s(A, Zp), sCZp = s(C, Zp),
                 sZpZp = s(Zp, Zp);

    ids.add("cov(A, Z') = b1 b3 tau2_X", sAZp, b1 * b3 * tX);
    ids.add("cov(C, Z') = b2 b3 tau2_X", sCZp, b2 * b3 * tX);
    ids.add("cov(A, C) = b1 b2 tau2_X", sAC, b1 * b2 * tX);
    ids.add("var(A) = b1^2 tau2_X + tau2_A", sAA, b1 * b1 * tX + tA);

    const double a = 1 + tZ / (b4 * b4 * sZpZp);
    const double p1 = a * sAC * sZpZp - sAZp * sCZp;
    const double p0 = sAC * sZpZp - sAZp * sCZp;
    const double p_scale = std::abs(a * sAC * sZpZp) + std::abs(sAZp * sCZp);
    const double qa1 = a * sAA * sZpZp - sAZp * sAZp, qa0 = sAA * sZpZp - sAZp * sAZp;
    const double qc1 = a * sCC * sZpZp - sCZp * sCZp, qc0 = sCC * sZpZp - sCZp * sCZp;
    ids.add("rho2 given Z in terms of a", pcorr2(s, A, C, VertexSet{Z}), p1 * p1 / (qa1 * qc1),
            p_scale * p_scale / std::abs(qa1 * qc1));
    ids.add("rho2 given Z' from marginal covariances", pcorr2(s, A, C, VertexSet{Zp}), p0 * p0 / (qa0 * qc0),
            p_scale * p_scale / std::abs(qa0 * qc0));

    // A-side term difference, combined over a common denominator.
    const double n_a = p1 * qa0 - p0 * qa1;
    const double n_a_scale = p_scale * (std::abs(a * sAA * sZpZp) + sAZp * sAZp) * 2;
    ids.add("A-side numerator, covariance form", n_a, (a - 1) * sAZp * sZpZp * (sCZp * sAA - sAZp * sAC), n_a_scale);
    ids.add("A-side numerator, coefficient form", n_a,
            (a - 1) * sZpZp * b1 * b3 * tX * (b2 * b3 * tX * sAA - b1 * b1 * b2 * b3 * tX * tX), n_a_scale);
    ids.add("A-side numerator, factored", n_a, (a - 1) * sZpZp * b1 * b2 * b3 * b3 * tX * tX * (sAA - b1 * b1 * tX),
            n_a_scale);
    ids.add("A-side numerator, var(A) expanded", n_a,
            (a - 1) * sZpZp * b1 * b2 * b3 * b3 * tX * tX * (b1 * b1 * tX + tA - b1 * b1 * tX), n_a_scale);
    ids.add("A-side numerator, closed form", n_a, (a - 1) * sZpZp * tX * tX * tA * b3 * b3 * b1 * b2, n_a_scale);

    const double n_c = p1 * qc0 - p0 * qc1;
    const double n_c_scale = p_scale * (std::abs(a * sCC * sZpZp) + sCZp * sCZp) * 2;
    ids.add("C-side numerator, closed form", n_c, (a - 1) * sZpZp * tX * tX * tC * b3 * b3 * b1 * b2, n_c_scale);

    ids.add("numerator given Z', coefficient form", p0, b1 * b2 * tX * (sZpZp - b3 * b3 * tX), p_scale);
    ids.add("numerator given Z', closed form", p0, b1 * b2 * tX * tZp, p_scale);
}

void double_source_closed_forms(const Family& fam, const GaussianParams& p, const CovMatrix& s, const LForm& f,
                                const DoubleSourceQ& q, IdentityList& ids) {
    const Vertex A = fam.a, C = fam.c, X1 = fam.at("X1"), X2 = fam.at("X2"), B1 = fam.at("B1"),
                 B2 = fam.at("B2"), Z = fam.at("Z"), Zp = fam.at("Z'");
    const double b1 = p.coefficient_at(A, X1), b4 = p.coefficient_at(X1, X2), b2 = p.coefficient_at(X2, C);
    const double b31 = p.coefficient_at(X1, B1), b32 = p.coefficient_at(X2, B2);
    const double b5 = p.coefficient_at(Z, X1), b6 = p.coefficient_at(Zp, Z);
    const double tA = p.noise_variance_at(A), tZp = p.noise_variance_at(Zp);

    ids.add("cov(A, B1) = b1 b3(1) tau2_A", s(A, B1), b1 * b31 * tA);
    ids.add("cov(A, B2) = b1 b3(2) b4 tau2_A", s(A, B2), b1 * b32 * b4 * tA);
    ids.add("cov(B1, C) = b2 b3(1) b4 var(X1)", s(B1, C), b2 * b31 * b4 * s(X1, X1));
    ids.add("cov(B2, C) = b2 b3(2) var(X2)", s(B2, C), b2 * b32 * s(X2, X2));
    ids.add("cov(A, C) = b1 b2 b4 tau2_A", s(A, C), b1 * b2 * b4 * tA);

    auto cc = [&](Vertex u, Vertex v) { return cond_cov(s, u, v, fam.b_set); };
    const double k2 = b5 * b5 * b6 * b6;
    ids.add("cov(A, C | B) = b1 b2 tau2_A Q3", cc(A, C), b1 * b2 * tA * q.q3, std::abs(b1 * b2 * tA * b4));
    ids.add("cov(C, Z' | B) = b2 b5 b6 tau2_Z' Q3", cc(C, Zp), b2 * b5 * b6 * tZp * q.q3,
            std::abs(b2 * b5 * b6 * tZp * b4));
    ids.add("cov(A, Z' | B) = -b1 b5 b6 tau2_A tau2_Z' Q2", cc(A, Zp), -b1 * b5 * b6 * tA * tZp * q.q2);
    ids.add("M1 closed form", f.M1(),
            -b1 * b2 * k2 * tA * tZp * tZp * q.q3 * (q.q2 * cc(C, C) + b2 * b2 * q.q3 * q.q3));
    ids.add("M2 closed form", f.M2(), -b1 * b2 * k2 * tA * tZp * tZp * q.q2 * q.q3 * (cc(A, A) + b1 * b1 * tA * tA * q.q2));
    ids.add("M3 closed form", f.M3(f.a_family),
            b1 * b2 * tA * q.q3 * ((f.a_family - f.K_prime) * cc(Zp, Zp) + f.K * k2 * tZp * tZp * q.q2));
}

}  // namespace

ConformanceReport conformance_report(const Family& family, const GaussianParams& params) {
    params.validate(family.dag);
    const CovMatrix sigma = build_sigma(family.dag, params);
    const LForm f = l_form(family, sigma);

    ConformanceReport rep{family.kind, {}, trace_at(f, f.a_family)};
    IdentityList ids(rep.identities);
    generic_identities(family, sigma, f, ids);
    if (f.shape == LFormShape::NearAsD) {
        near_as_d_identities(family, params, sigma, f, ids);
    } else {
        far_as_d_identities(family, params, sigma, f, ids);
    }
    if (family.kind != FamilyKind::ForkChain && family.kind != FamilyKind::DoubleSource) {
        ids.add("cov(A, C) = 0", sigma(family.a, family.c), 0,
                std::sqrt(sigma(family.a, family.a) * sigma(family.c, family.c)));
    }
    if (family.is_canonical_shape()) {
        if (family.kind == FamilyKind::ForkChain) fork_closed_forms(family, params, sigma, ids);
        if (family.kind == FamilyKind::DoubleSource) {
            const DoubleSourceQ q = double_source_q(family, params, sigma);
            rep.trace.Q1 = q.q1;
            rep.trace.Q2 = q.q2;
            rep.trace.Q3 = q.q3;
            double_source_closed_forms(family, params, sigma, f, q, ids);
        }
    }
    return rep;
}

ConformanceReport conformance_probe(const Family& family, const GaussianParams& params) {
    ConformanceReport rep = conformance_report(family, params);
    const std::string bad = rep.first_failure();
    if (!bad.empty()) {
        for (const IdentityCheck& id : rep.identities) {
            if (id.name != bad) continue;
            char buf[160];
            std::snprintf(buf, sizeof buf, " (lhs %.17g, rhs %.17g)", id.lhs, id.rhs);
            fail(ErrorCode::ConformanceFailure,
                 std::string(to_string(family.kind)) + ": identity '" + bad + "' does not hold" + buf);
        }
    }
    return rep;
}

std::vector<LemmaAlgebraTrace> appendix_sign_probe(const Family& family, const GaussianParams& params,
                                                   std::vector<double> grid) {
    params.validate(family.dag);
    const CovMatrix sigma = build_sigma(family.dag, params);
    const LForm f = l_form(family, sigma);
    const bool near_form = f.shape == LFormShape::NearAsD;

    if (grid.empty()) {
        constexpr int points = 9;
        for (int i = 0; i < points; ++i) grid.push_back(1.0 + (f.a_family - 1.0) * i / (points - 1));
        grid.back() = f.a_family;
    }
    for (double a : grid) {
        const bool in_range = near_form ? a >= 1.0 : (a <= 1.0 && a > f.K_prime);
        if (!std::isfinite(a) || !in_range) {
            fail(ErrorCode::DomainError, "a = " + std::to_string(a) + " is outside the lemma's range");
        }
    }

    VertexSet with_d = family.b_set, with_o = family.b_set;
    with_d.insert(f.d);
    with_o.insert(f.other);
    const Family* fam = &family;
    auto endpoint = [&](double L, const VertexSet& given) {
        const double direct = pcorr2(sigma, fam->a, fam->c, given);
        return std::abs(L - direct) <= 1e-9 * std::max({std::abs(L), std::abs(direct), 1e-12});
    };

    std::vector<LemmaAlgebraTrace> out;
    for (double a : grid) {
        LemmaAlgebraTrace t = trace_at(f, a);
        if (a == 1.0) t.endpoint_matches = endpoint(t.L, with_d);
        if (a == f.a_family) t.endpoint_matches = t.endpoint_matches && endpoint(t.L, with_o);
        const bool sign_ok =
            t.sign_observed == 0 || t.sign_expected == 0 || t.sign_observed == t.sign_expected;
        if (!sign_ok || !t.constraints_hold || !t.endpoint_matches) {
            fail(ErrorCode::ConformanceFailure,
                 std::string(to_string(family.kind)) + ": L(a) probe failed at a = " + std::to_string(a) +
                     (sign_ok ? "" : " (derivative sign)") + (t.constraints_hold ? "" : " (constraints)") +
                     (t.endpoint_matches ? "" : " (endpoint value)"));
        }
        out.push_back(t);
    }
    return out;
}

}  // namespace pathdep
