#include "pathdep/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "pathdep/error.hpp"
#include "pathdep/ordering.hpp"
#include "pathdep/random.hpp"
#include "pathdep/verify.hpp"

namespace pathdep {

namespace {

std::string csv_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

}  // namespace

SweepTable sweep_chain_length(FamilyKind kind, std::size_t max_length, std::optional<std::size_t> b_side,
                              const ParamTemplate& tmpl) {
    if (max_length == 0) fail(ErrorCode::DomainError, "max_length must be at least 1");
    const Family fam = make_family(kind, max_length, b_side.value_or(default_sweep_b_side(kind)));
    const GaussianParams params = GaussianParams::constant(fam.dag, tmpl.coefficient, tmpl.variance);
    params.validate(fam.dag);
    const CovMatrix sigma = build_sigma(fam.dag, params);
    const bool downward = fam.l_form_shape() == LFormShape::NearAsD;

    auto row = [&](std::size_t length, std::size_t distance, Vertex v) {
        VertexSet given = fam.b_set;
        given.insert(v);
        return SweepRow{length, distance, fam.dag.name(v), pcorr2(sigma, fam.a, fam.c, given)};
    };

    SweepTable t;
    t.kind = kind;
    t.b_side = fam.b_side;
    t.trend = kind == FamilyKind::ForkChain ? Trend::Increasing : Trend::Decreasing;
    if (downward) {
        t.anchor = row(0, 0, fam.attach);
        for (std::size_t L = 1; L <= max_length; ++L) t.rows.push_back(row(L, L, fam.chain[L - 1]));
    } else {
        t.anchor = row(0, 1, fam.chain.front());
        for (std::size_t L = 1; L <= max_length; ++L) t.rows.push_back(row(L, L + 1, fam.chain[L]));
    }

    VertexSet ref_given = fam.b_set;
    if (kind == FamilyKind::ColliderTail) {
        ref_given.insert(fam.attach);
        t.approach = Approach::TowardPath;
    }
    t.reference = pcorr2(sigma, fam.a, fam.c, ref_given);
    t.reference_label = "rho2(A,C|" + fam.dag.format_set(ref_given) + ")";

    std::vector<double> curve{t.anchor.rho2};
    for (const SweepRow& r : t.rows) curve.push_back(r.rho2);
    t.monotone = true;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        const double step = t.trend == Trend::Increasing ? curve[i - 1] - curve[i] : curve[i] - curve[i - 1];
        if (step > kInequalitySlack) t.monotone = false;
    }
    const bool below = t.trend == Trend::Increasing || t.approach == Approach::TowardPath;
    t.bounded = std::all_of(curve.begin(), curve.end(), [&](double v) {
        return below ? v <= t.reference + kInequalitySlack : v >= t.reference - kInequalitySlack;
    });
    if (t.approach == Approach::TowardPath) {
        t.bounded = t.bounded && std::abs(t.anchor.rho2 - t.reference) <= 1e-12 * std::max(1.0, t.reference);
    }
    return t;
}

void write_sweep_csv(std::ostream& out, const SweepTable& table) {
    out << "chain_length,distance,vertex,rho2,reference\n";
    auto line = [&](const SweepRow& r) {
        out << r.chain_length << ',' << r.distance << ',' << csv_field(r.vertex) << ',' << csv_number(r.rho2) << ','
            << csv_number(table.reference) << '\n';
    };
    line(table.anchor);
    for (const SweepRow& r : table.rows) line(r);
}

// ------------------------------------------------------ counterexample search

namespace {

GaussianParams without_coefficient(const GaussianParams& p, const Edge& e) {
    GaussianParams out;
    for (const auto& [edge, b] : p.coefficients()) {
        if (edge != e) out.set_coefficient(edge.parent, edge.child, b);
    }
    for (const auto& [v, tau] : p.noise_variances()) out.set_noise_variance(v, tau);
    return out;
}

}  // namespace

SearchResult counterexample_search(const SearchConfig& cfg) {
    if (cfg.max_vertices < 3 || cfg.max_vertices > 10) {
        fail(ErrorCode::DomainError, "max_vertices must lie in [3, 10]");
    }
    if (cfg.steps < 2 || !(cfg.lo < cfg.hi)) fail(ErrorCode::DomainError, "sweep needs lo < hi and at least 2 steps");

    SearchResult result;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        ++result.trials_run;
        Rng rng(Rng::child_seed(cfg.seed, t));
        const std::size_t n = rng.between(3, cfg.max_vertices);
        const Dag tree = random_polytree(n, rng);

        Edge swept;
        if (cfg.polytree_only) {
            swept = tree.edges()[rng.below(tree.edges().size())];
        } else {
            std::vector<Edge> candidates;
            for (Vertex u : tree.vertices()) {
                for (Vertex v : tree.vertices()) {
                    if (tree.topo_rank(u) < tree.topo_rank(v) && !tree.adjacent(u, v)) candidates.push_back({u, v});
                }
            }
            if (candidates.empty()) continue;
            swept = candidates[rng.below(candidates.size())];
        }
        const Dag graph = cfg.polytree_only ? tree : tree.with_edge(swept.parent, swept.child);
        const Dag base = cfg.polytree_only ? tree.without_edge(swept.parent, swept.child) : tree;

        const Vertex a{static_cast<std::uint32_t>(rng.below(n))};
        Vertex c{static_cast<std::uint32_t>(rng.below(n - 1))};
        if (c.index >= a.index) ++c.index;

        const PathFrame frame(tree, a, c);
        const std::vector<Vertex> rel(frame.relevant().begin(), frame.relevant().end());
        std::vector<std::pair<Vertex, Vertex>> ordered;
        for (Vertex z1 : rel) {
            for (Vertex z2 : rel) {
                if (z1 != z2 && frame.precedes(VertexSet{z1}, VertexSet{z2}).holds) ordered.emplace_back(z1, z2);
            }
        }
        if (ordered.empty()) continue;
        const auto [z1, z2] = ordered[rng.below(ordered.size())];

        GaussianParams full = cfg.unit_params ? GaussianParams::unit(graph) : sample_params(graph, rng);
        const GaussianParams base_params = without_coefficient(full, swept);
        ++result.instances_swept;

        const VertexSet s1{z1}, s2{z2};
        auto evaluate = [&](double b) {
            if (b == 0.0) {
                const CovMatrix sigma = build_sigma(base, base_params);
                return SweepPoint{b, pcorr2(sigma, a, c, s1), pcorr2(sigma, a, c, s2)};
            }
            GaussianParams p = full;
            p.set_coefficient(swept.parent, swept.child, b);
            const CovMatrix sigma = build_sigma(graph, p);
            return SweepPoint{b, pcorr2(sigma, a, c, s1), pcorr2(sigma, a, c, s2)};
        };

        std::vector<SweepPoint> sweep;
        bool flipped = false, ordered_somewhere = false;
        for (std::size_t i = 0; i < cfg.steps; ++i) {
            double b = cfg.lo + (cfg.hi - cfg.lo) * static_cast<double>(i) / static_cast<double>(cfg.steps - 1);
            if (std::abs(b) < 1e-12 * (cfg.hi - cfg.lo)) b = 0.0;
            SweepPoint pt = evaluate(b);
            const double d = pt.rho2_z1 - pt.rho2_z2;
            flipped = flipped || d > kFlipMargin;
            ordered_somewhere = ordered_somewhere || d <= 0;
            sweep.push_back(pt);
        }
        if (!flipped || !ordered_somewhere) continue;

        const SweepPoint at_zero = evaluate(0.0);
        Witness w{t, tree, graph, swept, a, c, s1, s2, base_params, std::move(sweep), {}, {}, 0, 0};
        w.order_at_zero_holds = at_zero.rho2_z1 <= at_zero.rho2_z2 + kInequalitySlack;
        for (std::size_t i = 0; i < w.sweep.size(); ++i) {
            const SweepPoint& p = w.sweep[i];
            const double d = p.rho2_z1 - p.rho2_z2;
            if (d > kFlipMargin) ++(p.coefficient < 0 ? w.flips_below_zero : w.flips_above_zero);
            if (i == 0) continue;
            const SweepPoint& q = w.sweep[i - 1];
            const double dq = q.rho2_z1 - q.rho2_z2;
            if ((dq > 0) != (d > 0)) {
                const double f = dq / (dq - d);
                w.crossings.push_back(q.coefficient + f * (p.coefficient - q.coefficient));
            }
        }
        result.witness = std::move(w);
        return result;
    }
    return result;
}

void write_witness_csv(std::ostream& out, const Witness& w) {
    out << "coefficient,rho2_z1,rho2_z2,difference\n";
    for (const SweepPoint& p : w.sweep) {
        out << csv_number(p.coefficient) << ',' << csv_number(p.rho2_z1) << ',' << csv_number(p.rho2_z2) << ','
            << csv_number(p.rho2_z1 - p.rho2_z2) << '\n';
    }
}

}  // namespace pathdep
