#include "pathdep/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pathdep/error.hpp"

namespace pathdep {

GaussianParams GaussianParams::constant(const Dag& dag, double coefficient, double variance) {
    GaussianParams p;
    for (const Edge& e : dag.edges()) p.set_coefficient(e.parent, e.child, coefficient);
    for (Vertex v : dag.vertices()) p.set_noise_variance(v, variance);
    return p;
}

std::optional<double> GaussianParams::coefficient(Vertex parent, Vertex child) const {
    auto it = coeffs_.find(Edge{parent, child});
    if (it == coeffs_.end()) return std::nullopt;
    return it->second;
}

std::optional<double> GaussianParams::noise_variance(Vertex v) const {
    auto it = noise_vars_.find(v);
    if (it == noise_vars_.end()) return std::nullopt;
    return it->second;
}

double GaussianParams::coefficient_at(Vertex parent, Vertex child) const {
    auto b = coefficient(parent, child);
    if (!b) {
        fail(ErrorCode::MissingCoefficient,
             "no coefficient for edge " + std::to_string(parent.index) + " -> " + std::to_string(child.index));
    }
    return *b;
}

double GaussianParams::noise_variance_at(Vertex v) const {
    auto t = noise_variance(v);
    if (!t) fail(ErrorCode::MissingCoefficient, "no noise variance for vertex " + std::to_string(v.index));
    return *t;
}

void GaussianParams::validate(const Dag& dag) const {
    for (const Edge& e : dag.edges()) {
        auto b = coefficient(e.parent, e.child);
        std::string edge = dag.name(e.parent) + " -> " + dag.name(e.child);
        if (!b) fail(ErrorCode::MissingCoefficient, "no coefficient for edge " + edge);
        if (!std::isfinite(*b)) fail(ErrorCode::DomainError, "non-finite coefficient on " + edge);
        if (*b == 0.0) fail(ErrorCode::ZeroCoefficient, "coefficient on " + edge + " is zero");
    }
    for (const auto& [edge, b] : coeffs_) {
        if (edge.parent.index >= dag.size() || edge.child.index >= dag.size() ||
            !dag.has_edge(edge.parent, edge.child)) {
            fail(ErrorCode::UnknownEndpoint, "coefficient given for an edge not in the graph");
        }
    }
    for (Vertex v : dag.vertices()) {
        auto t = noise_variance(v);
        if (!t) fail(ErrorCode::MissingCoefficient, "no noise variance for '" + dag.name(v) + "'");
        if (!(*t > 0.0) || !std::isfinite(*t)) {
            fail(ErrorCode::NonpositiveVariance, "noise variance of '" + dag.name(v) + "' must be > 0");
        }
    }
}

std::vector<double> GaussianParams::flatten(const Dag& dag) const {
    std::vector<double> out;
    for (const Edge& e : dag.edges()) out.push_back(coefficient_at(e.parent, e.child));
    for (Vertex v : dag.vertices()) out.push_back(noise_variance_at(v));
    return out;
}

CovMatrix::CovMatrix(std::vector<std::string> names, Eigen::MatrixXd entries, std::vector<std::size_t> rank)
    : names_(std::move(names)), entries_(std::move(entries)), rank_(std::move(rank)) {
    if (entries_.rows() != entries_.cols() || static_cast<std::size_t>(entries_.rows()) != names_.size()) {
        fail(ErrorCode::DomainError, "covariance shape does not match vertex list");
    }
    if (rank_.empty()) {
        rank_.resize(names_.size());
        std::iota(rank_.begin(), rank_.end(), std::size_t{0});
    }
}

bool CovMatrix::is_symmetric(double rel_tol) const {
    const double scale = std::max(1e-300, entries_.cwiseAbs().maxCoeff());
    return (entries_ - entries_.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

bool CovMatrix::is_positive_definite() const {
    Eigen::LLT<Eigen::MatrixXd> llt(entries_);
    return llt.info() == Eigen::Success;
}

void CovMatrix::check_vertex(Vertex v) const {
    if (v.index >= size()) fail(ErrorCode::UnknownVertex, "vertex index out of range for covariance");
}

CovMatrix build_sigma(const Dag& dag, const GaussianParams& params) {
    params.validate(dag);
    const auto n = static_cast<Eigen::Index>(dag.size());
    // B in topological coordinates is unit lower triangular.
    Eigen::MatrixXd b = Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd delta(n);
    for (Vertex v : dag.vertices()) {
        const auto row = static_cast<Eigen::Index>(dag.topo_rank(v));
        delta(row) = params.noise_variance_at(v);
        for (Vertex p : dag.parents(v)) {
            b(row, static_cast<Eigen::Index>(dag.topo_rank(p))) = -params.coefficient_at(p, v);
        }
    }
    Eigen::MatrixXd binv = b.triangularView<Eigen::UnitLower>().solve(Eigen::MatrixXd::Identity(n, n));
    Eigen::MatrixXd topo_sigma = binv * delta.asDiagonal() * binv.transpose();
    topo_sigma = 0.5 * (topo_sigma + topo_sigma.transpose());

    Eigen::MatrixXd sigma(n, n);
    std::vector<std::size_t> rank(dag.size());
    for (Vertex u : dag.vertices()) {
        rank[u.index] = dag.topo_rank(u);
        for (Vertex v : dag.vertices()) {
            sigma(u.index, v.index) = topo_sigma(static_cast<Eigen::Index>(dag.topo_rank(u)),
                                                 static_cast<Eigen::Index>(dag.topo_rank(v)));
        }
    }
    return CovMatrix(dag.names(), std::move(sigma), std::move(rank));
}

std::vector<Vertex> default_elimination_order(const CovMatrix& sigma, const VertexSet& given) {
    std::vector<Vertex> order(given.begin(), given.end());
    for (Vertex v : order) sigma.check_vertex(v);
    std::sort(order.begin(), order.end(), [&](Vertex x, Vertex y) {
        return sigma.elimination_rank(x) < sigma.elimination_rank(y);
    });
    return order;
}

namespace {

/// Runs the one-at-a-time elimination over targets followed by the
/// conditioning vertices. Returns the conditional block of the targets.
Eigen::MatrixXd eliminate(const CovMatrix& sigma, std::span<const Vertex> targets,
                          std::span<const Vertex> order) {
    for (Vertex t : targets) sigma.check_vertex(t);
    VertexSet seen;
    for (Vertex v : order) {
        sigma.check_vertex(v);
        if (std::find(targets.begin(), targets.end(), v) != targets.end()) {
            fail(ErrorCode::OverlapError, sigma.names()[v.index] + " is both a target and conditioned on");
        }
        if (!seen.insert(v).second) {
            fail(ErrorCode::OverlapError, sigma.names()[v.index] + " appears twice in the conditioning set");
        }
    }
    const auto nt = static_cast<Eigen::Index>(targets.size());
    const auto nz = static_cast<Eigen::Index>(order.size());
    std::vector<Vertex> all(targets.begin(), targets.end());
    all.insert(all.end(), order.begin(), order.end());
    const auto m = nt + nz;
    Eigen::MatrixXd work(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) work(i, j) = sigma(all[i], all[j]);
    }
    // Eliminate the conditioning vertices one at a time, front to back.
    for (Eigen::Index k = nt; k < m; ++k) {
        const double pivot = work(k, k);
        const double scale = sigma(all[k], all[k]);
        if (!(pivot > 1e-14 * scale)) {
            fail(ErrorCode::SingularConditioning, "conditioning block is not positive definite at " +
                                                      sigma.names()[all[k].index]);
        }
        for (Eigen::Index i = 0; i < m; ++i) {
            if (i == k) continue;
            for (Eigen::Index j = 0; j < m; ++j) {
                if (j == k) continue;
                work(i, j) -= work(i, k) * work(k, j) / pivot;
            }
        }
    }
    return work.topLeftCorner(nt, nt);
}

}  // namespace

double cond_cov(const CovMatrix& sigma, Vertex a, Vertex b, std::span<const Vertex> elimination_order) {
    if (a == b) {
        const Vertex t[] = {a};
        return eliminate(sigma, t, elimination_order)(0, 0);
    }
    const Vertex t[] = {a, b};
    return eliminate(sigma, t, elimination_order)(0, 1);
}

double cond_cov(const CovMatrix& sigma, Vertex a, Vertex b, const VertexSet& given) {
    auto order = default_elimination_order(sigma, given);
    return cond_cov(sigma, a, b, std::span<const Vertex>(order));
}

PairCovariance cond_pair_cov(const CovMatrix& sigma, Vertex a, Vertex c,
                             std::span<const Vertex> elimination_order) {
    if (a == c) fail(ErrorCode::SameVertex, "pair covariance needs two distinct vertices");
    const Vertex t[] = {a, c};
    Eigen::MatrixXd block = eliminate(sigma, t, elimination_order);
    return {block(0, 0), 0.5 * (block(0, 1) + block(1, 0)), block(1, 1)};
}

double pcorr2(const CovMatrix& sigma, Vertex a, Vertex c, std::span<const Vertex> elimination_order) {
    PairCovariance pc = cond_pair_cov(sigma, a, c, elimination_order);
    if (pc.ac == 0.0) return 0.0;
    const double r2 = pc.ac * pc.ac / (pc.aa * pc.cc);
    return std::min(1.0, r2);
}

double pcorr2(const CovMatrix& sigma, Vertex a, Vertex c, const VertexSet& given) {
    auto order = default_elimination_order(sigma, given);
    return pcorr2(sigma, a, c, std::span<const Vertex>(order));
}

double info_proper(double rho2) {
    if (!(rho2 >= 0.0) || !(rho2 < 1.0)) {
        fail(ErrorCode::DomainError, "information proper needs 0 <= rho2 < 1, got " + std::to_string(rho2));
    }
    return -0.5 * std::log1p(-rho2);
}

}  // namespace pathdep
