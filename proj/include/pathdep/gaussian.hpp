#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pathdep/dag.hpp"

namespace pathdep {

/// Edge coefficients and noise variances of the linear structural model
/// v = sum_{p in pa(v)} b_{vp} p + eps_v, eps_v ~ N(0, tau2_v).
class GaussianParams {
public:
    GaussianParams() = default;

    /// Every coefficient and variance set to the given constants.
    static GaussianParams constant(const Dag& dag, double coefficient, double variance);
    static GaussianParams unit(const Dag& dag) { return constant(dag, 1.0, 1.0); }

    void set_coefficient(Vertex parent, Vertex child, double b) { coeffs_[Edge{parent, child}] = b; }
    void set_noise_variance(Vertex v, double tau2) { noise_vars_[v] = tau2; }

    std::optional<double> coefficient(Vertex parent, Vertex child) const;
    std::optional<double> noise_variance(Vertex v) const;
    /// Throw MissingCoefficient.
    double coefficient_at(Vertex parent, Vertex child) const;
    double noise_variance_at(Vertex v) const;

    const std::map<Edge, double>& coefficients() const { return coeffs_; }
    const std::map<Vertex, double>& noise_variances() const { return noise_vars_; }

    /// MissingCoefficient, ZeroCoefficient, NonpositiveVariance.
    void validate(const Dag& dag) const;

    /// Coefficients in dag edge order, then variances in vertex order.
    std::vector<double> flatten(const Dag& dag) const;

private:
    std::map<Edge, double> coeffs_;
    std::map<Vertex, double> noise_vars_;
};

/// Dense covariance over all vertices, indexed by Vertex::index.
class CovMatrix {
public:
    CovMatrix(std::vector<std::string> names, Eigen::MatrixXd entries,
              std::vector<std::size_t> elimination_rank = {});

    std::size_t size() const { return static_cast<std::size_t>(entries_.rows()); }
    double operator()(Vertex u, Vertex v) const { return entries_(u.index, v.index); }
    const Eigen::MatrixXd& matrix() const { return entries_; }
    const std::vector<std::string>& names() const { return names_; }
    /// Rank used to order default elimination (topological for build_sigma output).
    std::size_t elimination_rank(Vertex v) const { return rank_.at(v.index); }

    bool is_symmetric(double rel_tol = 1e-12) const;
    bool is_positive_definite() const;

    void check_vertex(Vertex v) const;

private:
    std::vector<std::string> names_;
    Eigen::MatrixXd entries_;
    std::vector<std::size_t> rank_;
};

/// Sigma = B^{-1} Delta B^{-T} via a unit-lower-triangular solve in
/// topological order.
CovMatrix build_sigma(const Dag& dag, const GaussianParams& params);

/// Conditioning vertices in default elimination order.
std::vector<Vertex> default_elimination_order(const CovMatrix& sigma, const VertexSet& given);

/// Conditional covariance of a and b given `given`, by eliminating one
/// conditioning vertex at a time:
///   s_{12|3..p} = s_{12|3..p-1} - s_{1p|3..p-1} s_{p2|3..p-1} / s_{pp|3..p-1}.
double cond_cov(const CovMatrix& sigma, Vertex a, Vertex b, const VertexSet& given);
double cond_cov(const CovMatrix& sigma, Vertex a, Vertex b, std::span<const Vertex> elimination_order);

struct PairCovariance {
    double aa = 0;
    double ac = 0;
    double cc = 0;
};

PairCovariance cond_pair_cov(const CovMatrix& sigma, Vertex a, Vertex c,
                             std::span<const Vertex> elimination_order);

/// Squared partial correlation rho^2_{ac|given}, in [0,1].
double pcorr2(const CovMatrix& sigma, Vertex a, Vertex c, const VertexSet& given);
double pcorr2(const CovMatrix& sigma, Vertex a, Vertex c, std::span<const Vertex> elimination_order);

/// -1/2 log(1 - rho2). DomainError outside [0,1).
double info_proper(double rho2);

}  // namespace pathdep
