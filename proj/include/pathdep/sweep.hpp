#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pathdep/dag.hpp"
#include "pathdep/families.hpp"
#include "pathdep/gaussian.hpp"

namespace pathdep {

enum class Trend { Increasing, Decreasing };

/// Where the curve meets its reference value: far from the path (the curve
/// settles onto it as the distance grows) or at the path itself.
enum class Approach { WithDistance, TowardPath };

struct SweepRow {
    std::size_t chain_length = 0;
    std::size_t distance = 0;  ///< edges between the conditioning vertex and the path
    std::string vertex;
    double rho2 = 0;
};

struct SweepTable {
    FamilyKind kind;
    std::size_t b_side = 0;
    std::vector<SweepRow> rows;
    double reference = 0;
    std::string reference_label;
    Trend trend = Trend::Increasing;
    Approach approach = Approach::WithDistance;
    /// Nearest conditioning point, ahead of the rows: the attachment vertex
    /// (distance 0) for downward chains, Z (distance 1) otherwise.
    SweepRow anchor;
    bool monotone = false;
    /// Every row on the reference's side of the curve (and, for a
    /// TowardPath curve, the distance-0 row equal to the reference).
    bool bounded = false;

    bool shape_ok() const { return monotone && bounded; }
};

/// Unit parameters for every family member unless `coefficient` or
/// `variance` say otherwise. Throws NonpositiveVariance, ZeroCoefficient.
struct ParamTemplate {
    double coefficient = 1.0;
    double variance = 1.0;
};

/// Builds the family with chain length max_length once; row L conditions on
/// B and the chain vertex reached after L steps (the far end of a length-L
/// chain). Vertices further out are not conditioned on, so for downward
/// chains each row equals the far-end value of the length-L family; for
/// upward chains a fixed graph keeps the reference value fixed across rows.
/// Throws DomainError for max_length 0.
SweepTable sweep_chain_length(FamilyKind kind, std::size_t max_length, std::optional<std::size_t> b_side = {},
                              const ParamTemplate& tmpl = {});

void write_sweep_csv(std::ostream& out, const SweepTable& table);

struct SearchConfig {
    std::uint64_t seed = 0;
    std::size_t max_vertices = 8;
    std::size_t trials = 10000;
    /// Sweep an existing edge of a polytree instead of adding one.
    bool polytree_only = false;
    double lo = -4.0;
    double hi = 4.0;
    std::size_t steps = 81;
    bool unit_params = false;
};

struct SweepPoint {
    double coefficient = 0;
    double rho2_z1 = 0;
    double rho2_z2 = 0;
};

/// A set pair ordered on the underlying polytree whose rho^2 inequality
/// reverses for some values of the swept coefficient.
struct Witness {
    std::size_t trial = 0;
    Dag tree;   ///< polytree the order is evaluated on
    Dag graph;  ///< graph with the swept edge present
    Edge swept;
    Vertex a, c;
    VertexSet z1, z2;
    GaussianParams params;  ///< swept coefficient excluded
    std::vector<SweepPoint> sweep;
    /// Coefficients where rho2_z1 - rho2_z2 changes sign, linearly interpolated.
    std::vector<double> crossings;
    /// rho2_z1 <= rho2_z2 at coefficient 0 (the edge removed).
    bool order_at_zero_holds = false;
    std::size_t flips_below_zero = 0;
    std::size_t flips_above_zero = 0;
};

struct SearchResult {
    std::optional<Witness> witness;
    std::size_t trials_run = 0;
    std::size_t instances_swept = 0;
};

/// Margin by which rho2_z1 must exceed rho2_z2 to count as a reversal.
inline constexpr double kFlipMargin = 1e-9;

/// Random polytree, random set pair z1 < z2 on it, then either an extra edge
/// (making the graph multiply connected) or an existing edge has its
/// coefficient swept over [lo, hi]. Stops at the first reversal. Throws
/// DomainError for max_vertices outside [3, 10] or fewer than 2 steps.
SearchResult counterexample_search(const SearchConfig& config);

void write_witness_csv(std::ostream& out, const Witness& w);

}  // namespace pathdep
