#pragma once

#include <cstdint>
#include <vector>

#include "pathdep/dag.hpp"
#include "pathdep/gaussian.hpp"

namespace pathdep {

/// Absolute tolerance under which a squared partial correlation counts as zero.
inline constexpr double kRho2ZeroTolerance = 1e-10;

struct SeparationQuery {
    VertexSet x;
    VertexSet y;
    VertexSet z;
};

/// Throws UnknownVertex, OverlappingSets (also when x or y is empty).
void validate_query(const Dag& dag, const SeparationQuery& q);

/// Every non-collider outside z and every collider in an(z).
/// Throws EndpointConditioned when an endpoint is in z.
bool is_active_path(const Dag& dag, const Path& path, const VertexSet& z);

/// Dispatches to the polytree routine when the skeleton is a forest.
bool d_separated(const Dag& dag, const SeparationQuery& q);
/// Checks the unique path of every pair. Throws NotSinglyConnected.
bool d_separated_polytree(const Dag& dag, const SeparationQuery& q);
/// Reachability in the moralized graph of an(x u y u z) after deleting z.
bool d_separated_general(const Dag& dag, const SeparationQuery& q);

struct Lemma52Disagreement {
    VertexSet s1, s2, s3;
    bool separated_in_graph = false;
    bool separated_in_subgraph = false;
};

/// Samples disjoint S1, S2 (nonempty) and S3 from the vertices of y..z and
/// compares their d-separation in the full graph against the subgraph
/// induced on the path. Returns the disagreements found.
std::vector<Lemma52Disagreement> lemma52_equiv_check(const Dag& dag, Vertex y, Vertex z, std::size_t trials,
                                                     std::uint64_t seed);

/// d-separated(a, c | given) <=> rho^2 < kRho2ZeroTolerance.
bool faithfulness_probe(const Dag& dag, const GaussianParams& params, Vertex a, Vertex c,
                        const VertexSet& given);

}  // namespace pathdep
