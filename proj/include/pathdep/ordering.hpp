#pragma once

#include <map>
#include <string_view>
#include <utility>
#include <vector>

#include "pathdep/dag.hpp"

namespace pathdep {

/// Classes of a conditioning vertex z by collider status at its meeting
/// vertex x*_z on the three paths a..c, a..z and c..z.
enum class ConditioningClass {
    NonCollider,          ///< none of the three paths has a collider at x*_z
    ColliderCollider,     ///< a..z or c..z has a collider at x*_z
    ColliderNonCollider,  ///< only a..c has a collider at x*_z
};

std::string_view to_string(ConditioningClass k) noexcept;

struct MeetingVertex {
    Vertex z;
    Vertex x_star;
};

struct ConditioningPartition {
    VertexSet z_nc, z_c_c, z_c_nc;
    std::map<Vertex, MeetingVertex> meetings;
    VertexSet n_nc, n_c_c, n_c_nc;

    const VertexSet& members(ConditioningClass k) const;
    const VertexSet& nearest(ConditioningClass k) const;
    /// N(nc) u N(c-c) u N(c-nc).
    VertexSet nearest_union() const;
};

/// One clause of the order: (further, nearer) is required to be a total
/// further-nearer pair. `pairing` lists each nearer vertex with the further
/// vertices it lies between the path and.
struct ClauseResult {
    ConditioningClass cls = ConditioningClass::NonCollider;
    bool holds = false;
    VertexSet further;
    VertexSet nearer;
    std::vector<std::pair<Vertex, Vertex>> pairing;  ///< (further, nearer)
};

struct OrderWitness {
    bool holds = false;
    ClauseResult nc;    ///< further side from z2
    ClauseResult c_c;   ///< further side from z1
    ClauseResult c_nc;  ///< further side from z1
};

/// One swap of the telescoping product: conditioning on `z1_side` is
/// replaced by conditioning on `z2_side`.
struct SwapStep {
    ConditioningClass cls;
    Vertex z1_side;
    Vertex z2_side;
};

/// Nearest sets padded with redundant further vertices so both sides have
/// equal per-class cardinality and a one-to-one further-nearer matching.
struct NormalizedPair {
    VertexSet z1;
    VertexSet z2;
    std::vector<SwapStep> steps;  ///< nc class, then c-c, then c-nc
};

/// Everything the order needs about a fixed pair (a, c) of a polytree:
/// the path, the relevant vertex set, meeting vertices, classes and the
/// segment x*_z..z (which equals a..z intersected with c..z).
class PathFrame {
public:
    /// Throws NotSinglyConnected, SameVertex, Disconnected.
    PathFrame(const Dag& dag, Vertex a, Vertex c);

    const Dag& dag() const { return dag_; }
    Vertex a() const { return a_; }
    Vertex c() const { return c_; }
    const Path& path() const { return path_; }

    /// Vertices other than a, c that are d-connected given the empty set
    /// to some vertex of a..c; this includes the interior path vertices.
    const VertexSet& relevant() const { return relevant_; }
    bool is_relevant(Vertex v) const { return relevant_.contains(v); }
    /// Throws NotRelevant.
    void require_relevant(const VertexSet& s) const;

    MeetingVertex meeting_vertex(Vertex z) const;
    ConditioningClass classify(Vertex z) const;
    /// x*_z .. z as a vertex set.
    const VertexSet& segment(Vertex z) const;
    /// inner lies on a..outer and on c..outer.
    bool lies_between(Vertex inner, Vertex outer) const;

    VertexSet nearest(const VertexSet& members) const;
    ConditioningPartition partition(const VertexSet& z) const;
    bool total_further_nearer(const VertexSet& further, const VertexSet& nearer) const;
    OrderWitness precedes(const VertexSet& z1, const VertexSet& z2) const;
    /// Same relation from precomputed partitions (for enumerating many pairs).
    OrderWitness precedes(const ConditioningPartition& p1, const ConditioningPartition& p2) const;
    VertexSet reduce_to_nearest(const VertexSet& z) const;
    /// Throws PrecedenceNotEstablished, NormalizationFailed.
    NormalizedPair normalize_cardinality(const VertexSet& z1, const VertexSet& z2) const;

private:
    struct Info {
        Vertex x_star;
        ConditioningClass cls;
        VertexSet segment;
    };
    const Info& info(Vertex z) const;
    ClauseResult clause(ConditioningClass cls, const VertexSet& further, const VertexSet& nearer) const;

    Dag dag_;
    Vertex a_, c_;
    Path path_;
    VertexSet relevant_;
    std::map<Vertex, Info> info_;
};

VertexSet relevant_set(const Dag& dag, Vertex a, Vertex c);
MeetingVertex meeting_vertex(const Dag& dag, Vertex a, Vertex c, Vertex z);
ConditioningPartition partition(const Dag& dag, Vertex a, Vertex c, const VertexSet& z);
bool total_further_nearer(const Dag& dag, Vertex a, Vertex c, const VertexSet& s2, const VertexSet& s1);
OrderWitness precedes(const Dag& dag, Vertex a, Vertex c, const VertexSet& z1, const VertexSet& z2);
VertexSet reduce_to_nearest(const Dag& dag, Vertex a, Vertex c, const VertexSet& z);
NormalizedPair normalize_cardinality(const Dag& dag, Vertex a, Vertex c, const VertexSet& z1,
                                     const VertexSet& z2);

}  // namespace pathdep
