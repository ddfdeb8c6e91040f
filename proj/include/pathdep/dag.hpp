#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pathdep {

/// Index of a vertex in its Dag (declaration order).
struct Vertex {
    std::uint32_t index = 0;

    auto operator<=>(const Vertex&) const = default;
};

using VertexSet = std::set<Vertex>;

struct Edge {
    Vertex parent;
    Vertex child;

    auto operator<=>(const Edge&) const = default;
};

/// A non-repeating sequence of skeleton-adjacent vertices.
struct Path {
    std::vector<Vertex> vertices;

    Vertex front() const { return vertices.front(); }
    Vertex back() const { return vertices.back(); }
    std::size_t size() const { return vertices.size(); }
    bool contains(Vertex v) const;
    std::optional<std::size_t> index_of(Vertex v) const;
    Path reversed() const;
};

enum class VertexRole { Collider, NonCollider, Endpoint };
enum class Direction { Ancestors, Descendants };

/// Immutable directed acyclic graph with named vertices.
///
/// Construction validates names and edges and fixes a topological order that
/// is stable with respect to declaration order, so matrix layouts derived
/// from it are reproducible.
class Dag {
public:
    static Dag build(std::vector<std::string> names,
                     const std::vector<std::pair<std::string, std::string>>& edges);

    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(Vertex v) const { return names_.at(v.index); }
    std::optional<Vertex> find(std::string_view name) const;
    /// Throws UnknownVertex.
    Vertex at(std::string_view name) const;
    std::vector<Vertex> vertices() const;

    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<Vertex>& parents(Vertex v) const { return parents_.at(v.index); }
    const std::vector<Vertex>& children(Vertex v) const { return children_.at(v.index); }
    std::vector<Vertex> neighbors(Vertex v) const;
    bool has_edge(Vertex parent, Vertex child) const;
    bool adjacent(Vertex u, Vertex v) const { return has_edge(u, v) || has_edge(v, u); }

    const std::vector<Vertex>& topo_order() const { return topo_order_; }
    std::size_t topo_rank(Vertex v) const { return topo_rank_.at(v.index); }

    /// Skeleton connected-component id.
    std::size_t component(Vertex v) const { return component_.at(v.index); }
    bool singly_connected() const { return singly_connected_; }

    /// Throws UnknownVertex when v is out of range.
    void check_vertex(Vertex v) const;

    /// Subgraph induced on `keep`, vertex names preserved.
    Dag induced_subgraph(const VertexSet& keep) const;
    /// Same vertices with one additional edge (validated like build()).
    Dag with_edge(Vertex parent, Vertex child) const;
    /// Same vertices with one edge removed.
    Dag without_edge(Vertex parent, Vertex child) const;

    std::string format_set(const VertexSet& set) const;

private:
    Dag() = default;

    std::vector<std::string> names_;
    std::vector<Edge> edges_;
    std::vector<std::vector<Vertex>> parents_;
    std::vector<std::vector<Vertex>> children_;
    std::vector<Vertex> topo_order_;
    std::vector<std::size_t> topo_rank_;
    std::vector<std::size_t> component_;
    bool singly_connected_ = true;
};

bool is_valid_vertex_name(std::string_view name);

inline Dag build_dag(std::vector<std::string> names,
                     const std::vector<std::pair<std::string, std::string>>& edges) {
    return Dag::build(std::move(names), edges);
}

/// True iff the undirected skeleton is a forest.
bool is_singly_connected(const Dag& dag);

/// The unique skeleton path from a to c.
/// Throws NotSinglyConnected, SameVertex, Disconnected.
Path unique_path(const Dag& dag, Vertex a, Vertex c);

/// Throws NotOnPath.
VertexRole classify_on_path(const Dag& dag, const Path& path, Vertex v);

/// Collider test by position; positions 0 and size-1 are never colliders.
bool is_collider_at(const Dag& dag, const Path& path, std::size_t position);

/// Reflexive-transitive closure of `seed` along (or against) edge direction.
VertexSet closure(const Dag& dag, const VertexSet& seed, Direction direction);

struct Lemma51Violation {
    std::string rule;
    std::string detail;
};

/// Structural facts every singly connected DAG satisfies: at most one common
/// parent, at most one common child, not both, and every off-path vertex is
/// adjacent to at most one vertex of any path. An empty report means all hold.
std::vector<Lemma51Violation> lemma51_report(const Dag& dag);

}  // namespace pathdep
