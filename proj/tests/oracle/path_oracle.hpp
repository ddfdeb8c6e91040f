#pragma once

// Brute-force graph oracles: every simple skeleton path is enumerated and
// tested against the d-connection definition directly. Exponential, fine
// for the small graphs the tests use.

#include <algorithm>
#include <functional>
#include <set>
#include <vector>

#include "pathdep/dag.hpp"

namespace oracle {

using pathdep::Dag;
using pathdep::Vertex;
using pathdep::VertexSet;

inline bool edge(const Dag& g, Vertex p, Vertex c) {
    const auto& ch = g.children(p);
    return std::find(ch.begin(), ch.end(), c) != ch.end();
}

inline std::vector<std::vector<Vertex>> all_paths(const Dag& g, Vertex from, Vertex to) {
    std::vector<std::vector<Vertex>> out;
    std::vector<Vertex> cur{from};
    std::set<Vertex> on{from};
    std::function<void(Vertex)> dfs = [&](Vertex v) {
        if (v == to) {
            out.push_back(cur);
            return;
        }
        for (Vertex w : g.vertices()) {
            if (on.contains(w) || !(edge(g, v, w) || edge(g, w, v))) continue;
            cur.push_back(w);
            on.insert(w);
            dfs(w);
            on.erase(w);
            cur.pop_back();
        }
    };
    dfs(from);
    return out;
}

inline VertexSet ancestors(const Dag& g, const VertexSet& seed) {
    VertexSet out = seed;
    bool grew = true;
    while (grew) {
        grew = false;
        for (Vertex p : g.vertices()) {
            if (out.contains(p)) continue;
            for (Vertex v : out) {
                if (edge(g, p, v)) {
                    out.insert(p);
                    grew = true;
                    break;
                }
            }
        }
    }
    return out;
}

inline bool collider_at(const Dag& g, const std::vector<Vertex>& path, std::size_t i) {
    return i > 0 && i + 1 < path.size() && edge(g, path[i - 1], path[i]) && edge(g, path[i + 1], path[i]);
}

inline bool active(const Dag& g, const std::vector<Vertex>& path, const VertexSet& z) {
    const VertexSet anz = ancestors(g, z);
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
        if (collider_at(g, path, i) ? !anz.contains(path[i]) : z.contains(path[i])) return false;
    }
    return true;
}

inline bool d_connected(const Dag& g, Vertex x, Vertex y, const VertexSet& z) {
    for (const auto& p : all_paths(g, x, y)) {
        if (active(g, p, z)) return true;
    }
    return false;
}

inline bool d_separated(const Dag& g, const VertexSet& xs, const VertexSet& ys, const VertexSet& z) {
    for (Vertex x : xs)
        for (Vertex y : ys)
            if (d_connected(g, x, y, z)) return false;
    return true;
}

/// Single skeleton path of a polytree (the only element of all_paths).
inline std::vector<Vertex> tree_path(const Dag& g, Vertex from, Vertex to) {
    const auto ps = all_paths(g, from, to);
    return ps.size() == 1 ? ps.front() : std::vector<Vertex>{};
}

}  // namespace oracle
