#include "pathdep/dag.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <queue>

#include "pathdep/error.hpp"

namespace pathdep {

bool Path::contains(Vertex v) const { return index_of(v).has_value(); }

std::optional<std::size_t> Path::index_of(Vertex v) const {
    auto it = std::find(vertices.begin(), vertices.end(), v);
    if (it == vertices.end()) return std::nullopt;
    return static_cast<std::size_t>(it - vertices.begin());
}

Path Path::reversed() const {
    Path out{vertices};
    std::reverse(out.vertices.begin(), out.vertices.end());
    return out;
}

bool is_valid_vertex_name(std::string_view name) {
    if (name.empty()) return false;
    if (name.find("->") != std::string_view::npos) return false;
    for (char ch : name) {
        if (ch == ':' || ch == '#' || static_cast<unsigned char>(ch) <= ' ') return false;
    }
    return true;
}

Dag Dag::build(std::vector<std::string> names,
               const std::vector<std::pair<std::string, std::string>>& edges) {
    Dag dag;
    std::map<std::string, Vertex, std::less<>> lookup;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (!is_valid_vertex_name(names[i])) {
            fail(ErrorCode::InvalidName, "invalid vertex name '" + names[i] + "'");
        }
        auto [it, inserted] = lookup.emplace(names[i], Vertex{static_cast<std::uint32_t>(i)});
        if (!inserted) fail(ErrorCode::DuplicateVertex, "vertex '" + names[i] + "' declared twice");
    }
    dag.names_ = std::move(names);
    const std::size_t n = dag.names_.size();
    dag.parents_.assign(n, {});
    dag.children_.assign(n, {});

    std::set<Edge> seen;
    for (const auto& [p, c] : edges) {
        auto pit = lookup.find(p);
        auto cit = lookup.find(c);
        if (pit == lookup.end() || cit == lookup.end()) {
            fail(ErrorCode::UnknownEndpoint, "edge " + p + " -> " + c + " uses an undeclared vertex");
        }
        if (pit->second == cit->second) fail(ErrorCode::SelfLoop, "self loop on '" + p + "'");
        Edge e{pit->second, cit->second};
        if (!seen.insert(e).second) continue;  // duplicates collapse
        dag.edges_.push_back(e);
        dag.parents_[e.child.index].push_back(e.parent);
        dag.children_[e.parent.index].push_back(e.child);
    }

    // Kahn with a min-heap on declaration index gives a stable order.
    std::vector<std::size_t> indegree(n, 0);
    for (const Edge& e : dag.edges_) ++indegree[e.child.index];
    std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> ready;
    for (std::uint32_t i = 0; i < n; ++i) {
        if (indegree[i] == 0) ready.push(i);
    }
    while (!ready.empty()) {
        std::uint32_t v = ready.top();
        ready.pop();
        dag.topo_order_.push_back(Vertex{v});
        for (Vertex ch : dag.children_[v]) {
            if (--indegree[ch.index] == 0) ready.push(ch.index);
        }
    }
    if (dag.topo_order_.size() != n) {
        std::string cyc;
        for (std::size_t i = 0; i < n; ++i) {
            if (indegree[i] > 0) cyc += (cyc.empty() ? "" : ",") + dag.names_[i];
        }
        fail(ErrorCode::CycleError, "directed cycle through {" + cyc + "}");
    }
    dag.topo_rank_.assign(n, 0);
    for (std::size_t r = 0; r < n; ++r) dag.topo_rank_[dag.topo_order_[r].index] = r;

    // Union-find over the skeleton: a repeated union means a skeleton cycle.
    std::vector<std::size_t> root(n);
    std::iota(root.begin(), root.end(), 0);
    auto find = [&](std::size_t x) {
        while (root[x] != x) x = root[x] = root[root[x]];
        return x;
    };
    std::set<std::pair<std::uint32_t, std::uint32_t>> skeleton;
    for (const Edge& e : dag.edges_) {
        auto key = std::minmax(e.parent.index, e.child.index);
        if (!skeleton.insert(key).second) {
            dag.singly_connected_ = false;  // u->v and v->u cannot both exist, but be safe
            continue;
        }
        std::size_t a = find(e.parent.index);
        std::size_t b = find(e.child.index);
        if (a == b) {
            dag.singly_connected_ = false;
        } else {
            root[a] = b;
        }
    }
    dag.component_.assign(n, 0);
    std::map<std::size_t, std::size_t> ids;
    for (std::size_t i = 0; i < n; ++i) {
        auto [it, _] = ids.emplace(find(i), ids.size());
        dag.component_[i] = it->second;
    }
    return dag;
}

std::optional<Vertex> Dag::find(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) return Vertex{static_cast<std::uint32_t>(i)};
    }
    return std::nullopt;
}

Vertex Dag::at(std::string_view name) const {
    auto v = find(name);
    if (!v) fail(ErrorCode::UnknownVertex, "no vertex named '" + std::string(name) + "'");
    return *v;
}

std::vector<Vertex> Dag::vertices() const {
    std::vector<Vertex> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = Vertex{static_cast<std::uint32_t>(i)};
    return out;
}

std::vector<Vertex> Dag::neighbors(Vertex v) const {
    std::vector<Vertex> out = parents(v);
    out.insert(out.end(), children(v).begin(), children(v).end());
    return out;
}

bool Dag::has_edge(Vertex parent, Vertex child) const {
    const auto& ch = children_.at(parent.index);
    return std::find(ch.begin(), ch.end(), child) != ch.end();
}

void Dag::check_vertex(Vertex v) const {
    if (v.index >= size()) {
        fail(ErrorCode::UnknownVertex, "vertex index " + std::to_string(v.index) + " out of range");
    }
}

Dag Dag::induced_subgraph(const VertexSet& keep) const {
    std::vector<std::string> names;
    for (Vertex v : keep) {
        check_vertex(v);
        names.push_back(name(v));
    }
    std::vector<std::pair<std::string, std::string>> edges;
    for (const Edge& e : edges_) {
        if (keep.contains(e.parent) && keep.contains(e.child)) {
            edges.emplace_back(name(e.parent), name(e.child));
        }
    }
    return build(std::move(names), edges);
}

Dag Dag::with_edge(Vertex parent, Vertex child) const {
    std::vector<std::pair<std::string, std::string>> edges;
    for (const Edge& e : edges_) edges.emplace_back(name(e.parent), name(e.child));
    edges.emplace_back(name(parent), name(child));
    return build(names_, edges);
}

Dag Dag::without_edge(Vertex parent, Vertex child) const {
    std::vector<std::pair<std::string, std::string>> edges;
    for (const Edge& e : edges_) {
        if (e.parent == parent && e.child == child) continue;
        edges.emplace_back(name(e.parent), name(e.child));
    }
    return build(names_, edges);
}

std::string Dag::format_set(const VertexSet& set) const {
    std::string out = "{";
    bool first = true;
    for (Vertex v : set) {
        if (!first) out += ",";
        out += name(v);
        first = false;
    }
    return out + "}";
}

bool is_singly_connected(const Dag& dag) { return dag.singly_connected(); }

Path unique_path(const Dag& dag, Vertex a, Vertex c) {
    dag.check_vertex(a);
    dag.check_vertex(c);
    if (!dag.singly_connected()) fail(ErrorCode::NotSinglyConnected, "skeleton has a cycle");
    if (a == c) fail(ErrorCode::SameVertex, "path endpoints coincide at '" + dag.name(a) + "'");
    if (dag.component(a) != dag.component(c)) {
        fail(ErrorCode::Disconnected, dag.name(a) + " and " + dag.name(c) + " lie in different components");
    }
    std::vector<std::optional<Vertex>> prev(dag.size());
    std::vector<bool> seen(dag.size(), false);
    std::deque<Vertex> queue{a};
    seen[a.index] = true;
    while (!queue.empty()) {
        Vertex v = queue.front();
        queue.pop_front();
        if (v == c) break;
        for (Vertex w : dag.neighbors(v)) {
            if (seen[w.index]) continue;
            seen[w.index] = true;
            prev[w.index] = v;
            queue.push_back(w);
        }
    }
    Path path;
    for (Vertex v = c;; v = *prev[v.index]) {
        path.vertices.push_back(v);
        if (v == a) break;
    }
    std::reverse(path.vertices.begin(), path.vertices.end());
    return path;
}

bool is_collider_at(const Dag& dag, const Path& path, std::size_t position) {
    if (position == 0 || position + 1 >= path.size()) return false;
    Vertex v = path.vertices[position];
    return dag.has_edge(path.vertices[position - 1], v) && dag.has_edge(path.vertices[position + 1], v);
}

VertexRole classify_on_path(const Dag& dag, const Path& path, Vertex v) {
    auto pos = path.index_of(v);
    if (!pos) fail(ErrorCode::NotOnPath, "'" + dag.name(v) + "' is not on the path");
    if (*pos == 0 || *pos + 1 == path.size()) return VertexRole::Endpoint;
    return is_collider_at(dag, path, *pos) ? VertexRole::Collider : VertexRole::NonCollider;
}

VertexSet closure(const Dag& dag, const VertexSet& seed, Direction direction) {
    VertexSet out;
    std::vector<Vertex> stack;
    for (Vertex v : seed) {
        dag.check_vertex(v);
        if (out.insert(v).second) stack.push_back(v);
    }
    while (!stack.empty()) {
        Vertex v = stack.back();
        stack.pop_back();
        const auto& next = direction == Direction::Ancestors ? dag.parents(v) : dag.children(v);
        for (Vertex w : next) {
            if (out.insert(w).second) stack.push_back(w);
        }
    }
    return out;
}

namespace {

std::size_t common_count(const std::vector<Vertex>& x, const std::vector<Vertex>& y) {
    std::size_t n = 0;
    for (Vertex v : x) n += static_cast<std::size_t>(std::find(y.begin(), y.end(), v) != y.end());
    return n;
}

}  // namespace

std::vector<Lemma51Violation> lemma51_report(const Dag& dag) {
    std::vector<Lemma51Violation> report;
    const auto vs = dag.vertices();
    for (std::size_t i = 0; i < vs.size(); ++i) {
        for (std::size_t j = i + 1; j < vs.size(); ++j) {
            Vertex y = vs[i];
            Vertex z = vs[j];
            std::size_t cp = common_count(dag.parents(y), dag.parents(z));
            std::size_t cc = common_count(dag.children(y), dag.children(z));
            std::string pair = dag.name(y) + "," + dag.name(z);
            if (cp > 1) report.push_back({"common-parents", pair + " share " + std::to_string(cp) + " parents"});
            if (cc > 1) report.push_back({"common-children", pair + " share " + std::to_string(cc) + " children"});
            if (cp > 0 && cc > 0) report.push_back({"parent-and-child", pair + " share both a parent and a child"});
        }
    }
    if (!dag.singly_connected()) {
        report.push_back({"skeleton-cycle", "the skeleton is not a forest"});
        return report;
    }
    for (std::size_t i = 0; i < vs.size(); ++i) {
        for (std::size_t j = i + 1; j < vs.size(); ++j) {
            if (dag.component(vs[i]) != dag.component(vs[j])) continue;
            Path p = unique_path(dag, vs[i], vs[j]);
            for (Vertex x : vs) {
                if (p.contains(x)) continue;
                std::size_t touching = 0;
                for (Vertex w : p.vertices) touching += static_cast<std::size_t>(dag.adjacent(x, w));
                if (touching > 1) {
                    report.push_back({"off-path-adjacency", dag.name(x) + " touches " + std::to_string(touching) +
                                                                " vertices of the path " + dag.name(vs[i]) +
                                                                ".." + dag.name(vs[j])});
                }
            }
        }
    }
    return report;
}

}  // namespace pathdep
