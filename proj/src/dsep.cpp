#include "pathdep/dsep.hpp"

#include <algorithm>

#include "pathdep/error.hpp"
#include "pathdep/random.hpp"

namespace pathdep {

void validate_query(const Dag& dag, const SeparationQuery& q) {
    for (const VertexSet* s : {&q.x, &q.y, &q.z}) {
        for (Vertex v : *s) dag.check_vertex(v);
    }
    if (q.x.empty() || q.y.empty()) fail(ErrorCode::OverlappingSets, "both query sides must be nonempty");
    auto overlap = [](const VertexSet& s, const VertexSet& t) {
        return std::any_of(s.begin(), s.end(), [&](Vertex v) { return t.contains(v); });
    };
    if (overlap(q.x, q.y) || overlap(q.x, q.z) || overlap(q.y, q.z)) {
        fail(ErrorCode::OverlappingSets, "query sets must be pairwise disjoint");
    }
}

bool is_active_path(const Dag& dag, const Path& path, const VertexSet& z) {
    if (path.size() < 2) fail(ErrorCode::DomainError, "a path needs at least two vertices");
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        dag.check_vertex(path.vertices[i]);
        if (!dag.adjacent(path.vertices[i], path.vertices[i + 1])) {
            fail(ErrorCode::DomainError, "consecutive path vertices are not adjacent");
        }
    }
    if (z.contains(path.front()) || z.contains(path.back())) {
        fail(ErrorCode::EndpointConditioned, "a path endpoint is in the conditioning set");
    }
    VertexSet ancestors_of_z;
    bool have_ancestors = false;
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
        Vertex v = path.vertices[i];
        if (is_collider_at(dag, path, i)) {
            if (!have_ancestors) {
                ancestors_of_z = closure(dag, z, Direction::Ancestors);
                have_ancestors = true;
            }
            if (!ancestors_of_z.contains(v)) return false;
        } else if (z.contains(v)) {
            return false;
        }
    }
    return true;
}

bool d_separated_polytree(const Dag& dag, const SeparationQuery& q) {
    validate_query(dag, q);
    if (!dag.singly_connected()) fail(ErrorCode::NotSinglyConnected, "polytree routine on a multiply connected graph");
    for (Vertex a : q.x) {
        for (Vertex b : q.y) {
            if (dag.component(a) != dag.component(b)) continue;
            if (is_active_path(dag, unique_path(dag, a, b), q.z)) return false;
        }
    }
    return true;
}

bool d_separated_general(const Dag& dag, const SeparationQuery& q) {
    validate_query(dag, q);
    VertexSet seed = q.x;
    seed.insert(q.y.begin(), q.y.end());
    seed.insert(q.z.begin(), q.z.end());
    const VertexSet anc = closure(dag, seed, Direction::Ancestors);

    // Moral graph restricted to the ancestral set.
    std::vector<std::vector<Vertex>> adj(dag.size());
    auto link = [&](Vertex u, Vertex v) {
        adj[u.index].push_back(v);
        adj[v.index].push_back(u);
    };
    for (Vertex v : anc) {
        const auto& pa = dag.parents(v);
        for (std::size_t i = 0; i < pa.size(); ++i) {
            link(pa[i], v);
            for (std::size_t j = i + 1; j < pa.size(); ++j) link(pa[i], pa[j]);
        }
    }
    std::vector<bool> seen(dag.size(), false);
    std::vector<Vertex> stack;
    for (Vertex v : q.x) {
        seen[v.index] = true;
        stack.push_back(v);
    }
    while (!stack.empty()) {
        Vertex v = stack.back();
        stack.pop_back();
        if (q.y.contains(v)) return false;
        for (Vertex w : adj[v.index]) {
            if (seen[w.index] || q.z.contains(w)) continue;
            seen[w.index] = true;
            stack.push_back(w);
        }
    }
    return true;
}

bool d_separated(const Dag& dag, const SeparationQuery& q) {
    return dag.singly_connected() ? d_separated_polytree(dag, q) : d_separated_general(dag, q);
}

std::vector<Lemma52Disagreement> lemma52_equiv_check(const Dag& dag, Vertex y, Vertex z, std::size_t trials,
                                                     std::uint64_t seed) {
    const Path path = unique_path(dag, y, z);
    const VertexSet on_path(path.vertices.begin(), path.vertices.end());
    const Dag sub = dag.induced_subgraph(on_path);
    auto to_sub = [&](const VertexSet& s) {
        VertexSet out;
        for (Vertex v : s) out.insert(sub.at(dag.name(v)));
        return out;
    };

    std::vector<Lemma52Disagreement> report;
    const Rng root(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng = root.split(t);
        // Assign each path vertex to S1, S2, S3 or nothing; force S1, S2 nonempty.
        std::vector<Vertex> order = path.vertices;
        rng.shuffle(order);
        Lemma52Disagreement d;
        d.s1.insert(order[0]);
        d.s2.insert(order[1]);
        for (std::size_t i = 2; i < order.size(); ++i) {
            switch (rng.below(4)) {
                case 0: d.s1.insert(order[i]); break;
                case 1: d.s2.insert(order[i]); break;
                case 2: d.s3.insert(order[i]); break;
                default: break;
            }
        }
        d.separated_in_graph = d_separated(dag, {d.s1, d.s2, d.s3});
        d.separated_in_subgraph = d_separated_general(sub, {to_sub(d.s1), to_sub(d.s2), to_sub(d.s3)});
        if (d.separated_in_graph != d.separated_in_subgraph) report.push_back(std::move(d));
    }
    return report;
}

bool faithfulness_probe(const Dag& dag, const GaussianParams& params, Vertex a, Vertex c,
                        const VertexSet& given) {
    const bool separated = d_separated(dag, {{a}, {c}, given});
    const double r2 = pcorr2(build_sigma(dag, params), a, c, given);
    return separated == (r2 < kRho2ZeroTolerance);
}

}  // namespace pathdep
