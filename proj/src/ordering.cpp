#include "pathdep/ordering.hpp"

#include <algorithm>

#include "pathdep/dsep.hpp"
#include "pathdep/error.hpp"

namespace pathdep {

std::string_view to_string(ConditioningClass k) noexcept {
    switch (k) {
        case ConditioningClass::NonCollider: return "nc";
        case ConditioningClass::ColliderCollider: return "c-c";
        case ConditioningClass::ColliderNonCollider: return "c-nc";
    }
    return "?";
}

const VertexSet& ConditioningPartition::members(ConditioningClass k) const {
    switch (k) {
        case ConditioningClass::NonCollider: return z_nc;
        case ConditioningClass::ColliderCollider: return z_c_c;
        case ConditioningClass::ColliderNonCollider: break;
    }
    return z_c_nc;
}

const VertexSet& ConditioningPartition::nearest(ConditioningClass k) const {
    switch (k) {
        case ConditioningClass::NonCollider: return n_nc;
        case ConditioningClass::ColliderCollider: return n_c_c;
        case ConditioningClass::ColliderNonCollider: break;
    }
    return n_c_nc;
}

VertexSet ConditioningPartition::nearest_union() const {
    VertexSet out = n_nc;
    out.insert(n_c_c.begin(), n_c_c.end());
    out.insert(n_c_nc.begin(), n_c_nc.end());
    return out;
}

PathFrame::PathFrame(const Dag& dag, Vertex a, Vertex c)
    : dag_(dag), a_(a), c_(c), path_(unique_path(dag, a, c)) {
    const VertexSet on_path(path_.vertices.begin(), path_.vertices.end());
    const VertexSet path_ancestors = closure(dag_, on_path, Direction::Ancestors);

    for (Vertex v : dag_.vertices()) {
        if (v == a_ || v == c_ || dag_.component(v) != dag_.component(a_)) continue;
        bool relevant = on_path.contains(v);
        if (!relevant) {
            // d-connected given the empty set <=> a common ancestor exists.
            const VertexSet anc = closure(dag_, {v}, Direction::Ancestors);
            relevant = std::any_of(anc.begin(), anc.end(), [&](Vertex w) { return path_ancestors.contains(w); });
        }
        if (!relevant) continue;
        relevant_.insert(v);

        // Walk from v toward a; the first path vertex met is x*_v.
        Info inf{};
        std::vector<Vertex> seg;
        if (on_path.contains(v)) {
            seg.push_back(v);
        } else {
            const Path to_a = unique_path(dag_, v, a_);
            for (Vertex w : to_a.vertices) {
                seg.push_back(w);
                if (on_path.contains(w)) break;
            }
        }
        inf.x_star = seg.back();
        inf.segment = VertexSet(seg.begin(), seg.end());

        const std::size_t pos = *path_.index_of(inf.x_star);
        const Vertex x = inf.x_star;
        const bool on_ac = is_collider_at(dag_, path_, pos);
        // Neighbour of x* on the branch toward v (absent when v == x*).
        std::optional<Vertex> branch;
        if (seg.size() >= 2) branch = seg[seg.size() - 2];
        auto collider_with = [&](std::optional<Vertex> side) {
            return side && branch && dag_.has_edge(*side, x) && dag_.has_edge(*branch, x);
        };
        std::optional<Vertex> toward_a = pos > 0 ? std::optional<Vertex>(path_.vertices[pos - 1]) : std::nullopt;
        std::optional<Vertex> toward_c =
            pos + 1 < path_.size() ? std::optional<Vertex>(path_.vertices[pos + 1]) : std::nullopt;
        const bool on_az = collider_with(toward_a);
        const bool on_cz = collider_with(toward_c);
        if (on_az || on_cz) {
            inf.cls = ConditioningClass::ColliderCollider;
        } else if (on_ac) {
            inf.cls = ConditioningClass::ColliderNonCollider;
        } else {
            inf.cls = ConditioningClass::NonCollider;
        }
        info_.emplace(v, std::move(inf));
    }
}

void PathFrame::require_relevant(const VertexSet& s) const {
    for (Vertex v : s) {
        dag_.check_vertex(v);
        if (!is_relevant(v)) {
            fail(ErrorCode::NotRelevant, "'" + dag_.name(v) + "' is not relevant to the path " + dag_.name(a_) +
                                             ".." + dag_.name(c_));
        }
    }
}

const PathFrame::Info& PathFrame::info(Vertex z) const {
    auto it = info_.find(z);
    if (it == info_.end()) {
        dag_.check_vertex(z);
        fail(ErrorCode::NotRelevant, "'" + dag_.name(z) + "' is not relevant to the path");
    }
    return it->second;
}

MeetingVertex PathFrame::meeting_vertex(Vertex z) const { return {z, info(z).x_star}; }
ConditioningClass PathFrame::classify(Vertex z) const { return info(z).cls; }
const VertexSet& PathFrame::segment(Vertex z) const { return info(z).segment; }

bool PathFrame::lies_between(Vertex inner, Vertex outer) const { return segment(outer).contains(inner); }

VertexSet PathFrame::nearest(const VertexSet& members) const {
    VertexSet out;
    for (Vertex z : members) {
        const bool dominated = std::any_of(members.begin(), members.end(),
                                           [&](Vertex w) { return w != z && lies_between(w, z); });
        if (!dominated) out.insert(z);
    }
    return out;
}

ConditioningPartition PathFrame::partition(const VertexSet& z) const {
    require_relevant(z);
    ConditioningPartition p;
    for (Vertex v : z) {
        p.meetings.emplace(v, meeting_vertex(v));
        switch (classify(v)) {
            case ConditioningClass::NonCollider: p.z_nc.insert(v); break;
            case ConditioningClass::ColliderCollider: p.z_c_c.insert(v); break;
            case ConditioningClass::ColliderNonCollider: p.z_c_nc.insert(v); break;
        }
    }
    p.n_nc = nearest(p.z_nc);
    p.n_c_c = nearest(p.z_c_c);
    p.n_c_nc = nearest(p.z_c_nc);
    return p;
}

ClauseResult PathFrame::clause(ConditioningClass cls, const VertexSet& further, const VertexSet& nearer) const {
    ClauseResult r;
    r.cls = cls;
    r.further = further;
    r.nearer = nearer;
    VertexSet served;
    bool every_further_served = true;
    for (Vertex f : further) {
        bool any = false;
        for (Vertex n : nearer) {
            if (lies_between(n, f)) {
                r.pairing.emplace_back(f, n);
                served.insert(n);
                any = true;
            }
        }
        every_further_served = every_further_served && any;
    }
    r.holds = every_further_served && served.size() == nearer.size();
    return r;
}

bool PathFrame::total_further_nearer(const VertexSet& further, const VertexSet& nearer) const {
    require_relevant(further);
    require_relevant(nearer);
    return clause(ConditioningClass::NonCollider, further, nearer).holds;
}

OrderWitness PathFrame::precedes(const VertexSet& z1, const VertexSet& z2) const {
    return precedes(partition(z1), partition(z2));
}

OrderWitness PathFrame::precedes(const ConditioningPartition& p1, const ConditioningPartition& p2) const {
    OrderWitness w;
    w.nc = clause(ConditioningClass::NonCollider, p2.n_nc, p1.n_nc);
    w.c_c = clause(ConditioningClass::ColliderCollider, p1.n_c_c, p2.n_c_c);
    w.c_nc = clause(ConditioningClass::ColliderNonCollider, p1.n_c_nc, p2.n_c_nc);
    w.holds = w.nc.holds && w.c_c.holds && w.c_nc.holds;
    return w;
}

VertexSet PathFrame::reduce_to_nearest(const VertexSet& z) const { return partition(z).nearest_union(); }

NormalizedPair PathFrame::normalize_cardinality(const VertexSet& z1, const VertexSet& z2) const {
    const OrderWitness w = precedes(z1, z2);
    if (!w.holds) {
        fail(ErrorCode::PrecedenceNotEstablished,
             dag_.format_set(z1) + " does not precede " + dag_.format_set(z2));
    }
    NormalizedPair out;
    std::vector<std::pair<Vertex, bool>> padding;  // (vertex, added to z1 side)

    for (const ClauseResult* cl : {&w.nc, &w.c_c, &w.c_nc}) {
        const bool z1_is_nearer = cl->cls == ConditioningClass::NonCollider;
        std::map<Vertex, std::vector<Vertex>> served_by;  // nearer -> further vertices
        for (const auto& [f, n] : cl->pairing) served_by[n].push_back(f);
        for (const auto& [f, n] : cl->pairing) {
            (void)n;
            if (std::count_if(cl->pairing.begin(), cl->pairing.end(),
                              [&](const auto& pr) { return pr.first == f; }) != 1) {
                fail(ErrorCode::NormalizationFailed,
                     "'" + dag_.name(f) + "' lies beyond more than one nearer vertex");
            }
        }
        for (const auto& [n, fs] : served_by) {
            for (std::size_t i = 0; i < fs.size(); ++i) {
                const Vertex f = fs[i];
                if (i == 0) {
                    out.steps.push_back(z1_is_nearer ? SwapStep{cl->cls, n, f} : SwapStep{cl->cls, f, n});
                } else {
                    out.steps.push_back(SwapStep{cl->cls, f, f});
                    padding.emplace_back(f, z1_is_nearer);
                }
            }
        }
    }
    for (const SwapStep& s : out.steps) {
        out.z1.insert(s.z1_side);
        out.z2.insert(s.z2_side);
    }
    // A padded vertex must be separated from {a, c} by the rest of its side,
    // otherwise conditioning on it would change the correlation.
    for (const auto& [f, on_z1] : padding) {
        VertexSet rest = on_z1 ? out.z1 : out.z2;
        rest.erase(f);
        if (!d_separated(dag_, {{a_, c_}, {f}, rest})) {
            fail(ErrorCode::NormalizationFailed,
                 "padding vertex '" + dag_.name(f) + "' is not redundant given " + dag_.format_set(rest));
        }
    }
    return out;
}

VertexSet relevant_set(const Dag& dag, Vertex a, Vertex c) { return PathFrame(dag, a, c).relevant(); }

MeetingVertex meeting_vertex(const Dag& dag, Vertex a, Vertex c, Vertex z) {
    return PathFrame(dag, a, c).meeting_vertex(z);
}

ConditioningPartition partition(const Dag& dag, Vertex a, Vertex c, const VertexSet& z) {
    return PathFrame(dag, a, c).partition(z);
}

bool total_further_nearer(const Dag& dag, Vertex a, Vertex c, const VertexSet& s2, const VertexSet& s1) {
    return PathFrame(dag, a, c).total_further_nearer(s2, s1);
}

OrderWitness precedes(const Dag& dag, Vertex a, Vertex c, const VertexSet& z1, const VertexSet& z2) {
    return PathFrame(dag, a, c).precedes(z1, z2);
}

VertexSet reduce_to_nearest(const Dag& dag, Vertex a, Vertex c, const VertexSet& z) {
    return PathFrame(dag, a, c).reduce_to_nearest(z);
}

NormalizedPair normalize_cardinality(const Dag& dag, Vertex a, Vertex c, const VertexSet& z1,
                                     const VertexSet& z2) {
    return PathFrame(dag, a, c).normalize_cardinality(z1, z2);
}

}  // namespace pathdep
