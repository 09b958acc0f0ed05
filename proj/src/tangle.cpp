#include "tangle/tangle.hpp"

#include <algorithm>

#include "tangle/config.hpp"

namespace tangle {

const char* kind_name(TangleVerdict::Kind k) {
    switch (k) {
        case TangleVerdict::Kind::Balanced: return "balanced";
        case TangleVerdict::Kind::HasBlockingVertex: return "blocking-vertex";
        case TangleVerdict::Kind::Tangled: return "tangled";
        case TangleVerdict::Kind::TwoDisjointUnbalanced: return "two-disjoint-unbalanced";
    }
    return "?";
}

std::vector<Cycle> unbalanced_cycles(const BiasedGraph& o) {
    std::vector<Cycle> out;
    for (Cycle& c : enumerate_cycles(o.graph()))
        if (!o.is_balanced(c.edges)) out.push_back(std::move(c));
    return out;
}

namespace {

std::optional<std::pair<int, int>> disjoint_pair(const std::vector<Cycle>& un) {
    for (std::size_t i = 0; i < un.size(); ++i)
        for (std::size_t j = i + 1; j < un.size(); ++j)
            if (!un[i].verts.intersects(un[j].verts)) return std::make_pair(int(i), int(j));
    return std::nullopt;
}

VertexSet common_vertices(const MultiGraph& g, const std::vector<Cycle>& un) {
    VertexSet s = g.vertex_set();
    for (const Cycle& c : un) s &= c.verts;
    return s;
}

}  // namespace

std::optional<std::pair<Cycle, Cycle>> find_disjoint_unbalanced_pair(const BiasedGraph& o) {
    auto un = unbalanced_cycles(o);
    auto p = disjoint_pair(un);
    if (!p) return std::nullopt;
    return std::make_pair(un[p->first], un[p->second]);
}

VertexSet blocking_vertices(const BiasedGraph& o) { return common_vertices(o.graph(), unbalanced_cycles(o)); }

std::vector<std::pair<VertexId, VertexId>> blocking_pairs(const BiasedGraph& o) {
    auto un = unbalanced_cycles(o);
    VertexSet blocking = common_vertices(o.graph(), un);
    std::vector<VertexId> cand = (o.graph().vertex_set() - blocking).to_vector();
    std::vector<std::pair<VertexId, VertexId>> out;
    if (un.empty()) return out;
    for (std::size_t i = 0; i < cand.size(); ++i)
        for (std::size_t j = i + 1; j < cand.size(); ++j) {
            bool all = true;
            for (const Cycle& c : un)
                if (!c.verts.test(cand[i]) && !c.verts.test(cand[j])) {
                    all = false;
                    break;
                }
            if (all) out.emplace_back(cand[i], cand[j]);
        }
    return out;
}

TangleVerdict is_tangled(const BiasedGraph& o) {
    TangleVerdict v;
    auto un = unbalanced_cycles(o);
    if (un.empty()) {
        v.kind = TangleVerdict::Kind::Balanced;
        return v;
    }
    if (auto p = disjoint_pair(un)) {
        v.kind = TangleVerdict::Kind::TwoDisjointUnbalanced;
        v.first = un[p->first];
        v.second = un[p->second];
        return v;
    }
    VertexSet b = common_vertices(o.graph(), un);
    if (b.any()) {
        v.kind = TangleVerdict::Kind::HasBlockingVertex;
        v.blocking = b.first();
        return v;
    }
    v.kind = TangleVerdict::Kind::Tangled;
    return v;
}

StandardPartition standard_partition(const BiasedGraph& o, VertexId v) {
    const MultiGraph& g = o.graph();
    if (!g.has_vertex(v)) throw PreconditionError("unknown-vertex", "standard_partition: unknown vertex");
    auto un = unbalanced_cycles(o);
    for (const Cycle& c : un)
        if (!c.verts.test(v)) throw PreconditionError("not-blocking", "standard_partition: vertex is not blocking");
    VertexSet vv;
    vv.set(v);
    MultiGraph rest = g.without_vertices(vv);
    if (rest.num_vertices() > 0 && !is_connected(rest))
        throw PreconditionError("disconnected", "standard_partition: graph minus the vertex is disconnected");
    EdgeSet delta = g.delta(vv);
    std::vector<EdgeId> ds = delta.to_vector();
    // pairs of delta edges lying on a common unbalanced cycle
    std::vector<std::pair<EdgeId, EdgeId>> apart;
    for (const Cycle& c : un) {
        if (c.length() == 1) continue;
        EdgeSet at = c.edges & delta;
        auto two = at.to_vector();
        if (two.size() == 2) apart.emplace_back(two[0], two[1]);
    }
    auto separated = [&](EdgeId a, EdgeId b) {
        for (auto& p : apart)
            if ((p.first == a && p.second == b) || (p.first == b && p.second == a)) return true;
        return false;
    };
    StandardPartition sp;
    sp.v = v;
    for (EdgeId e : ds) {
        bool placed = false;
        for (EdgeSet& cls : sp.classes)
            if (!separated(cls.first(), e)) {
                cls.set(e);
                placed = true;
                break;
            }
        if (!placed) {
            EdgeSet c;
            c.set(e);
            sp.classes.push_back(c);
        }
    }
    return sp;
}

namespace {

void require_balanced_base(const BiasedGraph& o, const EdgeSet& base, const EdgeSet& f_set) {
    if (!base.subset_of(o.graph().edge_set()) || !f_set.subset_of(o.graph().edge_set()))
        throw PreconditionError("unknown-edge", "edge set names an unknown edge");
    if (base.intersects(f_set)) throw PreconditionError("overlap", "f_set meets the base");
    if (!is_balanced_graph(o.spanning_with(base))) throw PreconditionError("base-unbalanced", "base is not balanced");
}

}  // namespace

TwoBalancedCheck is_2_balanced(const BiasedGraph& o, const EdgeSet& base, const EdgeSet& f_set) {
    require_balanced_base(o, base, f_set);
    TwoBalancedCheck out;
    if (f_set.count() < 2) return out;
    for (const Cycle& c : enumerate_cycles(o.graph().spanning_with(base | f_set))) {
        if ((c.edges & f_set).count() != 2) continue;
        if (!o.is_balanced(c.edges)) {
            out.ok = false;
            out.violation = c;
            return out;
        }
    }
    return out;
}

bool is_maximal_balanced(const BiasedGraph& o, const EdgeSet& base) {
    const MultiGraph& g = o.graph();
    bool maximal = true;
    (g.edge_set() - base).for_each([&](int e) {
        if (!maximal) return;
        EdgeSet with = base;
        with.set(e);
        bool unbalanced = false;
        for (const Cycle& c : enumerate_cycles(g.spanning_with(with)))
            if (c.edges.test(e) && !o.is_balanced(c.edges)) {
                unbalanced = true;
                break;
            }
        if (!unbalanced) maximal = false;
    });
    return maximal;
}

SignatureRecovery recover_signature(const BiasedGraph& o, const EdgeSet& base, const EdgeSet& f_set) {
    require_balanced_base(o, base, f_set);
    if (!is_maximal_balanced(o, base)) throw PreconditionError("not-maximal", "base is not a maximal balanced subgraph");
    if (find_disjoint_unbalanced_pair(o)) throw PreconditionError("disjoint-pair", "two disjoint unbalanced cycles exist");
    if (!is_2_balanced(o, base, f_set).ok) throw PreconditionError("not-2-balanced", "f_set is not 2-balanced");
    SignatureRecovery out;
    for (const Cycle& c : enumerate_cycles(o.graph().spanning_with(base | f_set))) {
        bool even = (c.edges & f_set).count() % 2 == 0;
        if (even != o.is_balanced(c.edges)) {
            out.counterexample = c;
            return out;
        }
    }
    out.ok = true;
    out.signature = f_set;
    return out;
}

}  // namespace tangle
