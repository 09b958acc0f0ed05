#include "tangle/bias.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <unordered_map>

#include "tangle/config.hpp"

namespace tangle {

bool BiasedGraph::is_balanced(const EdgeSet& c) const {
    return std::visit(
        [&](const auto& s) -> bool {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, SignedBias>)
                return (c & s.signature).count() % 2 == 0;
            else if constexpr (std::is_same_v<T, ExplicitBias>)
                return s.balanced.count(c) > 0;
            else if constexpr (std::is_same_v<T, AllBalanced>)
                return true;
            else
                return false;
        },
        spec_);
}

BiasedGraph BiasedGraph::compacted() const {
    if (auto* s = std::get_if<SignedBias>(&spec_)) return {g_, SignedBias{s->signature & g_.edge_set()}};
    if (auto* x = std::get_if<ExplicitBias>(&spec_)) {
        ExplicitBias out;
        for (const EdgeSet& c : x->balanced)
            if (c.subset_of(g_.edge_set()) && make_cycle(g_, c)) out.balanced.insert(c);
        return {g_, std::move(out)};
    }
    return *this;
}

ExplicitBias BiasedGraph::to_explicit() const {
    ExplicitBias out;
    for (const Cycle& c : enumerate_cycles(g_))
        if (is_balanced(c.edges)) out.balanced.insert(c.edges);
    return out;
}

CycleTable cycle_table(const BiasedGraph& o) {
    CycleTable t;
    t.cycles = enumerate_cycles(o.graph());
    t.balanced.resize(t.cycles.size());
    for (std::size_t i = 0; i < t.cycles.size(); ++i) t.balanced[i] = o.is_balanced(t.cycles[i].edges);
    return t;
}

BiasedGraph make_signed(const MultiGraph& g, const EdgeSet& signature) {
    if (!signature.subset_of(g.edge_set())) throw PreconditionError("unknown-edge", "signature names an unknown edge");
    return BiasedGraph(g, SignedBias{signature});
}

namespace {

struct Indexed {
    EdgeSet edges;
    VertexSet verts;
};

}  // namespace

ThetaCheck validate_theta(const MultiGraph& g, const std::vector<EdgeSet>& balanced) {
    std::unordered_set<EdgeSet> set;
    std::vector<Indexed> list;
    for (const EdgeSet& c : balanced) {
        auto cyc = make_cycle(g, c);
        if (!cyc) throw PreconditionError("not-a-cycle", "balanced set lists an edge set that is not a cycle");
        if (set.insert(c).second && cyc->length() > 1) list.push_back({c, cyc->verts});
    }
    ThetaCheck out;
    for (std::size_t i = 0; i < list.size(); ++i)
        for (std::size_t j = i + 1; j < list.size(); ++j) {
            if (!forms_theta(list[i].edges, list[i].verts, list[j].edges, list[j].verts)) continue;
            EdgeSet third = list[i].edges ^ list[j].edges;
            if (set.count(third)) continue;
            out.ok = false;
            out.violation = Theta{*make_cycle(g, list[i].edges), *make_cycle(g, list[j].edges), *make_cycle(g, third)};
            return out;
        }
    return out;
}

ThetaCheck validate_theta(const BiasedGraph& o) {
    if (std::holds_alternative<ExplicitBias>(o.spec())) {
        std::vector<EdgeSet> bal;
        for (const EdgeSet& c : std::get<ExplicitBias>(o.spec()).balanced)
            if (c.subset_of(o.graph().edge_set()) && make_cycle(o.graph(), c)) bal.push_back(c);
        std::sort(bal.begin(), bal.end());
        return validate_theta(o.graph(), bal);
    }
    // Signed and constant biases satisfy the property; still check on request.
    std::vector<EdgeSet> bal;
    for (const Cycle& c : enumerate_cycles(o.graph()))
        if (o.is_balanced(c.edges)) bal.push_back(c.edges);
    return validate_theta(o.graph(), bal);
}

BiasedGraph make_explicit(const MultiGraph& g, const std::vector<EdgeSet>& balanced) {
    ThetaCheck chk = validate_theta(g, balanced);
    if (!chk.ok) throw PreconditionError("theta", "balanced set violates the theta property");
    ExplicitBias b;
    for (const EdgeSet& c : balanced) b.balanced.insert(c);
    return BiasedGraph(g, std::move(b));
}

Bias balance(const BiasedGraph& o, const EdgeSet& c) {
    if (!make_cycle(o.graph(), c)) throw PreconditionError("not-a-cycle", "balance query on a non-cycle");
    return o.is_balanced(c) ? Bias::Balanced : Bias::Unbalanced;
}

Bias balance(const BiasedGraph& o, const Cycle& c) { return balance(o, c.edges); }

Cycle reroute(const MultiGraph& g, const Cycle& c1, const Cycle& c2) {
    if (!forms_theta(c1, c2)) throw PreconditionError("not-a-theta", "reroute requires two cycles forming a theta");
    auto c = make_cycle(g, c1.edges ^ c2.edges);
    if (!c) throw PreconditionError("not-a-theta", "reroute requires two cycles forming a theta");
    return *c;
}

std::optional<BiasedGraph> complete_bias(const MultiGraph& g, const PartialBias& partial, Bias fallback) {
    std::vector<Cycle> cycles = enumerate_cycles(g);
    const int n = static_cast<int>(cycles.size());
    std::unordered_map<EdgeSet, int> index;
    for (int i = 0; i < n; ++i) index[cycles[i].edges] = i;

    std::vector<signed char> val(n, -1);  // 1 balanced, 0 unbalanced
    std::vector<int> trail;

    // Assigns and propagates; returns false on conflict.
    auto assign = [&](int start, signed char v) -> bool {
        std::vector<std::pair<int, signed char>> queue{{start, v}};
        while (!queue.empty()) {
            auto [i, x] = queue.back();
            queue.pop_back();
            if (val[i] >= 0) {
                if (val[i] != x) return false;
                continue;
            }
            val[i] = x;
            trail.push_back(i);
            if (cycles[i].length() == 1) continue;
            for (int j = 0; j < n; ++j) {
                if (val[j] < 0 || j == i) continue;
                if (x == 0 && val[j] == 0) continue;
                if (!forms_theta(cycles[i], cycles[j])) continue;
                int k = index.at(cycles[i].edges ^ cycles[j].edges);
                signed char want = (x == 1 && val[j] == 1) ? 1 : 0;
                if (val[k] >= 0) {
                    if (val[k] != want) return false;
                } else {
                    queue.emplace_back(k, want);
                }
            }
        }
        return true;
    };
    auto undo = [&](std::size_t mark) {
        while (trail.size() > mark) {
            val[trail.back()] = -1;
            trail.pop_back();
        }
    };

    for (const auto& [es, b] : partial) {
        auto it = index.find(es);
        if (it == index.end()) throw PreconditionError("not-a-cycle", "partial bias names a non-cycle");
        if (!assign(it->second, b == Bias::Balanced ? 1 : 0)) return std::nullopt;
    }

    const signed char pref = fallback == Bias::Balanced ? 1 : 0;
    std::size_t budget = limits().search_cap;
    std::function<bool(int)> rec = [&](int from) -> bool {
        int i = from;
        while (i < n && val[i] >= 0) ++i;
        if (i == n) return true;
        if (budget-- == 0) throw ResourceLimit("bias completion exceeded the configured cap");
        for (signed char x : {pref, static_cast<signed char>(1 - pref)}) {
            std::size_t mark = trail.size();
            if (assign(i, x) && rec(i + 1)) return true;
            undo(mark);
        }
        return false;
    };
    if (!rec(0)) return std::nullopt;

    ExplicitBias out;
    for (int i = 0; i < n; ++i)
        if (val[i] == 1) out.balanced.insert(cycles[i].edges);
    return BiasedGraph(g, std::move(out));
}

BiasedGraph simplify(const BiasedGraph& o) {
    const MultiGraph& g = o.graph();
    EdgeSet drop;
    std::map<std::pair<int, int>, std::vector<EdgeId>> classes;
    for (EdgeId e : g.edges()) {
        const Edge& ed = g.edge(e);
        if (ed.is_loop()) {
            EdgeSet c;
            c.set(e);
            if (o.is_balanced(c)) drop.set(e);
            continue;
        }
        classes[std::minmax(ed.u, ed.v)].push_back(e);
    }
    for (auto& [key, es] : classes) {
        // keep the least edge of each class of mutually balanced parallels
        std::vector<EdgeId> kept;
        for (EdgeId e : es) {
            bool dup = false;
            for (EdgeId k : kept) {
                EdgeSet c;
                c.set(e);
                c.set(k);
                if (o.is_balanced(c)) {
                    dup = true;
                    break;
                }
            }
            if (dup)
                drop.set(e);
            else
                kept.push_back(e);
        }
    }
    return o.without_edges(drop).compacted();
}

bool is_simple(const BiasedGraph& o) { return simplify(o).graph().num_edges() == o.graph().num_edges(); }

bool is_balanced_graph(const BiasedGraph& o) {
    if (std::holds_alternative<AllBalanced>(o.spec())) return true;
    if (auto* s = std::get_if<SignedBias>(&o.spec())) {
        // balanced iff some switching clears the signature: 2-colour by parity
        const MultiGraph& g = o.graph();
        std::vector<int> side(g.vertex_bound(), -1);
        for (VertexId r : g.vertices()) {
            if (side[r] >= 0) continue;
            side[r] = 0;
            std::vector<VertexId> st{r};
            while (!st.empty()) {
                VertexId v = st.back();
                st.pop_back();
                for (EdgeId e : g.incident(v)) {
                    VertexId w = g.other(e, v);
                    int want = side[v] ^ (s->signature.test(e) ? 1 : 0);
                    if (w == v) {
                        if (s->signature.test(e)) return false;
                        continue;
                    }
                    if (side[w] < 0) {
                        side[w] = want;
                        st.push_back(w);
                    } else if (side[w] != want) {
                        return false;
                    }
                }
            }
        }
        return true;
    }
    for (const Cycle& c : enumerate_cycles(o.graph()))
        if (!o.is_balanced(c.edges)) return false;
    return true;
}

}  // namespace tangle
