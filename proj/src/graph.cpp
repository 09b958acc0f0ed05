#include "tangle/graph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <unordered_map>

#include "tangle/config.hpp"

namespace tangle {

MultiGraph::MultiGraph(int n) {
    if (n < 0 || n > kMaxIds) throw PreconditionError("size", "vertex count out of range");
    vpresent_.assign(n, 1);
    inc_.assign(n, {});
    for (int v = 0; v < n; ++v) vset_.set(v);
    nv_ = n;
}

VertexId MultiGraph::add_vertex() {
    VertexId v = vertex_bound();
    add_vertex_with_id(v);
    return v;
}

void MultiGraph::add_vertex_with_id(VertexId v) {
    if (v < 0 || v >= kMaxIds) throw PreconditionError("size", "vertex id out of range");
    if (v >= vertex_bound()) {
        vpresent_.resize(v + 1, 0);
        inc_.resize(v + 1);
    }
    if (vpresent_[v]) throw PreconditionError("duplicate", "vertex already present");
    vpresent_[v] = 1;
    vset_.set(v);
    ++nv_;
}

EdgeId MultiGraph::add_edge(VertexId u, VertexId v) {
    EdgeId e = edge_bound();
    add_edge_with_id(e, u, v);
    return e;
}

void MultiGraph::add_edge_with_id(EdgeId e, VertexId u, VertexId v) {
    if (e < 0 || e >= kMaxIds) throw PreconditionError("size", "edge id out of range");
    if (!has_vertex(u) || !has_vertex(v)) throw PreconditionError("dangling", "edge endpoint missing");
    if (e >= edge_bound()) {
        edges_.resize(e + 1);
        epresent_.resize(e + 1, 0);
    }
    if (epresent_[e]) throw PreconditionError("duplicate", "edge already present");
    edges_[e] = Edge{u, v};
    epresent_[e] = 1;
    eset_.set(e);
    ++ne_;
    inc_[u].push_back(e);
    if (u != v) inc_[v].push_back(e);
    std::sort(inc_[u].begin(), inc_[u].end());
    std::sort(inc_[v].begin(), inc_[v].end());
}

int MultiGraph::degree(VertexId v) const {
    int d = 0;
    for (EdgeId e : inc_[v]) d += edges_[e].is_loop() ? 2 : 1;
    return d;
}

std::vector<VertexId> MultiGraph::vertices() const { return vset_.to_vector(); }
std::vector<EdgeId> MultiGraph::edges() const { return eset_.to_vector(); }

VertexSet MultiGraph::neighbors(VertexId v) const {
    VertexSet s;
    for (EdgeId e : inc_[v]) {
        VertexId w = other(e, v);
        if (w != v) s.set(w);
    }
    return s;
}

VertexSet MultiGraph::neighbors(const VertexSet& x) const {
    VertexSet s;
    x.for_each([&](int v) {
        if (has_vertex(v)) s |= neighbors(v);
    });
    return s - x;
}

EdgeSet MultiGraph::delta(const VertexSet& x) const {
    EdgeSet s;
    eset_.for_each([&](int e) {
        if (x.test(edges_[e].u) != x.test(edges_[e].v)) s.set(e);
    });
    return s;
}

EdgeSet MultiGraph::edges_within(const VertexSet& x) const {
    EdgeSet s;
    eset_.for_each([&](int e) {
        if (x.test(edges_[e].u) && x.test(edges_[e].v)) s.set(e);
    });
    return s;
}

EdgeSet MultiGraph::edges_between(VertexId a, VertexId b) const {
    EdgeSet s;
    for (EdgeId e : inc_[a])
        if (other(e, a) == b) s.set(e);
    return s;
}

VertexSet MultiGraph::endpoints(const EdgeSet& es) const {
    VertexSet s;
    es.for_each([&](int e) {
        if (has_edge(e)) {
            s.set(edges_[e].u);
            s.set(edges_[e].v);
        }
    });
    return s;
}

void MultiGraph::rebuild() {
    inc_.assign(vpresent_.size(), {});
    vset_ = {};
    eset_ = {};
    nv_ = ne_ = 0;
    for (int v = 0; v < vertex_bound(); ++v)
        if (vpresent_[v]) {
            vset_.set(v);
            ++nv_;
        }
    for (int e = 0; e < edge_bound(); ++e) {
        if (!epresent_[e]) continue;
        eset_.set(e);
        ++ne_;
        inc_[edges_[e].u].push_back(e);
        if (!edges_[e].is_loop()) inc_[edges_[e].v].push_back(e);
    }
}

MultiGraph MultiGraph::without_vertices(const VertexSet& x) const {
    MultiGraph h = *this;
    x.for_each([&](int v) {
        if (v < h.vertex_bound()) h.vpresent_[v] = 0;
    });
    for (int e = 0; e < h.edge_bound(); ++e)
        if (h.epresent_[e] && (x.test(h.edges_[e].u) || x.test(h.edges_[e].v))) h.epresent_[e] = 0;
    h.rebuild();
    return h;
}

MultiGraph MultiGraph::without_edges(const EdgeSet& es) const {
    MultiGraph h = *this;
    es.for_each([&](int e) {
        if (e < h.edge_bound()) h.epresent_[e] = 0;
    });
    h.rebuild();
    return h;
}

MultiGraph MultiGraph::induced(const VertexSet& x) const { return without_vertices(vset_ - x); }

MultiGraph MultiGraph::edge_induced(const EdgeSet& es) const {
    MultiGraph h = without_edges(eset_ - es);
    VertexSet keep = h.endpoints(h.edge_set());
    return h.without_vertices(h.vertex_set() - keep);
}

MultiGraph MultiGraph::spanning_with(const EdgeSet& es) const { return without_edges(eset_ - es); }

bool operator==(const MultiGraph& a, const MultiGraph& b) {
    if (a.vset_ != b.vset_ || a.eset_ != b.eset_) return false;
    bool same = true;
    a.eset_.for_each([&](int e) {
        const Edge& x = a.edges_[e];
        const Edge& y = b.edges_[e];
        if (!((x.u == y.u && x.v == y.v) || (x.u == y.v && x.v == y.u))) same = false;
    });
    return same;
}

// ---------------------------------------------------------------- cycles

namespace {

Cycle canonical_cycle(const std::vector<EdgeId>& es, const std::vector<VertexId>& vs) {
    const int n = static_cast<int>(es.size());
    Cycle c;
    for (EdgeId e : es) c.edges.set(e);
    for (VertexId v : vs) c.verts.set(v);
    std::vector<EdgeId> best_e;
    std::vector<VertexId> best_v;
    std::vector<EdgeId> ce(n);
    std::vector<VertexId> cv(n);
    for (int dir = 0; dir < 2; ++dir) {
        for (int r = 0; r < n; ++r) {
            for (int i = 0; i < n; ++i) {
                if (dir == 0) {
                    ce[i] = es[(r + i) % n];
                    cv[i] = vs[(r + i) % n];
                } else {
                    // reversed traversal: edge e_{r-i}, tail = head of e_{r-i} = v_{r-i+1}
                    int k = ((r - i) % n + n) % n;
                    ce[i] = es[k];
                    cv[i] = vs[(k + 1) % n];
                }
            }
            if (best_e.empty() || std::tie(ce, cv) < std::tie(best_e, best_v)) {
                best_e = ce;
                best_v = cv;
            }
        }
    }
    c.seq = std::move(best_e);
    c.vseq = std::move(best_v);
    return c;
}

}  // namespace

bool cycle_less(const Cycle& a, const Cycle& b) {
    if (a.seq.size() != b.seq.size()) return a.seq.size() < b.seq.size();
    return a.seq < b.seq;
}

std::optional<Cycle> make_cycle(const MultiGraph& g, const EdgeSet& es) {
    if (es.empty()) return std::nullopt;
    bool ok = true;
    es.for_each([&](int e) {
        if (!g.has_edge(e)) ok = false;
    });
    if (!ok) return std::nullopt;
    int first = es.first();
    if (es.count() == 1) {
        if (!g.edge(first).is_loop()) return std::nullopt;
        return canonical_cycle({first}, {g.edge(first).u});
    }
    // every vertex touched must have degree exactly two inside es, no loops
    std::unordered_map<int, int> deg;
    bool has_loop = false;
    es.for_each([&](int e) {
        const Edge& ed = g.edge(e);
        if (ed.is_loop()) has_loop = true;
        ++deg[ed.u];
        ++deg[ed.v];
    });
    if (has_loop) return std::nullopt;
    for (auto& [v, d] : deg)
        if (d != 2) return std::nullopt;
    std::vector<EdgeId> seq;
    std::vector<VertexId> vs;
    VertexId start = g.edge(first).u;
    VertexId cur = start;
    EdgeId ce = first;
    EdgeSet used;
    while (true) {
        seq.push_back(ce);
        vs.push_back(cur);
        used.set(ce);
        cur = g.other(ce, cur);
        if (cur == start) break;
        EdgeId nxt = -1;
        for (EdgeId f : g.incident(cur))
            if (es.test(f) && !used.test(f)) {
                nxt = f;
                break;
            }
        if (nxt < 0) return std::nullopt;
        ce = nxt;
    }
    if (used != es) return std::nullopt;  // disconnected union of cycles
    return canonical_cycle(seq, vs);
}

std::vector<Cycle> enumerate_cycles(const MultiGraph& g, std::optional<int> max_len) {
    const std::size_t cap = limits().cycle_cap;
    const int lim = max_len.value_or(kMaxIds);
    std::vector<Cycle> out;
    auto push = [&](Cycle c) {
        if (out.size() >= cap) throw ResourceLimit("cycle enumeration exceeded the configured cap");
        out.push_back(std::move(c));
    };
    if (lim >= 1)
        g.edge_set().for_each([&](int e) {
            if (g.edge(e).is_loop()) push(canonical_cycle({e}, {g.edge(e).u}));
        });
    std::vector<EdgeId> pe;
    std::vector<VertexId> pv;
    VertexSet on_path;
    for (VertexId s : g.vertices()) {
        on_path = {};
        on_path.set(s);
        pv.assign(1, s);
        pe.clear();
        std::function<void(VertexId)> dfs = [&](VertexId v) {
            for (EdgeId f : g.incident(v)) {
                if (g.edge(f).is_loop()) continue;
                if (!pe.empty() && f == pe.back()) continue;
                VertexId w = g.other(f, v);
                if (w == s) {
                    if (!pe.empty() && pe.front() < f && static_cast<int>(pe.size()) + 1 <= lim) {
                        pe.push_back(f);
                        push(canonical_cycle(pe, pv));
                        pe.pop_back();
                    }
                    continue;
                }
                if (w < s || on_path.test(w)) continue;
                if (static_cast<int>(pe.size()) + 2 > lim) continue;
                on_path.set(w);
                pe.push_back(f);
                pv.push_back(w);
                dfs(w);
                pv.pop_back();
                pe.pop_back();
                on_path.reset(w);
            }
        };
        dfs(s);
    }
    std::sort(out.begin(), out.end(), cycle_less);
    return out;
}

// ---------------------------------------------------------------- connectivity

std::vector<VertexSet> components(const MultiGraph& g) {
    std::vector<VertexSet> out;
    VertexSet seen;
    for (VertexId s : g.vertices()) {
        if (seen.test(s)) continue;
        VertexSet comp;
        std::vector<VertexId> stack{s};
        comp.set(s);
        while (!stack.empty()) {
            VertexId v = stack.back();
            stack.pop_back();
            for (EdgeId e : g.incident(v)) {
                VertexId w = g.other(e, v);
                if (!comp.test(w)) {
                    comp.set(w);
                    stack.push_back(w);
                }
            }
        }
        seen |= comp;
        out.push_back(comp);
    }
    return out;
}

bool is_connected(const MultiGraph& g) { return components(g).size() <= 1; }

namespace {

// Calls f on every subset of `pool` with exactly k elements; f returns false to stop.
bool for_each_subset(const std::vector<int>& pool, int k, const std::function<bool(const IdSet&)>& f) {
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    const int n = static_cast<int>(pool.size());
    if (k > n) return true;
    while (true) {
        IdSet s;
        for (int i : idx) s.set(pool[i]);
        if (!f(s)) return false;
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) return true;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

bool is_k_connected(const MultiGraph& g, int k) {
    if (g.num_vertices() < k + 1) return false;
    if (!is_connected(g)) return false;
    auto vs = g.vertices();
    for (int s = 1; s < k; ++s) {
        bool found = false;
        for_each_subset(vs, s, [&](const IdSet& x) {
            if (components(g.without_vertices(x)).size() > 1) {
                found = true;
                return false;
            }
            return true;
        });
        if (found) return false;
    }
    return true;
}

bool is_two_connected(const MultiGraph& g) {
    if (g.num_vertices() < 2 || !is_connected(g)) return false;
    for (VertexId v : g.vertices()) {
        VertexSet x;
        x.set(v);
        if (components(g.without_vertices(x)).size() > 1) return false;
    }
    return true;
}

std::vector<std::vector<VertexId>> simple_paths(const MultiGraph& g, VertexId a, VertexId b,
                                                const VertexSet& forbidden) {
    std::vector<std::vector<VertexId>> out;
    if (!g.has_vertex(a) || !g.has_vertex(b) || forbidden.test(a) || forbidden.test(b)) return out;
    std::vector<VertexId> path{a};
    VertexSet on;
    on.set(a);
    std::function<void(VertexId)> dfs = [&](VertexId v) {
        if (v == b) {
            out.push_back(path);
            return;
        }
        VertexSet nb = g.neighbors(v) - on - forbidden;
        nb.for_each([&](int w) {
            on.set(w);
            path.push_back(w);
            dfs(w);
            path.pop_back();
            on.reset(w);
        });
    };
    dfs(a);
    return out;
}

std::vector<Bridge> bridges_of(const MultiGraph& g, const VertexSet& x) {
    std::vector<Bridge> out;
    MultiGraph h = g.without_vertices(x);
    for (const VertexSet& comp : components(h)) {
        Bridge b;
        b.interior = comp;
        g.edge_set().for_each([&](int e) {
            const Edge& ed = g.edge(e);
            if (comp.test(ed.u) || comp.test(ed.v)) {
                b.edges.set(e);
                if (x.test(ed.u)) b.attachments.set(ed.u);
                if (x.test(ed.v)) b.attachments.set(ed.v);
            }
        });
        out.push_back(b);
    }
    return out;
}

bool is_vertex_cut(const MultiGraph& g, const VertexSet& x) {
    if (!x.subset_of(g.vertex_set()) || x.empty()) return false;
    if (components(g.without_vertices(x)).size() < 2) return false;
    bool minimal = true;
    x.for_each([&](int v) {
        VertexSet y = x;
        y.reset(v);
        if (!y.empty() && components(g.without_vertices(y)).size() >= 2) minimal = false;
    });
    return minimal;
}

std::vector<VertexCut> find_vertex_cuts(const MultiGraph& g, int k) {
    if (!is_connected(g)) throw PreconditionError("disconnected", "find_vertex_cuts requires a connected graph");
    std::vector<VertexCut> out;
    auto vs = g.vertices();
    for (int s = 1; s <= k; ++s) {
        for_each_subset(vs, s, [&](const IdSet& x) {
            if (is_vertex_cut(g, x)) out.push_back(VertexCut{x, bridges_of(g, x)});
            return true;
        });
    }
    return out;
}

// ---------------------------------------------------------------- blocks

bool BlockTree::is_leaf(int b) const { return blocks.size() == 1 || num_cut_vertices_in(b) <= 1; }

int BlockTree::num_cut_vertices_in(int b) const { return (blocks[b].verts & cut_vertices).count(); }

BlockTree block_tree(const MultiGraph& g) {
    if (!is_connected(g)) throw PreconditionError("disconnected", "block_tree requires a connected graph");
    BlockTree t;
    std::vector<int> disc(g.vertex_bound(), -1), low(g.vertex_bound(), 0);
    std::vector<EdgeId> stack;
    int timer = 0;
    std::function<void(VertexId, EdgeId)> dfs = [&](VertexId v, EdgeId pe) {
        disc[v] = low[v] = timer++;
        for (EdgeId e : g.incident(v)) {
            if (g.edge(e).is_loop() || e == pe) continue;
            VertexId w = g.other(e, v);
            if (disc[w] < 0) {
                stack.push_back(e);
                dfs(w, e);
                low[v] = std::min(low[v], low[w]);
                if (low[w] >= disc[v]) {
                    Block b;
                    while (true) {
                        EdgeId f = stack.back();
                        stack.pop_back();
                        b.edges.set(f);
                        if (f == e) break;
                    }
                    b.verts = g.endpoints(b.edges);
                    t.blocks.push_back(b);
                }
            } else if (disc[w] < disc[v]) {
                stack.push_back(e);
                low[v] = std::min(low[v], disc[w]);
            }
        }
    };
    auto vs = g.vertices();
    if (!vs.empty()) dfs(vs.front(), -1);
    g.edge_set().for_each([&](int e) {
        if (g.edge(e).is_loop()) {
            Block b;
            b.edges.set(e);
            b.verts.set(g.edge(e).u);
            t.blocks.push_back(b);
        }
    });
    std::sort(t.blocks.begin(), t.blocks.end(),
              [](const Block& a, const Block& b) { return a.edges.first() < b.edges.first(); });
    for (VertexId v : vs) {
        int c = 0;
        for (auto& b : t.blocks)
            if (b.verts.test(v)) ++c;
        if (c >= 2) t.cut_vertices.set(v);
    }
    t.cut_vertices.for_each([&](int v) {
        int first = -1;
        for (int i = 0; i < static_cast<int>(t.blocks.size()); ++i) {
            if (!t.blocks[i].verts.test(v)) continue;
            if (first < 0)
                first = i;
            else
                t.tree_edges.emplace_back(first, i);
        }
    });
    return t;
}

// ---------------------------------------------------------------- thetas

bool forms_theta(const EdgeSet& e1, const VertexSet& v1, const EdgeSet& e2, const VertexSet& v2) {
    if (e1 == e2) return false;
    EdgeSet shared = e1 & e2;
    if (shared.empty()) return false;
    return (v1 & v2).count() == shared.count() + 1;
}

bool forms_theta(const Cycle& c1, const Cycle& c2) { return forms_theta(c1.edges, c1.verts, c2.edges, c2.verts); }

std::vector<Theta> enumerate_theta_subgraphs(const MultiGraph& g) {
    auto cycles = enumerate_cycles(g);
    std::unordered_map<EdgeSet, int> index;
    for (int i = 0; i < static_cast<int>(cycles.size()); ++i) index[cycles[i].edges] = i;
    std::vector<Theta> out;
    for (int i = 0; i < static_cast<int>(cycles.size()); ++i) {
        for (int j = i + 1; j < static_cast<int>(cycles.size()); ++j) {
            if (!forms_theta(cycles[i], cycles[j])) continue;
            auto it = index.find(cycles[i].edges ^ cycles[j].edges);
            if (it == index.end() || it->second <= j) continue;
            if (out.size() >= limits().cycle_cap) throw ResourceLimit("theta enumeration exceeded the configured cap");
            out.push_back(Theta{cycles[i], cycles[j], cycles[it->second]});
        }
    }
    return out;
}

}  // namespace tangle
