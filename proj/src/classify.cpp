#include "tangle/classify.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

#include "tangle/config.hpp"
#include "tangle/linkage.hpp"

namespace tangle {

namespace {

class Budget {
public:
    explicit Budget(const char* what) : left_(limits().search_cap), what_(what) {}
    void tick() {
        if (left_-- == 0) throw ResourceLimit(std::string(what_) + " exceeded the configured cap");
    }

private:
    std::size_t left_;
    const char* what_;
};

bool all_balanced(const BiasedGraph& o, const EdgeSet& es) {
    const MultiGraph sub = o.graph().spanning_with(es);
    if (const auto* s = std::get_if<SignedBias>(&o.spec())) return is_balanced_graph(BiasedGraph(sub, *s));
    if (std::holds_alternative<AllBalanced>(o.spec())) return true;
    for (const Cycle& c : enumerate_cycles(sub))
        if (!o.is_balanced(c.edges)) return false;
    return true;
}

// Input plus its cycle table, shared by the checks of one search.
struct Ctx {
    const BiasedGraph& o;
    CycleTable table;
    explicit Ctx(const BiasedGraph& g) : o(g), table(cycle_table(g)) {}
};

bool all_balanced(const Ctx& cx, const EdgeSet& es) {
    if (!std::holds_alternative<ExplicitBias>(cx.o.spec())) return all_balanced(cx.o, es);
    for (std::size_t i = 0; i < cx.table.size(); ++i)
        if (!cx.table.balanced[i] && cx.table.cycles[i].edges.subset_of(es)) return false;
    return true;
}

std::optional<Certificate> accept(const Ctx& cx, const FamilyDescriptor& d) {
    if (!satisfies_family(cx.o, d, cx.table)) return std::nullopt;
    Certificate c = verify_family(cx.o, d);
    if (c.ok()) return c;
    return std::nullopt;
}

EdgeSet one(EdgeId e) {
    EdgeSet s;
    s.set(e);
    return s;
}

// Keeps the first copy of each vertex.
std::vector<VertexId> distinct_first(const std::vector<VertexId>& order) {
    std::vector<VertexId> out;
    VertexSet seen;
    for (VertexId v : order)
        if (!seen.test(v)) {
            seen.set(v);
            out.push_back(v);
        }
    return out;
}

bool boundary_order_ok(const std::vector<VertexId>& order) {
    std::vector<VertexId> n = normalize_order(order);
    std::sort(n.begin(), n.end());
    return std::adjacent_find(n.begin(), n.end()) == n.end();
}

// Edge path between a and b inside `es`, avoiding `forbidden`.
std::optional<EdgeSet> find_path(const MultiGraph& g, const EdgeSet& es, VertexId a, VertexId b,
                                 const VertexSet& forbidden) {
    std::vector<EdgeId> via(g.vertex_bound(), -1);
    std::vector<char> seen(g.vertex_bound(), 0);
    std::vector<VertexId> queue{a};
    seen[a] = 1;
    for (std::size_t i = 0; i < queue.size(); ++i) {
        VertexId v = queue[i];
        if (v == b) break;
        for (EdgeId e : g.incident(v)) {
            if (!es.test(e)) continue;
            VertexId w = g.other(e, v);
            if (seen[w] || (forbidden.test(w) && w != b)) continue;
            seen[w] = 1;
            via[w] = e;
            queue.push_back(w);
        }
    }
    if (!seen[b] || a == b) return std::nullopt;
    EdgeSet p;
    for (VertexId v = b; v != a; v = g.other(via[v], v)) p.set(via[v]);
    return p;
}

// Ordered choice of the edges `fs`, each oriented as (x_i, y_i), with a
// prefix test after every placement. `orient` gives the ends for a flag.
using Ends = std::pair<VertexId, VertexId>;
bool pair_orders(const std::vector<EdgeId>& fs, bool fix_first, bool allow_flip,
                 const std::function<Ends(EdgeId, bool)>& orient,
                 const std::function<bool(const std::vector<VertexId>&, const std::vector<VertexId>&)>& prefix_ok,
                 const std::function<bool(const std::vector<EdgeId>&, const std::vector<VertexId>&,
                                          const std::vector<VertexId>&)>& leaf,
                 Budget& budget) {
    const int m = static_cast<int>(fs.size());
    std::vector<char> used(m, 0);
    std::vector<EdgeId> seq;
    std::vector<VertexId> xs, ys;
    std::function<bool()> rec = [&]() -> bool {
        const int k = static_cast<int>(seq.size());
        if (k == m) return leaf(seq, xs, ys);
        for (int i = 0; i < m; ++i) {
            if (used[i]) continue;
            if (fix_first && k == 0 && i != 0) break;
            for (int flip = 0; flip < ((allow_flip && !(fix_first && k == 0)) ? 2 : 1); ++flip) {
                budget.tick();
                Ends en = orient(fs[i], flip == 1);
                used[i] = 1;
                seq.push_back(fs[i]);
                xs.push_back(en.first);
                ys.push_back(en.second);
                bool ok = k == 0 || prefix_ok(xs, ys);
                if (ok && rec()) return true;
                used[i] = 0;
                seq.pop_back();
                xs.pop_back();
                ys.pop_back();
            }
        }
        return false;
    };
    return rec();
}

std::vector<VertexId> concat(std::vector<VertexId> a, const std::vector<VertexId>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

// ------------------------------------------------------------ signatures

std::optional<EdgeSet> signed_signature(const BiasedGraph& o) {
    if (const auto* s = std::get_if<SignedBias>(&o.spec())) return s->signature & o.graph().edge_set();
    const MultiGraph& g = o.graph();
    if (std::holds_alternative<AllBalanced>(o.spec())) return EdgeSet{};
    // Fundamental cycles of a spanning forest fix the only candidate.
    std::vector<EdgeId> parent(g.vertex_bound(), -1);
    std::vector<int> depth(g.vertex_bound(), -1);
    EdgeSet tree;
    for (VertexId r : g.vertices()) {
        if (depth[r] >= 0) continue;
        depth[r] = 0;
        std::vector<VertexId> queue{r};
        for (std::size_t i = 0; i < queue.size(); ++i) {
            VertexId v = queue[i];
            for (EdgeId e : g.incident(v)) {
                VertexId w = g.other(e, v);
                if (depth[w] >= 0) continue;
                depth[w] = depth[v] + 1;
                parent[w] = e;
                tree.set(e);
                queue.push_back(w);
            }
        }
    }
    EdgeSet sig;
    for (EdgeId e : g.edges()) {
        if (tree.test(e)) continue;
        EdgeSet c = one(e);
        VertexId a = g.edge(e).u, b = g.edge(e).v;
        while (a != b) {
            if (depth[a] < depth[b]) std::swap(a, b);
            c.set(parent[a]);
            a = g.other(parent[a], a);
        }
        if (!o.is_balanced(c)) sig.set(e);
    }
    for (const Cycle& c : enumerate_cycles(g))
        if (o.is_balanced(c.edges) != ((c.edges & sig).count() % 2 == 0)) return std::nullopt;
    return sig;
}

// ---------------------------------------------------------------- oracle

TangleVerdict oracle_is_tangled(const BiasedGraph& o) {
    const MultiGraph& g = o.graph();
    if (g.num_vertices() > limits().oracle_vertex_cap)
        throw ResourceLimit("oracle vertex cap exceeded");
    // Every cycle by depth-first extension from its least vertex.
    std::set<EdgeSet> found;
    std::vector<std::pair<EdgeSet, VertexSet>> cycles;
    for (VertexId s : g.vertices()) {
        VertexSet on;
        on.set(s);
        EdgeSet path;
        std::function<void(VertexId)> walk = [&](VertexId v) {
            for (EdgeId e : g.incident(v)) {
                if (path.test(e)) continue;
                VertexId w = g.other(e, v);
                if (w == s) {
                    EdgeSet c = path;
                    c.set(e);
                    if (found.insert(c).second) cycles.push_back({c, on});
                    if (found.size() > limits().cycle_cap) throw ResourceLimit("oracle cycle cap exceeded");
                    continue;
                }
                if (w < s || on.test(w)) continue;
                on.set(w);
                path.set(e);
                walk(w);
                path.reset(e);
                on.reset(w);
            }
        };
        walk(s);
    }
    std::vector<std::pair<EdgeSet, VertexSet>> bad;
    for (const auto& c : cycles)
        if (!o.is_balanced(c.first)) bad.push_back(c);
    TangleVerdict v;
    if (bad.empty()) return v;
    for (std::size_t i = 0; i < bad.size(); ++i)
        for (std::size_t j = i + 1; j < bad.size(); ++j)
            if (!bad[i].second.intersects(bad[j].second)) {
                v.kind = TangleVerdict::Kind::TwoDisjointUnbalanced;
                v.first = make_cycle(g, bad[i].first);
                v.second = make_cycle(g, bad[j].first);
                return v;
            }
    VertexSet common = bad[0].second;
    for (const auto& c : bad) common &= c.second;
    if (common.any()) {
        v.kind = TangleVerdict::Kind::HasBlockingVertex;
        v.blocking = common.first();
        return v;
    }
    v.kind = TangleVerdict::Kind::Tangled;
    return v;
}

// ---------------------------------------------------------- sum splitting

namespace {

struct Split {
    SumStep step;
    BiasedGraph tangled;
};

std::optional<Split> try_split(const BiasedGraph& o, const VertexSet& joint, const std::vector<Bridge>& side) {
    const MultiGraph& g = o.graph();
    const int t = joint.count();
    VertexSet interior;
    EdgeSet e2;
    for (const Bridge& b : side) {
        interior |= b.interior;
        e2 |= b.edges;
    }
    if ((interior | joint).count() < min_balanced_side(t, limits().sum_threshold)) return std::nullopt;
    if (g.num_vertices() - interior.count() <= t) return std::nullopt;
    if (!all_balanced(o, e2)) return std::nullopt;

    std::vector<VertexId> x = joint.to_vector();
    MultiGraph g1 = g.without_vertices(interior);
    EdgeSet virt;
    std::vector<std::pair<VertexId, VertexId>> pairs;
    for (int i = 0; i < t; ++i)
        for (int j = i + 1; j < t; ++j) pairs.push_back({x[i], x[j]});
    std::vector<EdgeId> vid;
    EdgeId fresh = g.edge_bound();
    for (auto [a, b] : pairs) {
        g1.add_edge_with_id(fresh, a, b);
        virt.set(fresh);
        vid.push_back(fresh++);
    }
    ExplicitBias bias;
    for (const Cycle& c : enumerate_cycles(g1)) {
        EdgeSet vpart = c.edges & virt;
        bool bal;
        if (vpart.empty()) {
            bal = o.is_balanced(c.edges);
        } else if (vpart.count() == 3) {
            bal = true;
        } else {
            EdgeSet p = c.edges - vpart;
            VertexSet vv = g1.endpoints(vpart);
            std::vector<VertexId> ends;
            vv.for_each([&](int v) {
                int deg = 0;
                vpart.for_each([&](int e) { deg += (g1.edge(e).u == v) + (g1.edge(e).v == v); });
                if (deg == 1) ends.push_back(v);
            });
            if (ends.size() != 2) throw std::logic_error("virtual segment is not a path");
            VertexSet forbidden = g1.endpoints(p);
            forbidden.reset(ends[0]);
            forbidden.reset(ends[1]);
            auto q = find_path(g, e2, ends[0], ends[1], forbidden);
            if (!q) throw std::logic_error("balanced side lacks a path between joint vertices");
            bal = o.is_balanced(p | *q);
        }
        if (bal) bias.balanced.insert(c.edges);
    }
    BiasedGraph o1(std::move(g1), std::move(bias));
    if (!is_tangled(o1).tangled()) return std::nullopt;

    MultiGraph g2;
    (interior | joint).for_each([&](int v) { g2.add_vertex_with_id(v); });
    e2.for_each([&](int e) { g2.add_edge_with_id(e, g.edge(e).u, g.edge(e).v); });
    for (std::size_t i = 0; i < pairs.size(); ++i) g2.add_edge_with_id(vid[i], pairs[i].first, pairs[i].second);

    Split s;
    s.step.t = t;
    s.step.joint = x;
    s.step.balanced = BiasedGraph(std::move(g2), AllBalanced{});
    for (VertexId v : x) s.step.glue.verts.push_back({v, v});
    for (EdgeId e : vid) s.step.glue.kt.push_back({e, e});
    s.tangled = std::move(o1);
    return s;
}

std::optional<Split> next_split(const BiasedGraph& o) {
    const MultiGraph& g = o.graph();
    if (!is_connected(g)) throw PreconditionError("disconnected", "sum splitting needs a connected graph");
    Budget budget("sum splitting");
    std::vector<VertexCut> cuts = find_vertex_cuts(g, 3);
    for (int t = 1; t <= 3; ++t)
        for (const VertexCut& cut : cuts) {
            if (cut.cut.count() != t) continue;
            std::vector<Bridge> full;
            for (const Bridge& b : cut.bridges)
                if (b.attachments == cut.cut) full.push_back(b);
            const int nb = static_cast<int>(full.size());
            if (nb == 0 || nb > 20) continue;
            for (unsigned mask = 1; mask < (1u << nb); ++mask) {
                budget.tick();
                std::vector<Bridge> side;
                for (int i = 0; i < nb; ++i)
                    if (mask >> i & 1) side.push_back(full[i]);
                if (auto s = try_split(o, cut.cut, side)) return s;
            }
        }
    return std::nullopt;
}

bool same_graph(const MultiGraph& a, const MultiGraph& b) {
    if (a.vertex_set() != b.vertex_set() || a.edge_set() != b.edge_set()) return false;
    for (EdgeId e : a.edges())
        if (std::minmax(a.edge(e).u, a.edge(e).v) != std::minmax(b.edge(e).u, b.edge(e).v)) return false;
    return true;
}

}  // namespace

const char* core_kind_name(CoreKind k) {
    switch (k) {
        case CoreKind::FourConnected: return "four-connected";
        case CoreKind::GeneralizedWheel: return "generalized-wheel";
        case CoreKind::Irreducible: return "irreducible";
    }
    return "?";
}

std::optional<SumStep> find_sum_step(const BiasedGraph& o) {
    auto s = next_split(o);
    if (!s) return std::nullopt;
    return s->step;
}

SumDecomposition decompose(const BiasedGraph& o) {
    if (!is_tangled(o).tangled()) throw PreconditionError("not-tangled", "decompose needs a tangled biased graph");
    SumDecomposition d;
    BiasedGraph cur = o;
    while (auto s = next_split(cur)) {
        d.steps.push_back(std::move(s->step));
        cur = std::move(s->tangled);
    }
    d.core = cur;
    if (is_k_connected(cur.graph(), 4)) {
        d.core_kind = CoreKind::FourConnected;
    } else if (auto w = recognize(cur, FamilyKind::GeneralizedWheel)) {
        d.core_kind = CoreKind::GeneralizedWheel;
        d.wheel = std::move(w);
    }
    return d;
}

BiasedGraph recompose(const SumDecomposition& d) {
    BiasedGraph cur = d.core;
    for (auto it = d.steps.rbegin(); it != d.steps.rend(); ++it) cur = t_sum(cur, it->balanced, it->t, it->glue).sum;
    return cur;
}

std::string check_decomposition(const BiasedGraph& o, const SumDecomposition& d) {
    try {
        BiasedGraph cur = d.core;
        if (!is_tangled(cur).tangled()) return "core is not tangled";
        if (d.core_kind == CoreKind::GeneralizedWheel && (!d.wheel || !verify_family(cur, d.wheel->descriptor).ok()))
            return "core wheel certificate fails";
        for (std::size_t k = d.steps.size(); k-- > 0;) {
            const SumStep& s = d.steps[k];
            if (!is_balanced_graph(s.balanced)) return "step " + std::to_string(k) + " has an unbalanced side";
            if (s.balanced.graph().num_vertices() < min_balanced_side(s.t, limits().sum_threshold))
                return "step " + std::to_string(k) + " has a balanced side below the size threshold";
            cur = t_sum(cur, s.balanced, s.t, s.glue).sum;
            if (!is_tangled(cur).tangled()) return "tangled side before step " + std::to_string(k) + " is not tangled";
        }
        if (!same_graph(cur.graph(), o.graph())) return "recomposed graph differs from the input";
        for (const Cycle& c : enumerate_cycles(o.graph()))
            if (cur.is_balanced(c.edges) != o.is_balanced(c.edges)) return "recomposed bias differs on a cycle";
    } catch (const PreconditionError& e) {
        return std::string("recomposition failed: ") + e.what();
    }
    return {};
}

// ------------------------------------------------------------ recognizers

namespace {

using Found = std::optional<Certificate>;

Found find_fat_triangle(const Ctx& cx) {
    const BiasedGraph& o = cx.o;
    const MultiGraph& g = o.graph();
    Budget budget("fat-triangle search");
    std::vector<VertexId> vs = g.vertices();
    for (std::size_t a = 0; a < vs.size(); ++a)
        for (std::size_t b = a + 1; b < vs.size(); ++b)
            for (std::size_t c = b + 1; c < vs.size(); ++c) {
                std::vector<EdgeId> sides[3] = {g.edges_between(vs[a], vs[b]).to_vector(),
                                                g.edges_between(vs[b], vs[c]).to_vector(),
                                                g.edges_between(vs[c], vs[a]).to_vector()};
                if (sides[0].empty() || sides[1].empty() || sides[2].empty()) continue;
                if (sides[0].size() + sides[1].size() + sides[2].size() > 24) continue;
                EdgeSet f[3];
                std::function<Found(int)> rec = [&](int i) -> Found {
                    if (i == 3) {
                        budget.tick();
                        EdgeSet h = g.edge_set() - f[0] - f[1] - f[2];
                        if (!all_balanced(cx, h)) return std::nullopt;
                        FamilyDescriptor d;
                        d.kind = FamilyKind::FatTriangle;
                        d.graph = g;
                        d.v = {{"v1", vs[a]}, {"v2", vs[b]}, {"v3", vs[c]}};
                        d.es = {{"H", h}, {"F12", f[0]}, {"F23", f[1]}, {"F31", f[2]}};
                        return accept(cx, d);
                    }
                    const std::size_t n = sides[i].size();
                    for (unsigned mask = 1; mask < (1u << n); ++mask) {
                        f[i] = EdgeSet{};
                        for (std::size_t j = 0; j < n; ++j)
                            if (mask >> j & 1) f[i].set(sides[i][j]);
                        if (auto r = rec(i + 1)) return r;
                    }
                    return std::nullopt;
                };
                if (auto r = rec(0)) return r;
            }
    return std::nullopt;
}

Found find_k5(const Ctx& cx) {
    const BiasedGraph& o = cx.o;
    const MultiGraph& g = o.graph();
    if (g.num_vertices() != 5) return std::nullopt;
    FamilyDescriptor d;
    d.kind = FamilyKind::K5Parallel;
    d.graph = g;
    std::vector<VertexId> vs = g.vertices();
    for (int i = 0; i < 5; ++i) d.v["k" + std::to_string(i + 1)] = vs[i];
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) {
            int c = g.edges_between(vs[i], vs[j]).count();
            if (c == 0) return std::nullopt;
            d.mults.push_back(c);
        }
    return accept(cx, d);
}

Found find_pp_signed(const Ctx& cx) {
    const BiasedGraph& o = cx.o;
    auto sig = signed_signature(o);
    if (!sig) return std::nullopt;
    const MultiGraph& g = o.graph();
    Budget budget("pp-signed search");
    std::vector<VertexId> vs = g.vertices();
    const int n = static_cast<int>(vs.size());
    if (n > 20) throw ResourceLimit("pp-signed search: too many switchings");
    std::vector<EdgeSet> fsets;
    for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
        VertexSet s;
        for (int i = 1; i < n; ++i)
            if (mask >> (i - 1) & 1) s.set(vs[i]);
        EdgeSet f = *sig ^ g.delta(s);
        if (f.any()) fsets.push_back(f);
    }
    std::stable_sort(fsets.begin(), fsets.end(), [](const EdgeSet& a, const EdgeSet& b) { return a.count() < b.count(); });
    fsets.erase(std::unique(fsets.begin(), fsets.end()), fsets.end());
    for (const EdgeSet& f : fsets) {
        budget.tick();
        MultiGraph base = g.spanning_with(g.edge_set() - f);
        if (!planar_embedding(base)) continue;
        std::vector<EdgeId> fs = f.to_vector();
        Found out;
        auto orient = [&](EdgeId e, bool flip) -> Ends {
            return flip ? Ends{g.edge(e).v, g.edge(e).u} : Ends{g.edge(e).u, g.edge(e).v};
        };
        auto prefix = [&](const std::vector<VertexId>& xs, const std::vector<VertexId>& ys) {
            return disk_planar(base, distinct_first(concat(xs, ys)));
        };
        auto leaf = [&](const std::vector<EdgeId>& seq, const std::vector<VertexId>& xs, const std::vector<VertexId>& ys) {
            std::vector<VertexId> order = concat(xs, ys);
            if (!boundary_order_ok(order) || !disk_planar(base, order)) return false;
            FamilyDescriptor d;
            d.kind = FamilyKind::PPSigned;
            d.graph = g;
            d.es["B"] = g.edge_set() - f;
            d.sequence = seq;
            d.pairing = order;
            out = accept(cx, d);
            return out.has_value();
        };
        if (pair_orders(fs, true, true, orient, prefix, leaf, budget)) return out;
    }
    return std::nullopt;
}

Found find_wheel(const Ctx& cx) {
    const BiasedGraph& o = cx.o;
    const MultiGraph& g = o.graph();
    Budget budget("generalized-wheel search");
    for (VertexId w : g.vertices()) {
        VertexSet wv;
        wv.set(w);
        bool loop = false;
        for (EdgeId e : g.incident(w)) loop = loop || g.edge(e).is_loop();
        if (loop) continue;
        const MultiGraph gw = g.without_vertices(wv);
        const VertexSet nw = g.neighbors(w);
        std::vector<VertexId> rest = gw.vertices();
        const int r = static_cast<int>(rest.size());
        if (r > 20) throw ResourceLimit("generalized-wheel search: too many vertices");

        auto attempt = [&](const std::vector<VertexId>& z, const std::vector<EdgeSet>& parts) -> Found {
            budget.tick();
            const int k = static_cast<int>(z.size());
            FamilyDescriptor d;
            d.kind = FamilyKind::GeneralizedWheel;
            d.graph = g;
            d.v["w"] = w;
            for (int i = 1; i <= k; ++i) {
                const EdgeSet& p = parts[i - 1];
                if (!is_two_connected(g.edge_induced(p))) return std::nullopt;
                d.v["z" + std::to_string(i)] = z[i - 1];
                d.es["G" + std::to_string(i)] = p;
                if (p.count() == 1) continue;
                VertexSet att = nw & g.endpoints(p);
                att.reset(z[i - 1]);
                att.reset(z[i == 1 ? k - 1 : i - 2]);
                if (att.count() < 2) return std::nullopt;
                VertexId x0 = att.first();
                EdgeId s0 = (g.edges_between(w, x0)).first();
                VertexSet xs, ys;
                xs.set(x0);
                bool fail = false;
                att.for_each([&](int y) {
                    if (y == x0 || fail) return;
                    auto path = find_path(g, p, x0, y, VertexSet{});
                    if (!path) {
                        fail = true;
                        return;
                    }
                    EdgeSet c = *path;
                    c.set(s0);
                    c.set(g.edges_between(w, y).first());
                    (o.is_balanced(c) ? xs : ys).set(y);
                });
                if (fail || ys.empty()) return std::nullopt;
                d.vs["X" + std::to_string(i)] = xs;
                d.vs["Y" + std::to_string(i)] = ys;
            }
            return accept(cx, d);
        };

        for (unsigned mask = 0; mask < (1u << r); ++mask) {
            VertexSet zset;
            for (int i = 0; i < r; ++i)
                if (mask >> i & 1) zset.set(rest[i]);
            const int k = zset.count();
            if (k < 2) continue;
            budget.tick();
            // Pieces: bridges of Z, and single edges joining two of Z.
            std::vector<std::pair<VertexSet, EdgeSet>> pieces;
            bool bad = false;
            for (const Bridge& b : bridges_of(gw, zset)) pieces.push_back({b.attachments, b.edges});
            for (EdgeId e : gw.edges()) {
                const Edge& ed = gw.edge(e);
                if (!zset.test(ed.u) || !zset.test(ed.v)) continue;
                if (ed.is_loop()) bad = true;
                pieces.push_back({VertexSet{ed.u, ed.v}, one(e)});
            }
            for (const auto& pc : pieces) bad = bad || pc.first.count() != 2;
            if (bad) continue;
            if (k == 2) {
                const int nb = static_cast<int>(pieces.size());
                if (nb < 2 || nb > 16) continue;
                std::vector<VertexId> z = zset.to_vector();
                for (unsigned split = 1; split < (1u << (nb - 1)); ++split) {
                    EdgeSet p1, p2;
                    for (int i = 0; i < nb; ++i) ((split >> i & 1) ? p1 : p2) |= pieces[i].second;
                    if (auto f = attempt(z, {p1, p2})) return f;
                }
                continue;
            }
            std::map<std::pair<VertexId, VertexId>, EdgeSet> by_pair;
            for (const auto& pc : pieces) {
                auto ab = pc.first.to_vector();
                by_pair[{ab[0], ab[1]}] |= pc.second;
            }
            if (static_cast<int>(by_pair.size()) != k) continue;
            std::map<VertexId, std::vector<VertexId>> adj;
            for (const auto& [ab, es] : by_pair) {
                adj[ab.first].push_back(ab.second);
                adj[ab.second].push_back(ab.first);
            }
            bool ring = static_cast<int>(adj.size()) == k;
            for (const auto& [v, nb] : adj) ring = ring && nb.size() == 2;
            if (!ring) continue;
            std::vector<VertexId> z{zset.first()};
            VertexId prev = -1;
            while (static_cast<int>(z.size()) < k) {
                const auto& nb = adj[z.back()];
                VertexId nx = nb[0] == prev ? nb[1] : nb[0];
                prev = z.back();
                z.push_back(nx);
            }
            if (adj[z.back()][0] != z[0] && adj[z.back()][1] != z[0]) continue;
            std::vector<EdgeSet> parts;
            for (int i = 0; i < k; ++i) {
                VertexId a = z[(i + k - 1) % k], b = z[i];
                parts.push_back(by_pair[std::minmax(a, b)]);
            }
            if (auto f = attempt(z, parts)) return f;
        }
    }
    return std::nullopt;
}

// Vertices of degree 4 with four distinct neighbours and no loop.
std::vector<std::pair<VertexId, std::vector<EdgeId>>> quartic_hubs(const MultiGraph& g) {
    std::vector<std::pair<VertexId, std::vector<EdgeId>>> out;
    for (VertexId w : g.vertices()) {
        const auto& inc = g.incident(w);
        if (inc.size() != 4) continue;
        VertexSet nb;
        bool ok = true;
        for (EdgeId e : inc) {
            VertexId u = g.other(e, w);
            ok = ok && u != w && !nb.test(u);
            nb.set(u);
        }
        if (ok) out.push_back({w, inc});
    }
    return out;
}

Found find_criss_cross(const Ctx& cx) {
    const BiasedGraph& o = cx.o;
    const MultiGraph& g = o.graph();
    Budget budget("criss-cross search");
    static const int kPairings[3][4] = {{0, 2, 1, 3}, {0, 1, 2, 3}, {0, 1, 3, 2}};
    for (const auto& [w, inc] : quartic_hubs(g))
        for (const auto& p : kPairings) {
            EdgeId ee[4];
            VertexId u[4];
            for (int i = 0; i < 4; ++i) {
                ee[i] = inc[p[i]];
                u[i] = g.other(ee[i], w);
            }
            for (EdgeId f1 : g.edges_between(u[0], u[2]).to_vector())
                for (EdgeId f2 : g.edges_between(u[1], u[3]).to_vector()) {
                    budget.tick();
                    EdgeSet h = g.edge_set();
                    for (EdgeId e : {ee[0], ee[1], ee[2], ee[3], f1, f2}) h.reset(e);
                    if (!all_balanced(cx, h)) continue;
                    FamilyDescriptor d;
                    d.kind = FamilyKind::CrissCross;
                    d.graph = g;
                    d.v["w"] = w;
                    for (int i = 0; i < 4; ++i) {
                        d.v["u" + std::to_string(i + 1)] = u[i];
                        d.e["e" + std::to_string(i + 1)] = ee[i];
                    }
                    d.e["f1"] = f1;
                    d.e["f2"] = f2;
                    d.es["H"] = h;
                    if (auto c = accept(cx, d)) return c;
                }
        }
    return std::nullopt;
}

Found find_special_vertex(const Ctx& cx) {
    const BiasedGraph& o = cx.o;
    const MultiGraph& g = o.graph();
    Budget budget("special-vertex search");
    for (const auto& [w, inc] : quartic_hubs(g)) {
        std::vector<int> perm{0, 1, 2, 3};
        VertexSet named;
        named.set(w);
        for (EdgeId e : inc) named.set(g.other(e, w));
        std::vector<VertexId> rest = (g.vertex_set() - named).to_vector();
        const int r = static_cast<int>(rest.size());
        if (r > 20) throw ResourceLimit("special-vertex search: too many vertices");
        do {
            // roles z1, z2, u1, u2 with their edges from w
            EdgeId wz1 = inc[perm[0]], wz2 = inc[perm[1]], g1 = inc[perm[2]], g2 = inc[perm[3]];
            VertexId z1 = g.other(wz1, w), z2 = g.other(wz2, w), u1 = g.other(g1, w), u2 = g.other(g2, w);
            std::vector<EdgeId> ezs = g.edges_between(z1, z2).to_vector();
            std::vector<EdgeId> eus = g.edges_between(u1, u2).to_vector();
            if (ezs.empty() || eus.empty()) continue;
            for (unsigned mask = 0; mask < (1u << r); ++mask) {
                VertexSet h1v{u1, z2}, h2v{z1, u2};
                for (int i = 0; i < r; ++i) ((mask >> i & 1) ? h1v : h2v).set(rest[i]);
                const EdgeSet h1 = g.edges_within(h1v), h2 = g.edges_within(h2v);
                const MultiGraph h1g = g.induced(h1v).spanning_with(h1), h2g = g.induced(h2v).spanning_with(h2);
                for (EdgeId ez : ezs)
                    for (EdgeId eu : eus) {
                        budget.tick();
                        EdgeSet hall = h1 | h2;
                        for (EdgeId e : {ez, eu, wz1, wz2}) hall.set(e);
                        EdgeSet f = g.edge_set() - hall;
                        f.reset(g1);
                        f.reset(g2);
                        if (f.empty() || !all_balanced(cx, hall)) continue;
                        Found out;
                        auto orient = [&](EdgeId e, bool) -> Ends {
                            VertexId a = g.edge(e).u, b = g.edge(e).v;
                            return h1v.test(a) ? Ends{a, b} : Ends{b, a};
                        };
                        auto prefix = [&](const std::vector<VertexId>& xs, const std::vector<VertexId>& ys) {
                            return disk_planar(h1g, distinct_first(concat(xs, {u1, z2}))) &&
                                   disk_planar(h2g, distinct_first(concat(ys, {z1, u2})));
                        };
                        auto leaf = [&](const std::vector<EdgeId>& seq, const std::vector<VertexId>& xs,
                                        const std::vector<VertexId>& ys) {
                            if (!boundary_order_ok(concat(xs, {u1, z2})) || !boundary_order_ok(concat(ys, {z1, u2})))
                                return false;
                            FamilyDescriptor d;
                            d.kind = FamilyKind::PPSpecialVertex;
                            d.graph = g;
                            d.v = {{"w", w}, {"z1", z1}, {"z2", z2}, {"u1", u1}, {"u2", u2}};
                            d.e = {{"z1z2", ez}, {"u1u2", eu}, {"wz1", wz1}, {"wz2", wz2}, {"g1", g1}, {"g2", g2}};
                            d.vs = {{"H1", h1v}, {"H2", h2v}};
                            d.es = {{"H1", h1}, {"H2", h2}};
                            d.sequence = seq;
                            d.pairing = concat(xs, ys);
                            out = accept(cx, d);
                            return out.has_value();
                        };
                        if (pair_orders(f.to_vector(), false, false, orient, prefix, leaf, budget)) return out;
                    }
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return std::nullopt;
}

// Assigns each edge in `edges` one of its allowed classes; class 0 is H and
// is only taken while H stays balanced.
struct EdgeChoice {
    EdgeId e;
    std::vector<int> classes;
};

bool assign_classes(const Ctx& cx, EdgeSet h, const std::vector<EdgeChoice>& edges,
                    const std::function<bool(int cls, EdgeId e, bool add)>& admit,
                    const std::function<bool(const EdgeSet& h)>& leaf, Budget& budget) {
    std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
        if (i == edges.size()) return leaf(h);
        for (int cls : edges[i].classes) {
            budget.tick();
            EdgeId e = edges[i].e;
            if (cls == 0) {
                h.set(e);
                if (all_balanced(cx, h) && rec(i + 1)) return true;
                h.reset(e);
                continue;
            }
            if (!admit(cls, e, true)) continue;
            if (rec(i + 1)) return true;
            admit(cls, e, false);
        }
        return false;
    };
    return rec(0);
}

Found find_special_pair(const Ctx& cx) {
    const BiasedGraph& o = cx.o;
    const MultiGraph& g = o.graph();
    Budget budget("special-pair search");
    for (auto [x, y] : blocking_pairs(o)) {
        // classes: 0 H, 1 Fx, 2 Fy, 3 E
        EdgeSet h;
        std::vector<EdgeChoice> choices;
        for (EdgeId e : g.edges()) {
            const Edge& ed = g.edge(e);
            bool at_x = ed.u == x || ed.v == x, at_y = ed.u == y || ed.v == y;
            if (ed.is_loop() || (!at_x && !at_y)) {
                h.set(e);
                continue;
            }
            if (at_x && at_y)
                choices.push_back({e, {3, 0, 1, 2}});
            else
                choices.push_back({e, {at_x ? 1 : 2, 0}});
        }
        if (!all_balanced(cx, h)) continue;
        EdgeSet fx, fy, ee;
        VertexSet xs, ys;
        auto admit = [&](int cls, EdgeId e, bool add) -> bool {
            if (cls == 3) {
                add ? ee.set(e) : ee.reset(e);
                return true;
            }
            VertexId hub = cls == 1 ? x : y;
            VertexId v = g.other(e, hub);
            VertexSet& s = cls == 1 ? xs : ys;
            EdgeSet& f = cls == 1 ? fx : fy;
            if (add) {
                if (s.test(v)) return false;
                s.set(v);
                f.set(e);
            } else {
                s.reset(v);
                f.reset(e);
            }
            return true;
        };
        Found out;
        auto leaf = [&](const EdgeSet& hh) {
            if ((xs & ys).count() > 1) return false;
            FamilyDescriptor d;
            d.kind = FamilyKind::PPSpecialPair;
            d.graph = g;
            d.v = {{"x", x}, {"y", y}};
            d.vs = {{"X", xs}, {"Y", ys}};
            d.es = {{"H", hh}, {"Fx", fx}, {"Fy", fy}, {"E", ee}};
            out = accept(cx, d);
            return out.has_value();
        };
        if (assign_classes(cx, h, choices, admit, leaf, budget)) return out;
    }
    return std::nullopt;
}

Found find_special_triple(const Ctx& cx) {
    const BiasedGraph& o = cx.o;
    const MultiGraph& g = o.graph();
    Budget budget("special-triple search");
    for (VertexId x : g.vertices())
        for (EdgeId f : g.edges()) {
            const Edge& fe = g.edge(f);
            if (fe.is_loop() || fe.u == x || fe.v == x) continue;
            for (int dir = 0; dir < 2; ++dir) {
                VertexId y1 = dir ? fe.v : fe.u, y2 = dir ? fe.u : fe.v;
                // classes: 0 H, 1 F, 2 E, 3 G
                EdgeSet h;
                std::vector<EdgeChoice> choices;
                for (EdgeId e : g.edges()) {
                    if (e == f) continue;
                    const Edge& ed = g.edge(e);
                    if (ed.is_loop() || (ed.u != x && ed.v != x)) {
                        h.set(e);
                        continue;
                    }
                    VertexId v = g.other(e, x);
                    std::vector<int> cls;
                    if (v == y1) cls.push_back(2);
                    if (v == y2) cls.push_back(3);
                    cls.push_back(0);
                    cls.push_back(1);
                    choices.push_back({e, cls});
                }
                budget.tick();
                if (!all_balanced(cx, h)) continue;
                EdgeSet ff, ee, gg;
                VertexSet xs;
                auto admit = [&](int cls, EdgeId e, bool add) -> bool {
                    if (cls == 1) {
                        VertexId v = g.other(e, x);
                        if (add) {
                            if (xs.test(v)) return false;
                            xs.set(v);
                            ff.set(e);
                        } else {
                            xs.reset(v);
                            ff.reset(e);
                        }
                        return true;
                    }
                    EdgeSet& s = cls == 2 ? ee : gg;
                    add ? s.set(e) : s.reset(e);
                    return true;
                };
                Found out;
                auto leaf = [&](const EdgeSet& hh) {
                    if (ee.empty()) return false;
                    FamilyDescriptor d;
                    d.kind = FamilyKind::PPSpecialTriple;
                    d.graph = g;
                    d.v = {{"y1", y1}, {"x", x}, {"y2", y2}};
                    d.e = {{"f", f}};
                    d.vs = {{"X", xs}};
                    d.es = {{"H", hh}, {"F", ff}, {"E", ee}, {"G", gg}};
                    out = accept(cx, d);
                    return out.has_value();
                };
                if (assign_classes(cx, h, choices, admit, leaf, budget)) return out;
            }
        }
    return std::nullopt;
}

// Ring of six connected parts over H whose consecutive parts meet in one
// vertex; a repeated z stands for a single-vertex part.
struct Ring {
    std::vector<VertexSet> hv;  // 6 parts
    std::vector<EdgeSet> he;
    std::vector<VertexId> z;
};

bool for_each_ring(const MultiGraph& h, Budget& budget, const std::function<bool(const Ring&)>& fn) {
    std::vector<VertexId> vs = h.vertices();
    const int n = static_cast<int>(vs.size());
    std::vector<VertexId> seq;
    std::vector<char> used(n, 0);

    // Real parts between consecutive distinct z, then singletons spread over
    // the z vertices.
    auto with_parts = [&](const std::vector<VertexId>& z, const std::vector<EdgeSet>& parts) -> bool {
        const int k = static_cast<int>(z.size());
        std::vector<int> extra(k, 0);
        std::function<bool(int, int)> spread = [&](int i, int left) -> bool {
            if (i == k - 1) {
                extra[i] = left;
                Ring r;
                for (int j = 0; j < k; ++j) {
                    VertexSet pv = h.endpoints(parts[j]);
                    pv.set(z[j]);
                    pv.set(z[(j + k - 1) % k]);
                    r.hv.push_back(pv);
                    r.he.push_back(parts[j]);
                    r.z.push_back(z[j]);
                    for (int s = 0; s < extra[j]; ++s) {
                        VertexSet sv;
                        sv.set(z[j]);
                        r.hv.push_back(sv);
                        r.he.push_back(EdgeSet{});
                        r.z.push_back(z[j]);
                    }
                }
                budget.tick();
                return fn(r);
            }
            for (int c = 0; c <= left; ++c) {
                extra[i] = c;
                if (spread(i + 1, left - c)) return true;
            }
            return false;
        };
        return spread(0, 6 - k);
    };

    std::function<bool()> rec = [&]() -> bool {
        const int k = static_cast<int>(seq.size());
        if (k >= 2) {
            VertexSet zset;
            for (VertexId v : seq) zset.set(v);
            std::vector<std::pair<VertexSet, EdgeSet>> pieces;
            bool bad = false;
            for (const Bridge& b : bridges_of(h, zset)) pieces.push_back({b.attachments, b.edges});
            for (EdgeId e : h.edges()) {
                const Edge& ed = h.edge(e);
                if (zset.test(ed.u) && zset.test(ed.v)) pieces.push_back({VertexSet{ed.u, ed.v}, one(e)});
            }
            for (const auto& pc : pieces) bad = bad || pc.first.count() != 2;
            if (!bad && k == 2) {
                const int nb = static_cast<int>(pieces.size());
                for (unsigned split = 1; nb <= 16 && split + 1 < (1u << nb); ++split) {
                    EdgeSet p1, p2;
                    for (int i = 0; i < nb; ++i) ((split >> i & 1) ? p1 : p2) |= pieces[i].second;
                    if (with_parts(seq, {p1, p2})) return true;
                }
            } else if (!bad) {
                std::vector<EdgeSet> parts(k);
                bool fits = true;
                for (const auto& pc : pieces) {
                    int slot = -1;
                    for (int j = 0; j < k; ++j)
                        if (pc.first == VertexSet{seq[j], seq[(j + k - 1) % k]}) slot = j;
                    if (slot < 0) {
                        fits = false;
                        break;
                    }
                    parts[slot] |= pc.second;
                }
                for (const EdgeSet& p : parts) fits = fits && p.any();
                if (fits && with_parts(seq, parts)) return true;
            }
        }
        if (k == 6) return false;
        for (int i = 0; i < n; ++i) {
            if (used[i] || (k > 0 && vs[i] < seq[0])) continue;
            used[i] = 1;
            seq.push_back(vs[i]);
            if (rec()) return true;
            seq.pop_back();
            used[i] = 0;
        }
        return false;
    };
    return rec();
}

Found find_tricoloured(const Ctx& cx) {
    const BiasedGraph& o = cx.o;
    const MultiGraph& g = o.graph();
    Budget budget("tricoloured search");
    std::vector<VertexId> vs = g.vertices();
    const int n = static_cast<int>(vs.size());
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c) {
                const VertexId tx[3] = {vs[a], vs[b], vs[c]};
                EdgeSet h;
                std::vector<EdgeChoice> choices;
                for (EdgeId e : g.edges()) {
                    const Edge& ed = g.edge(e);
                    std::vector<int> cls;
                    for (int i = 0; i < 3; ++i)
                        if (!ed.is_loop() && (ed.u == tx[i] || ed.v == tx[i])) cls.push_back(i + 1);
                    if (cls.empty()) {
                        h.set(e);
                        continue;
                    }
                    cls.push_back(0);
                    choices.push_back({e, cls});
                }
                budget.tick();
                if (!all_balanced(cx, h)) continue;
                EdgeSet es[3];
                VertexSet ys[3];
                auto admit = [&](int cls, EdgeId e, bool add) -> bool {
                    int i = cls - 1;
                    VertexId v = g.other(e, tx[i]);
                    if (add) {
                        if (ys[i].test(v)) return false;
                        ys[i].set(v);
                        es[i].set(e);
                    } else {
                        ys[i].reset(v);
                        es[i].reset(e);
                    }
                    return true;
                };
                Found out;
                auto leaf = [&](const EdgeSet& hh) -> bool {
                    if (es[0].empty() || es[1].empty() || es[2].empty()) return false;
                    MultiGraph hg = g.spanning_with(hh);
                    if (!is_two_connected(hg)) return false;
                    return for_each_ring(hg, budget, [&](const Ring& r) -> bool {
                        for (int rot = 0; rot < 6; ++rot) {
                            auto part = [&](int i) { return (i - 1 + rot) % 6; };  // role index 1..6
                            for (const std::vector<int>& index : {std::vector<int>{1, 2, 3}, std::vector<int>{1, 3, 5}}) {
                                int perm[3] = {0, 1, 2};
                                do {
                                    bool fits = true;
                                    for (int s = 0; s < 3 && fits; ++s) {
                                        int i = index[s];
                                        int who = perm[s];
                                        fits = r.hv[part(i)].test(tx[who]) &&
                                               ys[who].subset_of(r.hv[part((i + 2) % 6 + 1)]);
                                    }
                                    if (!fits) continue;
                                    FamilyDescriptor d;
                                    d.kind = FamilyKind::Tricoloured;
                                    d.graph = g;
                                    d.index = index;
                                    for (int i = 1; i <= 6; ++i) {
                                        d.vs["H" + std::to_string(i)] = r.hv[part(i)];
                                        d.es["H" + std::to_string(i)] = r.he[part(i)];
                                        d.v["z" + std::to_string(i)] = r.z[part(i)];
                                    }
                                    for (int s = 0; s < 3; ++s) {
                                        std::string i = std::to_string(index[s]);
                                        d.v["x" + i] = tx[perm[s]];
                                        d.vs["Y" + i] = ys[perm[s]];
                                        d.es["E" + i] = es[perm[s]];
                                    }
                                    out = accept(cx, d);
                                    if (out) return true;
                                } while (std::next_permutation(perm, perm + 3));
                            }
                        }
                        return false;
                    });
                };
                if (assign_classes(cx, h, choices, admit, leaf, budget)) return out;
            }
    return std::nullopt;
}

}  // namespace

std::optional<Certificate> recognize(const BiasedGraph& o, FamilyKind k) {
    const Ctx cx(o);
    switch (k) {
        case FamilyKind::GeneralizedWheel: return find_wheel(cx);
        case FamilyKind::CrissCross: return find_criss_cross(cx);
        case FamilyKind::FatTriangle: return find_fat_triangle(cx);
        case FamilyKind::PPSpecialVertex: return find_special_vertex(cx);
        case FamilyKind::PPSpecialPair: return find_special_pair(cx);
        case FamilyKind::PPSpecialTriple: return find_special_triple(cx);
        case FamilyKind::Tricoloured: return find_tricoloured(cx);
        case FamilyKind::K5Parallel: return find_k5(cx);
        case FamilyKind::PPSigned: return find_pp_signed(cx);
    }
    return std::nullopt;
}

// ------------------------------------------------------------ base search

namespace {

void require_base_input(const BiasedGraph& o) {
    const MultiGraph& g = o.graph();
    if (g.num_vertices() < 6) throw PreconditionError("too-small", "base search needs at least 6 vertices");
    if (!is_simple(o)) throw PreconditionError("not-simple", "base search needs a simple biased graph");
    if (!is_k_connected(g, 4)) throw PreconditionError("not-4-connected", "base search needs a 4-connected graph");
    if (!is_tangled(o).tangled()) throw PreconditionError("not-tangled", "base search needs a tangled biased graph");
}

// Spanning 2-connected balanced edge sets that are maximal balanced, largest
// first; branch and bound on the edge count when `best_only`.
std::vector<EdgeSet> balanced_bases(const BiasedGraph& o, bool best_only) {
    const MultiGraph& g = o.graph();
    std::vector<EdgeId> es = g.edges();
    const int m = static_cast<int>(es.size());
    Budget budget("balanced-base search");
    std::vector<EdgeSet> found;
    int best = -1;
    EdgeSet cur;
    std::function<void(int)> rec = [&](int i) {
        budget.tick();
        if (best_only && cur.count() + (m - i) <= best) return;
        if (i == m) {
            if (!is_maximal_balanced(o, cur)) return;
            MultiGraph sub = g.spanning_with(cur);
            if (!is_two_connected(sub)) return;
            if (best_only) {
                best = cur.count();
                found.assign(1, cur);
            } else {
                found.push_back(cur);
            }
            return;
        }
        cur.set(es[i]);
        if (all_balanced(o, cur)) rec(i + 1);
        cur.reset(es[i]);
        rec(i + 1);
    };
    rec(0);
    std::stable_sort(found.begin(), found.end(), [](const EdgeSet& a, const EdgeSet& b) { return a.count() > b.count(); });
    return found;
}

BaseOutcome exceptional(const BiasedGraph& o, std::initializer_list<FamilyKind> kinds) {
    for (FamilyKind k : kinds)
        if (auto c = recognize(o, k)) return {std::nullopt, std::move(c)};
    throw PreconditionError("no-base", "no balanced base and no exceptional shape was found");
}

}  // namespace

BaseOutcome find_balanced_base(const BiasedGraph& o) {
    require_base_input(o);
    std::vector<EdgeSet> bases = balanced_bases(o, true);
    if (bases.empty()) return exceptional(o, {FamilyKind::CrissCross, FamilyKind::PPSpecialTriple});
    BalancedBase b;
    b.base = bases.front();
    b.residual = o.graph().edge_set() - b.base;
    return {b, std::nullopt};
}

BaseOutcome find_planar_balanced_base(const BiasedGraph& o) {
    require_base_input(o);
    const MultiGraph& g = o.graph();
    Budget budget("planar-base pairing");
    for (const EdgeSet& base : balanced_bases(o, false)) {
        MultiGraph bg = g.spanning_with(base);
        EdgeSet u = g.edge_set() - base;
        std::optional<BalancedBase> out;
        auto orient = [&](EdgeId e, bool flip) -> Ends {
            return flip ? Ends{g.edge(e).v, g.edge(e).u} : Ends{g.edge(e).u, g.edge(e).v};
        };
        auto prefix = [&](const std::vector<VertexId>& xs, const std::vector<VertexId>& ys) {
            return disk_planar(bg, distinct_first(concat(xs, ys)));
        };
        auto leaf = [&](const std::vector<EdgeId>& seq, const std::vector<VertexId>& xs, const std::vector<VertexId>& ys) {
            std::vector<VertexId> order = concat(xs, ys);
            if (!boundary_order_ok(order) || !disk_planar(bg, order)) return false;
            auto emb = ordered_planarity(bg, normalize_order(order));
            if (!emb) return false;
            out = BalancedBase{base, u, seq, order, std::move(emb)};
            return true;
        };
        if (pair_orders(u.to_vector(), true, true, orient, prefix, leaf, budget)) return {out, std::nullopt};
    }
    return exceptional(o, {FamilyKind::FatTriangle, FamilyKind::CrissCross, FamilyKind::PPSpecialTriple});
}

// -------------------------------------------------------------- classify

bool ClassificationReport::has(const std::string& label) const {
    for (const auto& l : labels)
        if (l.label == label) return true;
    return false;
}

namespace {

constexpr FamilyKind kOrder[] = {
    FamilyKind::K5Parallel,      FamilyKind::FatTriangle,     FamilyKind::PPSigned,
    FamilyKind::GeneralizedWheel, FamilyKind::CrissCross,     FamilyKind::PPSpecialVertex,
    FamilyKind::PPSpecialPair,   FamilyKind::PPSpecialTriple, FamilyKind::Tricoloured,
};

void trace_bases(const BiasedGraph& o, ClassificationReport& r) {
    auto pairs = blocking_pairs(o);
    r.trace.push_back("blocking pairs: " + std::to_string(pairs.size()));
    if (o.graph().num_vertices() < 6 || !is_k_connected(o.graph(), 4)) return;
    try {
        BaseOutcome b = find_planar_balanced_base(o);
        if (b.base)
            r.trace.push_back("planar balanced base with " + std::to_string(b.base->residual.count()) + " residual edges");
        else
            r.trace.push_back(std::string("base search met a ") + family_name(b.exception->descriptor.kind));
    } catch (const ResourceLimit& e) {
        r.trace.push_back(std::string("base search skipped: ") + e.what());
    } catch (const PreconditionError& e) {
        r.trace.push_back(std::string("base search: ") + e.what());
    }
}

}  // namespace

ClassificationReport classify(const BiasedGraph& o, LabelMode mode) {
    if (!is_connected(o.graph())) throw PreconditionError("disconnected", "classify needs a connected graph");
    if (!is_simple(o)) throw PreconditionError("not-simple", "classify needs a simple biased graph");
    ClassificationReport r;
    r.verdict = is_tangled(o);
    r.trace.push_back(std::string("verdict ") + kind_name(r.verdict.kind));
    if (!r.verdict.tangled()) return r;
    bool skipped = false;
    try {
        if (find_sum_step(o)) {
            SumDecomposition d = decompose(o);
            r.trace.push_back("sum decomposition with " + std::to_string(d.steps.size()) + " steps, core " +
                              core_kind_name(d.core_kind));
            r.labels.push_back({"T3", std::nullopt, std::move(d)});
            if (mode == LabelMode::First) return r;
        }
    } catch (const ResourceLimit& e) {
        skipped = true;
        r.trace.push_back(std::string("T3 skipped: ") + e.what());
    }
    for (FamilyKind k : kOrder) {
        try {
            if (auto c = recognize(o, k)) {
                r.trace.push_back(std::string("matched ") + family_name(k));
                r.labels.push_back({family_label(k), std::move(c), std::nullopt});
                if (mode == LabelMode::First) return r;
            }
        } catch (const ResourceLimit& e) {
            skipped = true;
            r.trace.push_back(std::string(family_label(k)) + " skipped: " + e.what());
        }
    }
    if (mode == LabelMode::All) trace_bases(o, r);
    if (r.labels.empty() && skipped) throw ResourceLimit("no label found within the configured caps");
    return r;
}

ClassificationReport small_classify(const BiasedGraph& o, LabelMode mode) {
    if (o.graph().num_vertices() > 5) throw PreconditionError("too-large", "small_classify takes at most 5 vertices");
    if (!is_simple(o)) throw PreconditionError("not-simple", "small_classify needs a simple biased graph");
    if (!is_tangled(o).tangled()) throw PreconditionError("not-tangled", "small_classify needs a tangled biased graph");
    return classify(o, mode);
}

std::string verify_report(const BiasedGraph& o, const ClassificationReport& r) {
    if (is_tangled(o).kind != r.verdict.kind) return "verdict does not match";
    for (const auto& l : r.labels) {
        if (l.certificate) {
            if (l.label != family_label(l.certificate->descriptor.kind)) return l.label + ": label and family differ";
            Certificate c = verify_family(o, l.certificate->descriptor);
            if (!c.ok()) return l.label + ": clause " + c.failure() + " fails";
        } else if (l.sum) {
            if (l.label != "T3" || l.sum->steps.empty()) return l.label + ": empty sum decomposition";
            std::string why = check_decomposition(o, *l.sum);
            if (!why.empty()) return l.label + ": " + why;
        } else {
            return l.label + ": no certificate";
        }
    }
    return {};
}

}  // namespace tangle
