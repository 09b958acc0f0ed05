#include "tangle/linkage.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <stdexcept>
#include <unordered_set>

#include "tangle/config.hpp"

namespace tangle {

VertexSet Path::vertex_set() const { return VertexSet::of(verts); }

namespace {

Path make_path(const MultiGraph& g, const std::vector<VertexId>& vs) {
    Path p;
    p.verts = vs;
    for (std::size_t i = 0; i + 1 < vs.size(); ++i) p.edges.push_back(g.edges_between(vs[i], vs[i + 1]).first());
    return p;
}

bool check_path(const MultiGraph& g, const Path& p, VertexId a, VertexId b, std::string* why) {
    auto fail = [&](const std::string& s) {
        if (why) *why = s;
        return false;
    };
    if (p.verts.empty()) return fail("empty path");
    if (p.verts.front() != a || p.verts.back() != b) return fail("path has wrong ends");
    if (p.edges.size() + 1 != p.verts.size()) return fail("path edge count mismatch");
    VertexSet seen;
    for (VertexId v : p.verts) {
        if (!g.has_vertex(v)) return fail("path uses a missing vertex");
        if (seen.test(v)) return fail("path repeats a vertex");
        seen.set(v);
    }
    for (std::size_t i = 0; i < p.edges.size(); ++i) {
        EdgeId e = p.edges[i];
        if (!g.has_edge(e)) return fail("path uses a missing edge");
        const Edge& ed = g.edge(e);
        bool fits = (ed.u == p.verts[i] && ed.v == p.verts[i + 1]) || (ed.v == p.verts[i] && ed.u == p.verts[i + 1]);
        if (!fits) return fail("path edge does not join consecutive vertices");
    }
    return true;
}

// Shortest a-b path whose interior lies in `allowed`; a == b gives [a].
std::optional<std::vector<VertexId>> bfs_path(const MultiGraph& g, VertexId a, VertexId b, const VertexSet& allowed,
                                              bool need_interior = false) {
    if (a == b) return std::vector<VertexId>{a};
    std::vector<VertexId> parent(g.vertex_bound(), -2);
    std::deque<VertexId> q{a};
    parent[a] = -1;
    while (!q.empty()) {
        VertexId v = q.front();
        q.pop_front();
        bool found = false;
        g.neighbors(v).for_each([&](int w) {
            if (found || parent[w] != -2) return;
            if (w == b) {
                if (need_interior && v == a) return;
                parent[w] = v;
                found = true;
                return;
            }
            if (!allowed.test(w)) return;
            parent[w] = v;
            q.push_back(w);
        });
        if (found) {
            std::vector<VertexId> out;
            for (VertexId x = b; x != -1; x = parent[x]) out.push_back(x);
            std::reverse(out.begin(), out.end());
            return out;
        }
    }
    return std::nullopt;
}

void for_each_subset(const std::vector<VertexId>& pool, int k, const std::function<void(const VertexSet&)>& f) {
    std::vector<int> idx(k);
    std::function<void(int, int)> rec = [&](int at, int from) {
        if (at == k) {
            VertexSet s;
            for (int i : idx) s.set(pool[i]);
            f(s);
            return;
        }
        for (int i = from; i < static_cast<int>(pool.size()); ++i) {
            idx[at] = i;
            rec(at + 1, i + 1);
        }
    };
    rec(0, 0);
}

struct Budget {
    std::size_t left = limits().search_cap;
    const char* what;
    explicit Budget(const char* w) : what(w) {}
    void tick() {
        if (left-- == 0) throw ResourceLimit(std::string(what) + " exceeded the configured cap");
    }
};

std::optional<ThreePlanarWitness> checked(const MultiGraph& g, const std::vector<VertexSet>& sets,
                                          const std::vector<VertexId>& order, Embedding emb, int vbound) {
    emb.rotation.resize(vbound);
    ThreePlanarWitness w{sets, std::move(emb), order};
    if (!verify_witness(g, w, order).ok) return std::nullopt;
    return w;
}

// Stars replace the triangles that exist only as clique edges; after the
// ordered embedding each star turns back into a facial triangle (Y-Delta)
// and parallel copies are merged.
std::optional<ThreePlanarWitness> embed_by_delta(const MultiGraph& g, const std::vector<VertexSet>& sets,
                                                 const std::vector<VertexId>& ord, const MultiGraph& proj,
                                                 const std::vector<std::vector<VertexId>>& triples,
                                                 const std::vector<VertexId>& order, bool* embeddable) {
    EdgeSet needed;  // clique edges required by 2-sets
    EdgeSet tri_new;
    std::vector<EdgeSet> cl;
    projection(g, sets, &cl);
    for (std::size_t i = 0; i < sets.size(); ++i) {
        EdgeSet fresh;
        cl[i].for_each([&](int e) {
            if (e >= g.edge_bound()) fresh.set(e);
        });
        if (cl[i].count() == 3)
            tri_new |= fresh;
        else
            needed |= fresh;
    }
    MultiGraph star = proj.without_edges(tri_new - needed);
    std::vector<VertexId> centre;
    for (const auto& t : triples) {
        VertexId s = star.add_vertex();
        centre.push_back(s);
        for (VertexId a : t) star.add_edge(s, a);
    }
    auto opw = ordered_planarity(star, ord);
    if (!opw) return std::nullopt;
    *embeddable = true;
    Embedding emb = opw->embedding;
    std::map<EdgeId, std::pair<VertexId, VertexId>> tmp;
    EdgeId next = star.edge_bound();
    for (VertexId s : centre) {
        const auto rs = emb.rotation[s];
        std::vector<VertexId> around;
        for (EdgeId e : rs) around.push_back(star.other(e, s));
        const int k = static_cast<int>(around.size());
        std::map<std::pair<VertexId, VertexId>, EdgeId> t;
        for (int i = 0; i < k; ++i) {
            auto key = std::minmax(around[i], around[(i + 1) % k]);
            t[key] = next;
            tmp[next++] = key;
        }
        for (int i = 0; i < k; ++i) {
            VertexId a = around[i], nx = around[(i + 1) % k], pv = around[(i + k - 1) % k];
            auto& r = emb.rotation[a];
            auto it = std::find(r.begin(), r.end(), rs[i]);
            *it = t.at(std::minmax(a, nx));
            r.insert(it + 1, t.at(std::minmax(a, pv)));
        }
        emb.rotation[s].clear();
    }
    // copies per vertex pair: proj edge still present in star, plus tmp edges
    std::map<std::pair<VertexId, VertexId>, std::vector<EdgeId>> copies;
    std::map<std::pair<VertexId, VertexId>, EdgeId> proj_id;
    for (EdgeId e : proj.edges()) proj_id[std::minmax(proj.edge(e).u, proj.edge(e).v)] = e;
    for (auto& [e, key] : tmp) {
        auto& c = copies[key];
        if (c.empty() && star.has_edge(proj_id.at(key))) c.push_back(proj_id.at(key));
        c.push_back(e);
    }
    std::vector<std::pair<VertexId, VertexId>> keys;
    for (auto& [key, c] : copies) keys.push_back(key);
    std::map<std::pair<VertexId, VertexId>, std::size_t> pick;
    std::size_t tries = 0;
    std::optional<ThreePlanarWitness> found;
    std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
        if (i == keys.size()) {
            if (++tries > 256) return true;
            Embedding out = emb;
            std::map<EdgeId, EdgeId> rename;
            for (auto& [key, c] : copies)
                for (std::size_t j = 0; j < c.size(); ++j) rename[c[j]] = j == pick[key] ? proj_id.at(key) : -1;
            for (auto& r : out.rotation) {
                std::vector<EdgeId> nr;
                for (EdgeId e : r) {
                    auto it = rename.find(e);
                    if (it == rename.end())
                        nr.push_back(e);
                    else if (it->second >= 0)
                        nr.push_back(it->second);
                }
                r = std::move(nr);
            }
            found = checked(g, sets, order, std::move(out), proj.vertex_bound());
            return found.has_value();
        }
        for (std::size_t j = 0; j < copies[keys[i]].size(); ++j) {
            pick[keys[i]] = j;
            if (rec(i + 1)) return true;
        }
        return false;
    };
    rec(0);
    return found;
}

// Stars sit inside the triangles of the projection; deleting them leaves
// the triangles facial when the embedding cooperates.
std::optional<ThreePlanarWitness> embed_with_stars(const MultiGraph& g, const std::vector<VertexSet>& sets,
                                                   const std::vector<VertexId>& ord, const MultiGraph& proj,
                                                   const std::vector<std::vector<VertexId>>& triples,
                                                   const std::vector<VertexId>& order) {
    MultiGraph star = proj;
    EdgeId first_star = star.edge_bound();
    for (const auto& t : triples) {
        VertexId s = star.add_vertex();
        for (VertexId a : t) star.add_edge(s, a);
    }
    auto opw = ordered_planarity(star, ord);
    if (!opw) return std::nullopt;
    Embedding emb = opw->embedding;
    for (auto& r : emb.rotation) r.erase(std::remove_if(r.begin(), r.end(), [&](EdgeId e) { return e >= first_star; }), r.end());
    return checked(g, sets, order, std::move(emb), proj.vertex_bound());
}

// Every rotation system of the projection, when there are few.
std::optional<ThreePlanarWitness> embed_exhaustively(const MultiGraph& g, const std::vector<VertexSet>& sets,
                                                     const MultiGraph& proj, const std::vector<VertexId>& order) {
    double count = 1;
    std::vector<VertexId> vs = proj.vertices();
    Embedding emb;
    emb.rotation.assign(proj.vertex_bound(), {});
    for (VertexId v : vs) {
        for (EdgeId e : proj.incident(v))
            if (!proj.edge(e).is_loop()) emb.rotation[v].push_back(e);
        for (std::size_t k = 2; k < emb.rotation[v].size(); ++k) count *= static_cast<double>(k);
    }
    if (count > 20000) return std::nullopt;
    std::optional<ThreePlanarWitness> found;
    std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
        if (i == vs.size()) {
            found = checked(g, sets, order, emb, proj.vertex_bound());
            return found.has_value();
        }
        auto& r = emb.rotation[vs[i]];
        if (r.size() <= 2) return rec(i + 1);
        std::sort(r.begin() + 1, r.end());
        do {
            if (rec(i + 1)) return true;
        } while (std::next_permutation(r.begin() + 1, r.end()));
        return false;
    };
    rec(0);
    return found;
}

std::optional<ThreePlanarWitness> witness_for_sets(const MultiGraph& g, const std::vector<VertexSet>& sets,
                                                   const std::vector<VertexId>& order, bool* split) {
    MultiGraph proj = projection(g, sets);
    auto ord = normalize_order(order);
    if (!ord.empty()) {
        for (const VertexSet& c : components(proj))
            if (c.test(ord[0]))
                for (VertexId v : ord)
                    if (!c.test(v)) {
                        if (split) *split = true;
                        return std::nullopt;
                    }
    }
    std::vector<std::vector<VertexId>> triples;
    for (const VertexSet& s : sets) {
        auto nb = g.neighbors(s).to_vector();
        if (nb.size() == 3 && std::find(triples.begin(), triples.end(), nb) == triples.end()) triples.push_back(nb);
    }
    if (triples.empty()) {
        auto opw = ordered_planarity(proj, ord);
        if (!opw) return std::nullopt;
        auto w = checked(g, sets, order, opw->embedding, proj.vertex_bound());
        if (!w) throw std::logic_error("ordered embedding of the projection failed verification");
        return w;
    }
    bool embeddable = false;
    if (auto w = embed_by_delta(g, sets, ord, proj, triples, order, &embeddable)) return w;
    // a valid projection embedding would have made the star graph embeddable
    if (!embeddable && ord.size() >= 4) return std::nullopt;
    if (auto w = embed_with_stars(g, sets, ord, proj, triples, order)) return w;
    return embed_exhaustively(g, sets, proj, order);
}

bool compatible(const MultiGraph& g, const VertexSet& a, const VertexSet& b) {
    return !a.intersects(b) && !g.neighbors(a).intersects(b);
}

void require_distinct(const MultiGraph& g, const std::vector<VertexId>& vs) {
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (!g.has_vertex(vs[i])) throw PreconditionError("unknown-vertex", "vertex not in the graph");
        for (std::size_t j = i + 1; j < vs.size(); ++j)
            if (vs[i] == vs[j]) throw PreconditionError("not-distinct", "vertices must be distinct");
    }
}

int set_index_of(const std::vector<VertexSet>& sets, VertexId v) {
    for (std::size_t i = 0; i < sets.size(); ++i)
        if (sets[i].test(v)) return static_cast<int>(i);
    return -1;
}

}  // namespace

bool verify_linkage(const MultiGraph& g, const Linkage& l, VertexId s1, VertexId t1, VertexId s2, VertexId t2,
                    std::string* why) {
    if (!check_path(g, l.p1, s1, t1, why) || !check_path(g, l.p2, s2, t2, why)) return false;
    if (l.p1.vertex_set().intersects(l.p2.vertex_set())) {
        if (why) *why = "paths share a vertex";
        return false;
    }
    return true;
}

MultiGraph projection(const MultiGraph& g, const std::vector<VertexSet>& sets, std::vector<EdgeSet>* clique_edges) {
    VertexSet all;
    for (const VertexSet& s : sets) all |= s;
    MultiGraph rest = g.without_vertices(all);
    EdgeSet drop;
    std::map<std::pair<VertexId, VertexId>, EdgeId> edge_of;
    for (EdgeId e : rest.edges()) {
        const Edge& ed = rest.edge(e);
        if (ed.is_loop() || !edge_of.emplace(std::minmax(ed.u, ed.v), e).second) drop.set(e);
    }
    MultiGraph p = rest.without_edges(drop);
    EdgeId next = g.edge_bound();
    if (clique_edges) clique_edges->assign(sets.size(), EdgeSet{});
    for (std::size_t i = 0; i < sets.size(); ++i) {
        std::vector<VertexId> nb = g.neighbors(sets[i]).to_vector();
        for (VertexId v : nb)
            if (all.test(v)) throw PreconditionError("adjacent-sets", "a set neighbours another set");
        for (std::size_t a = 0; a < nb.size(); ++a)
            for (std::size_t b = a + 1; b < nb.size(); ++b) {
                auto key = std::make_pair(nb[a], nb[b]);
                auto it = edge_of.find(key);
                if (it == edge_of.end()) {
                    p.add_edge_with_id(next, nb[a], nb[b]);
                    it = edge_of.emplace(key, next++).first;
                }
                if (clique_edges) (*clique_edges)[i].set(it->second);
            }
    }
    return p;
}

WitnessCheck verify_witness(const MultiGraph& g, const ThreePlanarWitness& w, const std::vector<VertexId>& order) {
    WitnessCheck out;
    auto fail = [&](const std::string& s) {
        out.ok = false;
        out.defect = s;
        return out;
    };
    VertexSet all;
    for (const VertexSet& s : w.sets) {
        if (s.empty()) return fail("empty set");
        if (!s.subset_of(g.vertex_set())) return fail("set names a missing vertex");
        if (all.intersects(s)) return fail("sets overlap");
        all |= s;
    }
    for (std::size_t i = 0; i < w.sets.size(); ++i) {
        VertexSet nb = g.neighbors(w.sets[i]);
        if (nb.intersects(all)) return fail("neighbourhood of a set meets a set");
        if (nb.count() > 3) return fail("set has more than three neighbours");
    }
    for (VertexId v : order) {
        if (!g.has_vertex(v)) return fail("order names a missing vertex");
        if (all.test(v)) return fail("order vertex lies in a set");
    }
    std::vector<EdgeSet> cl;
    MultiGraph proj = projection(g, w.sets, &cl);
    std::string why;
    if (!is_planar_embedding(proj, w.embedding, &why)) return fail("projection embedding: " + why);
    auto faces = trace_faces(proj, w.embedding);
    std::vector<EdgeSet> face_sets;
    for (const Face& f : faces) face_sets.push_back(EdgeSet::of(f.edges));
    for (std::size_t i = 0; i < w.sets.size(); ++i) {
        if (cl[i].count() != 3) continue;
        bool facial = false;
        for (std::size_t f = 0; f < faces.size() && !facial; ++f)
            facial = faces[f].edges.size() == 3 && face_sets[f] == cl[i];
        if (!facial) return fail("neighbourhood triangle is not facial");
    }
    auto ord = normalize_order(order);
    if (ord.size() <= 1) return out;
    for (const Face& f : faces)
        if (walk_contains_order(f.walk, ord)) return out;
    return fail("order does not occur on a face");
}

std::optional<ThreePlanarWitness> find_witness(const MultiGraph& g, const std::vector<VertexId>& order) {
    VertexSet ord;
    for (VertexId v : order) {
        if (!g.has_vertex(v)) throw PreconditionError("unknown-vertex", "order names a vertex not in the graph");
        ord.set(v);
    }
    std::vector<VertexSet> cand;
    std::unordered_set<VertexSet> seen;
    std::vector<VertexId> vs = g.vertices();
    for (int k = 0; k <= 3 && k <= static_cast<int>(vs.size()); ++k)
        for_each_subset(vs, k, [&](const VertexSet& s) {
            VertexSet all;
            for (const VertexSet& c : components(g.without_vertices(s))) {
                if (c.intersects(ord)) continue;
                all |= c;
                if (seen.insert(c).second) cand.push_back(c);
            }
            // sets sharing a neighbourhood merge into one
            if (all.any() && seen.insert(all).second) cand.push_back(all);
        });
    std::stable_sort(cand.begin(), cand.end(), [](const VertexSet& a, const VertexSet& b) { return a.count() > b.count(); });
    const int n = static_cast<int>(cand.size());
    std::vector<std::vector<char>> ok(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) ok[i][j] = i != j && compatible(g, cand[i], cand[j]);
    // j > i with a conflict against i
    std::vector<char> blockable_later(n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (!ok[i][j]) blockable_later[i] = 1;

    Budget budget("witness search");
    bool split = false;
    std::optional<ThreePlanarWitness> found;
    std::vector<int> chosen;
    auto test = [&]() {
        budget.tick();
        std::vector<VertexSet> sets;
        for (int i : chosen) sets.push_back(cand[i]);
        found = witness_for_sets(g, sets, order, &split);
        return found.has_value();
    };
    auto fits = [&](int i) {
        for (int j : chosen)
            if (!ok[i][j]) return false;
        return true;
    };
    // Adding a compatible set only takes a minor of the projection, so
    // maximal families are tried first.
    std::function<bool(int)> maximal = [&](int i) -> bool {
        if (i == n) {
            for (int j = 0; j < n; ++j)
                if (std::find(chosen.begin(), chosen.end(), j) == chosen.end() && fits(j)) return false;
            return test();
        }
        if (fits(i)) {
            chosen.push_back(i);
            if (maximal(i + 1)) return true;
            chosen.pop_back();
            if (!blockable_later[i]) return false;
        }
        return maximal(i + 1);
    };
    if (maximal(0)) return found;
    if (!split) return std::nullopt;
    // Deleting sets may disconnect the order; fall back to every family.
    std::function<bool(int)> every = [&](int i) -> bool {
        if (i == n) return test();
        if (fits(i)) {
            chosen.push_back(i);
            if (every(i + 1)) return true;
            chosen.pop_back();
        }
        return every(i + 1);
    };
    chosen.clear();
    if (every(0)) return found;
    return std::nullopt;
}

std::optional<Linkage> search_linkage(const MultiGraph& g, VertexId s1, VertexId t1, VertexId s2, VertexId t2) {
    require_distinct(g, {s1, t1, s2, t2});
    std::vector<VertexId> path{s1};
    VertexSet on;
    on.set(s1);
    VertexSet forbid;
    forbid.set(s2);
    forbid.set(t2);
    std::optional<Linkage> out;
    Budget budget("linkage search");
    std::function<bool(VertexId)> dfs = [&](VertexId v) -> bool {
        if (v == t1) {
            budget.tick();
            VertexSet allowed = g.vertex_set() - on;
            auto p2 = bfs_path(g, s2, t2, allowed);
            if (!p2) return false;
            out = Linkage{make_path(g, path), make_path(g, *p2)};
            return true;
        }
        bool done = false;
        (g.neighbors(v) - on - forbid).for_each([&](int w) {
            if (done) return;
            on.set(w);
            path.push_back(w);
            done = dfs(w);
            path.pop_back();
            on.reset(w);
        });
        return done;
    };
    dfs(s1);
    return out;
}

LinkageOutcome find_linkage(const MultiGraph& g, VertexId s1, VertexId t1, VertexId s2, VertexId t2) {
    if (auto l = search_linkage(g, s1, t1, s2, t2)) return *l;
    auto w = find_witness(g, {s1, s2, t1, t2});
    if (!w) throw std::logic_error("no linkage and no witness found");
    return *w;
}

namespace {

// Tries to split sets[i] into two or more disjoint nonempty parts, any
// vertices left over returning to the projection.
bool refine(const MultiGraph& g, const ThreePlanarWitness& w, std::size_t i, ThreePlanarWitness* out) {
    std::vector<VertexId> a = w.sets[i].to_vector();
    const int m = static_cast<int>(a.size());
    if (m < 2) return false;
    std::vector<VertexSet> others;
    VertexSet other_all;
    for (std::size_t j = 0; j < w.sets.size(); ++j)
        if (j != i) {
            others.push_back(w.sets[j]);
            other_all |= w.sets[j];
        }
    std::vector<int> label(m, 0);
    Budget budget("refinement search");
    std::function<bool(int, int)> rec = [&](int at, int used) -> bool {
        if (at == m) {
            if (used < 2) return false;
            std::vector<VertexSet> parts(used);
            for (int p = 0; p < m; ++p)
                if (label[p] > 0) parts[label[p] - 1].set(a[p]);
            VertexSet all_parts;
            for (auto& p : parts) all_parts |= p;
            for (auto& p : parts) {
                VertexSet nb = g.neighbors(p);
                if (nb.count() > 3 || nb.intersects(all_parts) || nb.intersects(other_all)) return false;
            }
            budget.tick();
            std::vector<VertexSet> sets = others;
            sets.insert(sets.end(), parts.begin(), parts.end());
            auto nw = witness_for_sets(g, sets, w.order, nullptr);
            if (!nw) return false;
            if (out) *out = *nw;
            return true;
        }
        for (int l = 0; l <= used + 1; ++l) {
            label[at] = l;
            if (rec(at + 1, std::max(used, l))) return true;
        }
        return false;
    };
    return rec(0, 0);
}

}  // namespace

bool is_refinable(const MultiGraph& g, const ThreePlanarWitness& w, std::size_t i) { return refine(g, w, i, nullptr); }

ThreePlanarWitness minimalize(const MultiGraph& g, const ThreePlanarWitness& w) {
    WitnessCheck chk = verify_witness(g, w, w.order);
    if (!chk.ok) throw PreconditionError("bad-witness", "minimalize: " + chk.defect);
    ThreePlanarWitness cur = w;
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < cur.sets.size() && !changed; ++i) {
            ThreePlanarWitness next;
            if (refine(g, cur, i, &next)) {
                cur = std::move(next);
                changed = true;
            }
        }
    }
    return cur;
}

Cycle cycle_through(const MultiGraph& g, const ThreePlanarWitness& w, const std::vector<VertexId>& order) {
    if (!is_two_connected(g)) throw PreconditionError("not-2-connected", "cycle_through requires a 2-connected graph");
    WitnessCheck chk = verify_witness(g, w, order);
    if (!chk.ok) throw PreconditionError("bad-witness", "cycle_through: " + chk.defect);
    auto ord = normalize_order(order);
    std::vector<EdgeSet> cl;
    MultiGraph proj = projection(g, w.sets, &cl);
    auto faces = trace_faces(proj, w.embedding);
    const Face* face = nullptr;
    for (const Face& f : faces)
        if (walk_contains_order(f.walk, ord)) {
            face = &f;
            break;
        }
    if (!face && ord.size() <= 1 && !faces.empty()) {
        for (const Face& f : faces)
            if (ord.empty() || std::find(f.walk.begin(), f.walk.end(), ord[0]) != f.walk.end()) {
                face = &f;
                break;
            }
    }
    if (!face) throw PreconditionError("bad-witness", "no face carries the order");
    {
        std::vector<VertexId> sorted = face->walk;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw PreconditionError("not-2-connected", "face boundary is not a cycle");
    }
    EdgeSet edges;
    // projected face edges, each with the sets whose clique holds it
    struct Need {
        VertexId a, b;
        std::vector<int> owners;
    };
    std::vector<Need> need;
    for (std::size_t i = 0; i < face->edges.size(); ++i) {
        EdgeId e = face->edges[i];
        if (e < g.edge_bound() && g.has_edge(e)) {
            edges.set(e);
            continue;
        }
        Need n{face->walk[i], face->walk[(i + 1) % face->walk.size()], {}};
        for (std::size_t s = 0; s < cl.size(); ++s)
            if (cl[s].test(e)) n.owners.push_back(static_cast<int>(s));
        need.push_back(std::move(n));
    }
    Budget budget("cycle substitution");
    VertexSet used;
    std::vector<std::vector<VertexId>> chosen(need.size());
    std::function<bool(std::size_t)> rec = [&](std::size_t k) -> bool {
        if (k == need.size()) return true;
        const VertexId a = need[k].a, b = need[k].b;
        for (int s : need[k].owners) {
            const VertexSet& inside = w.sets[s];
            bool done = false;
            std::vector<VertexId> path{a};
            std::function<void(VertexId)> dfs = [&](VertexId v) {
                g.neighbors(v).for_each([&](int x) {
                    if (done) return;
                    if (x == b && path.size() >= 2) {
                        budget.tick();
                        path.push_back(b);
                        chosen[k] = path;
                        if (rec(k + 1)) done = true;
                        path.pop_back();
                        return;
                    }
                    if (!inside.test(x) || used.test(x)) return;
                    used.set(x);
                    path.push_back(x);
                    dfs(x);
                    path.pop_back();
                    used.reset(x);
                });
            };
            dfs(a);
            if (done) return true;
        }
        return false;
    };
    if (!rec(0)) throw PreconditionError("not-minimal", "no path through a set for a projected face edge");
    for (auto& p : chosen) {
        Path pp = make_path(g, p);
        for (EdgeId e : pp.edges) edges.set(e);
    }
    auto c = make_cycle(g, edges);
    if (!c) throw std::logic_error("substituted face boundary is not a cycle");
    if (!walk_contains_order(c->vseq, ord)) throw std::logic_error("substituted cycle lost the order");
    return *c;
}

Linkage lift_linkage(const MultiGraph& g, const ThreePlanarWitness& w, const Linkage& projected, VertexId u1,
                     VertexId u2) {
    std::vector<EdgeSet> cl;
    MultiGraph proj = projection(g, w.sets, &cl);
    if (projected.p1.verts.empty() || projected.p2.verts.empty())
        throw PreconditionError("bad-linkage", "projected linkage has an empty path");
    const VertexId v1 = projected.p1.verts.front(), s1 = projected.p1.verts.back();
    const VertexId v2 = projected.p2.verts.front(), s2 = projected.p2.verts.back();
    std::string why;
    if (!verify_linkage(proj, projected, v1, s1, v2, s2, &why))
        throw PreconditionError("bad-linkage", "projected linkage: " + why);
    require_distinct(g, {v1, v2, u1, u2});
    int a1 = set_index_of(w.sets, u1), a2 = set_index_of(w.sets, u2);
    auto check_end = [&](VertexId u, VertexId star, int a) {
        if (a < 0) {
            if (u != star) throw PreconditionError("bad-endpoint", "projected endpoint differs from a projection vertex");
        } else if (!g.neighbors(w.sets[a]).test(star)) {
            throw PreconditionError("bad-endpoint", "projected endpoint is not a neighbour of the set");
        }
    };
    check_end(u1, s1, a1);
    check_end(u2, s2, a2);
    if (a1 >= 0 && a1 == a2) throw PreconditionError("same-set", "both endpoints lie in the same set");

    VertexSet all_sets;
    for (const VertexSet& s : w.sets) all_sets |= s;
    const VertexSet z = projected.p1.vertex_set() | projected.p2.vertex_set();
    auto owner = [&](EdgeId e) {
        if (e < g.edge_bound()) return -1;
        for (std::size_t s = 0; s < cl.size(); ++s)
            if (cl[s].test(e)) return static_cast<int>(s);
        return -1;
    };
    auto good = [&](const Linkage& l) {
        return verify_linkage(g, l, v1, u1, v2, u2) &&
               ((l.p1.vertex_set() | l.p2.vertex_set()) - all_sets) == z;
    };

    // Substitution: endpoint extensions first, then projected edges.
    {
        VertexSet used = z;
        bool failed = false;
        std::vector<VertexId> tail1, tail2;
        auto extend = [&](VertexId star, VertexId u, int a, std::vector<VertexId>& tail) {
            if (a < 0 || failed) return;
            if (used.test(u)) {
                failed = true;
                return;
            }
            auto p = bfs_path(g, star, u, w.sets[a] - used);
            if (!p) {
                failed = true;
                return;
            }
            tail.assign(p->begin() + 1, p->end());
            for (VertexId x : tail) used.set(x);
        };
        extend(s1, u1, a1, tail1);
        extend(s2, u2, a2, tail2);
        auto route = [&](const Path& p, const std::vector<VertexId>& tail) {
            std::vector<VertexId> out{p.verts.front()};
            for (std::size_t i = 0; i < p.edges.size() && !failed; ++i) {
                int s = owner(p.edges[i]);
                if (s >= 0) {
                    auto q = bfs_path(g, p.verts[i], p.verts[i + 1], w.sets[s] - used, true);
                    if (!q) {
                        failed = true;
                        break;
                    }
                    for (std::size_t k = 1; k + 1 < q->size(); ++k) used.set((*q)[k]);
                    out.insert(out.end(), q->begin() + 1, q->end());
                } else {
                    out.push_back(p.verts[i + 1]);
                }
            }
            out.insert(out.end(), tail.begin(), tail.end());
            return out;
        };
        auto r1 = route(projected.p1, tail1);
        auto r2 = route(projected.p2, tail2);
        if (!failed) {
            Linkage l{make_path(g, r1), make_path(g, r2)};
            if (good(l)) return l;
        }
    }

    // Exhaustive fallback inside z and the sets.
    const VertexSet allowed = z | all_sets;
    Budget budget("linkage lifting");
    std::optional<Linkage> out;
    std::vector<VertexId> p1{v1};
    VertexSet on1;
    on1.set(v1);
    std::function<bool(VertexId)> first = [&](VertexId v) -> bool {
        if (v == u1) {
            std::vector<VertexId> p2{v2};
            VertexSet on2 = on1;
            if (on2.test(v2)) return false;
            on2.set(v2);
            std::function<bool(VertexId)> second = [&](VertexId x) -> bool {
                if (x == u2) {
                    budget.tick();
                    Linkage l{make_path(g, p1), make_path(g, p2)};
                    if (!good(l)) return false;
                    out = l;
                    return true;
                }
                bool done = false;
                (g.neighbors(x) - on2).for_each([&](int y) {
                    if (done || !allowed.test(y)) return;
                    on2.set(y);
                    p2.push_back(y);
                    done = second(y);
                    p2.pop_back();
                    on2.reset(y);
                });
                return done;
            };
            return second(v2);
        }
        bool done = false;
        (g.neighbors(v) - on1).for_each([&](int y) {
            if (done || !allowed.test(y) || y == v2 || y == u2) return;
            on1.set(y);
            p1.push_back(y);
            done = first(y);
            p1.pop_back();
            on1.reset(y);
        });
        return done;
    };
    if (first(v1)) return *out;
    throw PreconditionError("no-lift", "projected linkage does not lift");
}

std::variant<HubCut, LinkageFound> hub_cut_analysis(const MultiGraph& g, VertexId x, VertexId y,
                                                    const std::vector<VertexId>& vs) {
    if (vs.size() < 3) throw PreconditionError("too-few", "hub_cut_analysis needs at least three vertices");
    std::vector<VertexId> all{x, y};
    all.insert(all.end(), vs.begin(), vs.end());
    require_distinct(g, all);
    if (!is_two_connected(g)) throw PreconditionError("not-2-connected", "hub_cut_analysis requires a 2-connected graph");
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j)
            if (auto l = search_linkage(g, x, y, vs[i], vs[j])) return LinkageFound{x, y, vs[i], vs[j], *l};
    VertexSet xy;
    xy.set(x);
    xy.set(y);
    HubCut out;
    out.x = x;
    out.y = y;
    out.bridges = bridges_of(g, xy);
    if (out.bridges.size() < 2) throw std::logic_error("hub pair is not a vertex cut");
    std::vector<char> taken(out.bridges.size(), 0);
    for (VertexId v : vs) {
        int b = -1;
        for (std::size_t i = 0; i < out.bridges.size(); ++i)
            if (out.bridges[i].interior.test(v)) b = static_cast<int>(i);
        if (b < 0 || taken[b]) throw std::logic_error("two listed vertices share a hub bridge");
        taken[b] = 1;
        out.bridge_of.push_back(b);
    }
    return out;
}

std::variant<TwoSeparation, ThreePlanarWitness, LinkageFound> planar_or_2sep(const MultiGraph& g, VertexId v1,
                                                                            VertexId v2, const VertexSet& x,
                                                                            const VertexSet& y) {
    if (x.empty() || y.empty()) throw PreconditionError("empty-set", "X and Y must be nonempty");
    if (x.intersects(y)) throw PreconditionError("overlap", "X and Y must be disjoint");
    if (x.test(v1) || x.test(v2) || y.test(v1) || y.test(v2))
        throw PreconditionError("overlap", "X and Y must avoid v1 and v2");
    if (!(x | y).subset_of(g.vertex_set())) throw PreconditionError("unknown-vertex", "vertex not in the graph");
    require_distinct(g, {v1, v2});
    if (!is_two_connected(g)) throw PreconditionError("not-2-connected", "planar_or_2sep requires a 2-connected graph");
    std::vector<VertexId> xs = x.to_vector(), ys = y.to_vector();
    for (VertexId a : xs)
        for (VertexId b : ys)
            if (auto l = search_linkage(g, v1, v2, a, b)) return LinkageFound{v1, v2, a, b, *l};

    Budget budget("order search");
    do {
        do {
            budget.tick();
            std::vector<VertexId> order{v1};
            order.insert(order.end(), xs.begin(), xs.end());
            order.push_back(v2);
            order.insert(order.end(), ys.begin(), ys.end());
            if (auto w = find_witness(g, order)) return *w;
        } while (std::next_permutation(ys.begin(), ys.end()));
    } while (std::next_permutation(xs.begin(), xs.end()));

    std::vector<VertexId> vsv = g.vertices();
    for (int strict = 1; strict >= 0; --strict) {
        std::optional<TwoSeparation> found;
        for_each_subset(vsv, 2, [&](const VertexSet& cut) {
            if (found) return;
            auto br = bridges_of(g, cut);
            if (br.size() < 2) return;
            const int nb = static_cast<int>(br.size());
            for (unsigned mask = 1; mask + 1 < (1u << nb) && !found; ++mask) {
                TwoSeparation s;
                s.a = cut.first();
                s.b = cut.next(s.a);
                s.verts1 = cut;
                s.verts2 = cut;
                s.side1 = g.edges_within(cut);
                for (int i = 0; i < nb; ++i) {
                    if (mask >> i & 1) {
                        s.side2 |= br[i].edges;
                        s.verts2 |= br[i].interior;
                    } else {
                        s.side1 |= br[i].edges;
                        s.verts1 |= br[i].interior;
                    }
                }
                if (!s.verts1.test(v1) || !s.verts1.test(v2)) continue;
                VertexSet only2 = strict ? s.verts2 - s.verts1 : s.verts2;
                bool a = x.subset_of(s.verts1) && only2.intersects(y);
                bool b = y.subset_of(s.verts1) && only2.intersects(x);
                if (a || b) found = s;
            }
        });
        if (found) return *found;
    }
    throw std::logic_error("neither a witness nor a 2-separation was found");
}

std::variant<PairOrder, LinkageFound> multi_pair_order(const MultiGraph& g,
                                                      const std::vector<std::pair<VertexId, VertexId>>& pairs) {
    const int n = static_cast<int>(pairs.size());
    if (n < 2) throw PreconditionError("too-few", "multi_pair_order needs at least two pairs");
    std::vector<VertexId> all;
    for (auto& p : pairs) {
        all.push_back(p.first);
        all.push_back(p.second);
    }
    require_distinct(g, all);
    if (!is_two_connected(g)) throw PreconditionError("not-2-connected", "multi_pair_order requires a 2-connected graph");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (auto l = search_linkage(g, pairs[i].first, pairs[i].second, pairs[j].first, pairs[j].second))
                return LinkageFound{pairs[i].first, pairs[i].second, pairs[j].first, pairs[j].second, *l};
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    Budget budget("pair order search");
    do {
        for (unsigned sw = 0; sw < (1u << n); ++sw) {
            budget.tick();
            PairOrder po;
            po.permutation = perm;
            po.swapped.assign(n, false);
            std::vector<VertexId> xs, ys;
            for (int i = 0; i < n; ++i) {
                auto [a, b] = pairs[perm[i]];
                if (sw >> i & 1) {
                    std::swap(a, b);
                    po.swapped[i] = true;
                }
                xs.push_back(a);
                ys.push_back(b);
            }
            po.order = xs;
            po.order.insert(po.order.end(), ys.begin(), ys.end());
            if (auto w = find_witness(g, po.order)) {
                po.witness = *w;
                return po;
            }
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    throw std::logic_error("no pair order admits a witness");
}

}  // namespace tangle
