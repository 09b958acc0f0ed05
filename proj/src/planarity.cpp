// Planar embeddings, face tracing and planarity with a prescribed face order.
#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boyer_myrvold_planar_test.hpp>

#include "tangle/config.hpp"
#include "tangle/graph.hpp"

namespace tangle {

namespace {

using BoostGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS,
                                         boost::property<boost::vertex_index_t, int>,
                                         boost::property<boost::edge_index_t, int>>;

// Rotation of a simple graph on vertices 0..n-1, as edge indices per vertex.
std::optional<std::vector<std::vector<int>>> boost_rotation(int n, const std::vector<std::pair<int, int>>& es) {
    BoostGraph bg(n);
    for (int i = 0; i < static_cast<int>(es.size()); ++i) boost::add_edge(es[i].first, es[i].second, i, bg);
    using ED = boost::graph_traits<BoostGraph>::edge_descriptor;
    std::vector<std::vector<ED>> emb(n);
    bool ok = boost::boyer_myrvold_planarity_test(boost::boyer_myrvold_params::graph = bg,
                                                  boost::boyer_myrvold_params::embedding = &emb[0]);
    if (!ok) return std::nullopt;
    auto eidx = boost::get(boost::edge_index, bg);
    std::vector<std::vector<int>> rot(n);
    for (int v = 0; v < n; ++v)
        for (const ED& d : emb[v]) rot[v].push_back(boost::get(eidx, d));
    return rot;
}

struct SimpleView {
    std::vector<VertexId> verts;            // compact index -> vertex id
    std::vector<int> index;                 // vertex id -> compact index
    std::vector<std::pair<int, int>> pairs; // compact endpoints
    std::vector<std::vector<EdgeId>> group; // parallel class per pair, ascending
};

SimpleView simple_view(const MultiGraph& g) {
    SimpleView s;
    s.verts = g.vertices();
    s.index.assign(g.vertex_bound(), -1);
    for (int i = 0; i < static_cast<int>(s.verts.size()); ++i) s.index[s.verts[i]] = i;
    std::map<std::pair<int, int>, int> pos;
    for (EdgeId e : g.edges()) {
        const Edge& ed = g.edge(e);
        if (ed.is_loop()) continue;
        int a = s.index[ed.u], b = s.index[ed.v];
        auto key = std::minmax(a, b);
        auto it = pos.find(key);
        if (it == pos.end()) {
            pos[key] = static_cast<int>(s.pairs.size());
            s.pairs.push_back(key);
            s.group.push_back({e});
        } else {
            s.group[it->second].push_back(e);
        }
    }
    return s;
}

// Expands a rotation over representative pairs into a rotation of g.
Embedding expand(const MultiGraph& g, const SimpleView& s, const std::vector<std::vector<int>>& rot,
                 bool reverse_far_end) {
    Embedding emb;
    emb.rotation.assign(g.vertex_bound(), {});
    for (int i = 0; i < static_cast<int>(s.verts.size()); ++i) {
        VertexId v = s.verts[i];
        for (int p : rot[i]) {
            if (p >= static_cast<int>(s.pairs.size())) continue;
            const auto& grp = s.group[p];
            bool near = s.pairs[p].first == i;
            if (near || !reverse_far_end)
                emb.rotation[v].insert(emb.rotation[v].end(), grp.begin(), grp.end());
            else
                emb.rotation[v].insert(emb.rotation[v].end(), grp.rbegin(), grp.rend());
        }
    }
    return emb;
}

std::optional<Embedding> embed_from_rotation(const MultiGraph& g, const SimpleView& s,
                                             const std::vector<std::vector<int>>& rot) {
    for (bool rev : {true, false}) {
        Embedding emb = expand(g, s, rot, rev);
        if (is_planar_embedding(g, emb)) return emb;
    }
    return std::nullopt;
}

int find_order_face(const std::vector<Face>& faces, const std::vector<VertexId>& order) {
    for (int f = 0; f < static_cast<int>(faces.size()); ++f)
        if (walk_contains_order(faces[f].walk, order)) return f;
    return -1;
}

// Exhaustive search over rotation systems; used when the order repeats a
// vertex non-consecutively, where the apex construction does not apply.
std::optional<OrderedPlanarEmbedding> brute_force_ordered(const MultiGraph& g, const std::vector<VertexId>& order) {
    std::vector<VertexId> vs = g.vertices();
    Embedding emb;
    emb.rotation.assign(g.vertex_bound(), {});
    std::vector<std::vector<EdgeId>> inc(g.vertex_bound());
    for (VertexId v : vs)
        for (EdgeId e : g.incident(v))
            if (!g.edge(e).is_loop()) inc[v].push_back(e);
    std::size_t budget = limits().search_cap;
    std::optional<OrderedPlanarEmbedding> found;
    std::function<bool(int)> rec = [&](int i) -> bool {
        if (i == static_cast<int>(vs.size())) {
            if (budget-- == 0) throw ResourceLimit("rotation-system search exceeded the configured cap");
            if (!is_planar_embedding(g, emb)) return false;
            auto faces = trace_faces(g, emb);
            int f = find_order_face(faces, order);
            if (f < 0) return false;
            found = OrderedPlanarEmbedding{emb, f, faces[f].walk, order};
            return true;
        }
        VertexId v = vs[i];
        auto& r = inc[v];
        if (r.size() <= 2) {
            emb.rotation[v] = r;
            return rec(i + 1);
        }
        std::vector<EdgeId> rest(r.begin() + 1, r.end());
        std::sort(rest.begin(), rest.end());
        do {
            emb.rotation[v].assign(1, r[0]);
            emb.rotation[v].insert(emb.rotation[v].end(), rest.begin(), rest.end());
            if (rec(i + 1)) return true;
        } while (std::next_permutation(rest.begin(), rest.end()));
        return false;
    };
    rec(0);
    return found;
}

}  // namespace

std::vector<Face> trace_faces(const MultiGraph& g, const Embedding& emb) {
    const int m = g.edge_bound();
    std::vector<int> pos_u(m, -1), pos_v(m, -1);
    for (VertexId v = 0; v < static_cast<int>(emb.rotation.size()); ++v) {
        const auto& r = emb.rotation[v];
        for (int i = 0; i < static_cast<int>(r.size()); ++i) {
            EdgeId e = r[i];
            if (g.edge(e).u == v) pos_u[e] = i;
            if (g.edge(e).v == v) pos_v[e] = i;
        }
    }
    std::vector<char> seen(2 * m, 0);
    std::vector<Face> faces;
    for (EdgeId e : g.edges()) {
        if (g.edge(e).is_loop()) continue;
        for (int d = 0; d < 2; ++d) {
            if (seen[2 * e + d]) continue;
            Face f;
            EdgeId ce = e;
            int cd = d;
            while (!seen[2 * ce + cd]) {
                seen[2 * ce + cd] = 1;
                const Edge& ed = g.edge(ce);
                VertexId tail = cd == 0 ? ed.u : ed.v;
                VertexId head = cd == 0 ? ed.v : ed.u;
                f.edges.push_back(ce);
                f.walk.push_back(tail);
                const auto& r = emb.rotation[head];
                int p = head == ed.u ? pos_u[ce] : pos_v[ce];
                EdgeId nx = r[(p + 1) % r.size()];
                ce = nx;
                cd = g.edge(nx).u == head ? 0 : 1;
            }
            faces.push_back(std::move(f));
        }
    }
    return faces;
}

bool is_planar_embedding(const MultiGraph& g, const Embedding& emb, std::string* why) {
    auto fail = [&](const std::string& s) {
        if (why) *why = s;
        return false;
    };
    for (VertexId v = 0; v < static_cast<int>(emb.rotation.size()); ++v)
        if (!g.has_vertex(v) && !emb.rotation[v].empty()) return fail("rotation at a missing vertex");
    for (VertexId v : g.vertices()) {
        std::vector<EdgeId> want;
        for (EdgeId e : g.incident(v))
            if (!g.edge(e).is_loop()) want.push_back(e);
        std::vector<EdgeId> have;
        if (v < static_cast<int>(emb.rotation.size())) have = emb.rotation[v];
        std::sort(want.begin(), want.end());
        std::sort(have.begin(), have.end());
        if (want != have) return fail("rotation does not list the incident edges of vertex " + std::to_string(v));
    }
    auto faces = trace_faces(g, emb);
    MultiGraph loopless = g;
    EdgeSet loops;
    for (EdgeId e : g.edges())
        if (g.edge(e).is_loop()) loops.set(e);
    loopless = g.without_edges(loops);
    auto comps = components(loopless);
    for (const VertexSet& c : comps) {
        int vc = c.count();
        int ec = loopless.edges_within(c).count();
        int fc = 0;
        for (const auto& f : faces)
            if (c.test(f.walk.front())) ++fc;
        if (ec == 0) fc = 1;
        if (vc - ec + fc != 2) return fail("Euler characteristic is not 2");
    }
    return true;
}

std::vector<VertexId> normalize_order(const std::vector<VertexId>& order) {
    std::vector<VertexId> out;
    for (VertexId v : order)
        if (out.empty() || out.back() != v) out.push_back(v);
    while (out.size() > 1 && out.back() == out.front()) out.pop_back();
    return out;
}

bool walk_contains_order(const std::vector<VertexId>& walk, const std::vector<VertexId>& order) {
    if (order.empty()) return true;
    const int n = static_cast<int>(walk.size());
    const int k = static_cast<int>(order.size());
    if (n == 0) return false;
    for (int dir = 0; dir < 2; ++dir) {
        for (int p = 0; p < n; ++p) {
            auto at = [&](int i) { return dir == 0 ? walk[(p + i) % n] : walk[((p - i) % n + n) % n]; };
            if (at(0) != order[0]) continue;
            int j = 1;
            for (int i = 1; i < n && j < k; ++i)
                if (at(i) == order[j]) ++j;
            if (j == k) return true;
        }
    }
    return false;
}

std::optional<Embedding> planar_embedding(const MultiGraph& g) {
    SimpleView s = simple_view(g);
    auto rot = boost_rotation(static_cast<int>(s.verts.size()), s.pairs);
    if (!rot) return std::nullopt;
    auto emb = embed_from_rotation(g, s, *rot);
    if (!emb) throw std::logic_error("planar embedding failed verification");
    return emb;
}

std::optional<OrderedPlanarEmbedding> ordered_planarity(const MultiGraph& g, const std::vector<VertexId>& order) {
    for (VertexId v : order)
        if (!g.has_vertex(v)) throw PreconditionError("unknown-vertex", "order names a vertex not in the graph");
    std::vector<VertexId> ord = normalize_order(order);
    {
        std::vector<VertexId> sorted = ord;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return brute_force_ordered(g, ord);
    }
    if (!ord.empty()) {
        for (const VertexSet& c : components(g))
            if (c.test(ord[0])) {
                for (VertexId v : ord)
                    if (!c.test(v)) return std::nullopt;
            }
    }
    SimpleView s = simple_view(g);
    const int n = static_cast<int>(s.verts.size());
    std::vector<std::pair<int, int>> aux = s.pairs;
    if (ord.size() >= 2) {
        std::set<std::pair<int, int>> have(aux.begin(), aux.end());
        const int apex = n;
        for (VertexId v : ord) aux.emplace_back(apex, s.index[v]);
        if (ord.size() >= 3)
            for (std::size_t i = 0; i < ord.size(); ++i) {
                auto key = std::minmax(s.index[ord[i]], s.index[ord[(i + 1) % ord.size()]]);
                if (have.insert(key).second) aux.push_back(key);
            }
    }
    auto rot = boost_rotation(ord.size() >= 2 ? n + 1 : n, aux);
    if (!rot) return std::nullopt;
    rot->resize(n);
    auto emb = embed_from_rotation(g, s, *rot);
    if (!emb) throw std::logic_error("ordered embedding failed verification");
    auto faces = trace_faces(g, *emb);
    if (ord.size() <= 1) {
        bool isolated = true;
        if (!ord.empty())
            for (EdgeId e : g.incident(ord[0]))
                if (!g.edge(e).is_loop()) isolated = false;
        if (isolated) return OrderedPlanarEmbedding{*emb, -1, ord, ord};
    }
    int f = find_order_face(faces, ord);
    if (f < 0) throw std::logic_error("apex construction did not yield the required face");
    return OrderedPlanarEmbedding{*emb, f, faces[f].walk, ord};
}

bool verify_ordered_embedding(const MultiGraph& g, const OrderedPlanarEmbedding& w, std::string* why) {
    if (!is_planar_embedding(g, w.embedding, why)) return false;
    auto ord = normalize_order(w.order);
    if (w.face < 0) {
        bool ok = ord.size() <= 1;
        for (VertexId v : ord) ok = ok && g.has_vertex(v);
        if (!ok && why) *why = "no designated face";
        return ok;
    }
    auto faces = trace_faces(g, w.embedding);
    if (w.face >= static_cast<int>(faces.size())) {
        if (why) *why = "designated face does not exist";
        return false;
    }
    if (!walk_contains_order(faces[w.face].walk, ord)) {
        if (why) *why = "order does not occur on the designated face";
        return false;
    }
    return true;
}

std::optional<OrderedPlanarEmbedding> ordered_planarity_groups(const MultiGraph& g,
                                                               const std::vector<std::vector<VertexId>>& groups) {
    if (!planar_embedding(g)) return std::nullopt;
    std::vector<std::vector<VertexId>> perm = groups;
    for (auto& p : perm) std::sort(p.begin(), p.end());
    std::size_t budget = limits().search_cap;
    std::optional<OrderedPlanarEmbedding> found;
    std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
        if (i == perm.size()) {
            if (budget-- == 0) throw ResourceLimit("group-order search exceeded the configured cap");
            std::vector<VertexId> order;
            for (auto& p : perm) order.insert(order.end(), p.begin(), p.end());
            found = ordered_planarity(g, order);
            return found.has_value();
        }
        do {
            if (rec(i + 1)) return true;
        } while (std::next_permutation(perm[i].begin(), perm[i].end()));
        return false;
    };
    rec(0);
    return found;
}

}  // namespace tangle
