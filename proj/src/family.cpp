#include "tangle/family.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "tangle/config.hpp"
#include "tangle/linkage.hpp"
#include "tangle/tangle.hpp"

namespace tangle {

namespace {

struct FamilyInfo {
    FamilyKind kind;
    const char* name;
    const char* label;
};

constexpr FamilyInfo kInfo[] = {
    {FamilyKind::GeneralizedWheel, "generalized-wheel", "T1b"},
    {FamilyKind::CrissCross, "criss-cross", "T1c"},
    {FamilyKind::FatTriangle, "fat-triangle", "T1d"},
    {FamilyKind::PPSpecialVertex, "special-vertex", "T1e"},
    {FamilyKind::PPSpecialPair, "special-pair", "T1f"},
    {FamilyKind::PPSpecialTriple, "special-triple", "T1g"},
    {FamilyKind::Tricoloured, "tricoloured", "T1h"},
    {FamilyKind::K5Parallel, "k5", "T2"},
    {FamilyKind::PPSigned, "pp-signed", "T1a"},
};

const FamilyInfo& info(FamilyKind k) {
    for (const auto& i : kInfo)
        if (i.kind == k) return i;
    throw std::logic_error("unknown family kind");
}

struct RoleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using ShapeCheck = std::function<std::string()>;  // empty when the clause holds
using BiasRule = std::function<std::optional<Bias>(const Cycle&)>;
using WholeCheck = std::function<std::string(const BiasedGraph&)>;

struct Rules {
    std::vector<std::pair<std::string, ShapeCheck>> shape;
    std::vector<std::pair<std::string, BiasRule>> bias;
    std::vector<std::pair<std::string, WholeCheck>> whole;
};

VertexId role_v(const FamilyDescriptor& d, const std::string& k) {
    auto it = d.v.find(k);
    if (it == d.v.end()) throw RoleError("missing vertex role " + k);
    if (!d.graph.has_vertex(it->second)) throw RoleError("vertex role " + k + " names no vertex");
    return it->second;
}

EdgeId role_e(const FamilyDescriptor& d, const std::string& k) {
    auto it = d.e.find(k);
    if (it == d.e.end()) throw RoleError("missing edge role " + k);
    if (!d.graph.has_edge(it->second)) throw RoleError("edge role " + k + " names no edge");
    return it->second;
}

VertexSet role_vs(const FamilyDescriptor& d, const std::string& k) {
    auto it = d.vs.find(k);
    if (it == d.vs.end()) throw RoleError("missing vertex-set role " + k);
    if (!it->second.subset_of(d.graph.vertex_set())) throw RoleError("vertex-set role " + k + " names unknown vertices");
    return it->second;
}

EdgeSet role_es(const FamilyDescriptor& d, const std::string& k) {
    auto it = d.es.find(k);
    if (it == d.es.end()) throw RoleError("missing edge-set role " + k);
    if (!it->second.subset_of(d.graph.edge_set())) throw RoleError("edge-set role " + k + " names unknown edges");
    return it->second;
}

std::string ids(const IdSet& s) {
    std::ostringstream os;
    bool first = true;
    s.for_each([&](int i) {
        os << (first ? "" : " ") << i;
        first = false;
    });
    return os.str();
}

std::string cycle_text(const Cycle& c) {
    std::ostringstream os;
    for (std::size_t i = 0; i < c.seq.size(); ++i) os << (i ? " " : "") << c.seq[i];
    return os.str();
}

bool joins(const MultiGraph& g, EdgeId e, VertexId a, VertexId b) {
    if (!g.has_edge(e)) return false;
    const Edge& ed = g.edge(e);
    return (ed.u == a && ed.v == b) || (ed.u == b && ed.v == a);
}

bool is_block(const MultiGraph& g) {
    for (EdgeId e : g.edges())
        if (g.edge(e).is_loop()) return false;
    return g.num_edges() > 0 && is_two_connected(g);
}

// Graph on `verts` with exactly the edges `es`.
MultiGraph part_graph(const MultiGraph& g, const VertexSet& verts, const EdgeSet& es) {
    return g.induced(verts).spanning_with(es);
}

std::string check_partition(const MultiGraph& g, const std::vector<std::pair<std::string, EdgeSet>>& parts) {
    EdgeSet seen;
    for (const auto& [name, p] : parts) {
        if (p.intersects(seen)) return name + " overlaps an earlier part";
        seen |= p;
    }
    if (seen != g.edge_set()) return "edges " + ids(g.edge_set() - seen) + " belong to no part";
    return {};
}

// A edge set `f` that maps one edge from `hub` to each vertex of `targets`.
std::string check_star(const MultiGraph& g, VertexId hub, const EdgeSet& f, const VertexSet& targets,
                       const std::string& name) {
    VertexSet hit;
    std::string bad;
    f.for_each([&](int e) {
        if (!bad.empty()) return;
        const Edge& ed = g.edge(e);
        if (ed.u != hub && ed.v != hub) {
            bad = name + " edge " + std::to_string(e) + " misses its hub";
            return;
        }
        VertexId o = g.other(e, hub);
        if (o == hub || !targets.test(o) || hit.test(o)) {
            bad = name + " edge " + std::to_string(e) + " does not match its target set";
            return;
        }
        hit.set(o);
    });
    if (bad.empty() && hit != targets) bad = name + " misses a target vertex";
    return bad;
}

std::string check_all_join(const MultiGraph& g, const EdgeSet& f, VertexId a, VertexId b, const std::string& name) {
    std::string bad;
    f.for_each([&](int e) {
        if (bad.empty() && !joins(g, e, a, b)) bad = name + " edge " + std::to_string(e) + " has the wrong ends";
    });
    return bad;
}

bool for_each_group_order(const std::vector<std::vector<VertexId>>& groups,
                          const std::function<bool(const std::vector<VertexId>&)>& fn) {
    std::vector<std::vector<VertexId>> perm = groups;
    for (auto& p : perm) std::sort(p.begin(), p.end());
    std::size_t budget = limits().search_cap;
    std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
        if (i == perm.size()) {
            if (budget-- == 0) throw ResourceLimit("group-order search exceeded the configured cap");
            std::vector<VertexId> order;
            for (auto& p : perm) order.insert(order.end(), p.begin(), p.end());
            return fn(order);
        }
        do {
            if (rec(i + 1)) return true;
        } while (std::next_permutation(perm[i].begin(), perm[i].end()));
        return false;
    };
    return rec(0);
}

bool disk_planar_groups(const MultiGraph& g, const std::vector<std::vector<VertexId>>& groups) {
    return for_each_group_order(groups, [&](const std::vector<VertexId>& o) { return disk_planar(g, o); });
}


BiasRule within(const EdgeSet& base, Bias b) {
    return [base, b](const Cycle& c) -> std::optional<Bias> {
        if (c.edges.subset_of(base)) return b;
        return std::nullopt;
    };
}

// A-cycles for `base` with |A| = 1 and A inside `from`.
BiasRule single(const EdgeSet& base, const EdgeSet& from, Bias b) {
    return [base, from, b](const Cycle& c) -> std::optional<Bias> {
        EdgeSet rest = c.edges - base;
        if (rest.count() == 1 && rest.subset_of(from)) return b;
        return std::nullopt;
    };
}

// A-cycles for `base` with A = {p, q}, p in s1, q in s2, p != q.
BiasRule paired(const EdgeSet& base, const EdgeSet& s1, const EdgeSet& s2, Bias b) {
    return [base, s1, s2, b](const Cycle& c) -> std::optional<Bias> {
        EdgeSet rest = c.edges - base;
        if (rest.count() != 2) return std::nullopt;
        int p = rest.first();
        EdgeSet qs = rest;
        qs.reset(p);
        int q = qs.first();
        if ((s1.test(p) && s2.test(q)) || (s1.test(q) && s2.test(p))) return b;
        return std::nullopt;
    };
}

EdgeSet edges_of(std::initializer_list<EdgeId> es) {
    EdgeSet s;
    for (EdgeId e : es) s.set(e);
    return s;
}

std::string key(const std::string& base, int i) { return base + std::to_string(i); }

// ---------------------------------------------------------------- wheels

Rules wheel_rules(const FamilyDescriptor& d) {
    const MultiGraph& g = d.graph;
    const VertexId w = role_v(d, "w");
    int k = 0;
    while (d.es.count(key("G", k + 1))) ++k;
    if (k < 2) throw RoleError("a generalized wheel needs parts G1, G2, ...");
    std::vector<EdgeSet> parts(k + 1);
    std::vector<VertexSet> pv(k + 1);
    std::vector<VertexId> z(k + 1);
    std::vector<VertexSet> xs(k + 1), ys(k + 1);
    std::vector<char> single_edge(k + 1, 0);
    for (int i = 1; i <= k; ++i) {
        parts[i] = role_es(d, key("G", i));
        pv[i] = g.endpoints(parts[i]);
        z[i] = role_v(d, key("z", i));
        single_edge[i] = parts[i].count() == 1;
        if (!single_edge[i]) {
            xs[i] = role_vs(d, key("X", i));
            ys[i] = role_vs(d, key("Y", i));
        }
    }
    auto prev = [k](int i) { return i == 1 ? k : i - 1; };
    auto next = [k](int i) { return i == k ? 1 : i + 1; };
    VertexSet wv;
    wv.set(w);
    const EdgeSet spokes = g.delta(wv);
    VertexSet zs;
    for (int i = 1; i <= k; ++i) zs.set(z[i]);

    Rules r;
    r.shape.push_back({"(a) parts", [=, &g]() -> std::string {
                           std::vector<std::pair<std::string, EdgeSet>> ps{{"spokes", spokes}};
                           for (int i = 1; i <= k; ++i) ps.push_back({key("G", i), parts[i]});
                           std::string bad = check_partition(g, ps);
                           if (!bad.empty()) return bad;
                           for (int i = 1; i <= k; ++i)
                               if (pv[i].test(w)) return key("G", i) + " contains w";
                           return {};
                       }});
    r.shape.push_back({"(a) blocks", [=, &g]() -> std::string {
                           for (int i = 1; i <= k; ++i)
                               if (!is_block(g.edge_induced(parts[i]))) return key("G", i) + " is not 2-connected";
                           return {};
                       }});
    r.shape.push_back({"(a) ring", [=]() -> std::string {
                           if (zs.count() != k) return "the z vertices are not distinct";
                           if (k == 2) {
                               VertexSet want;
                               want.set(z[1]);
                               want.set(z[2]);
                               if ((pv[1] & pv[2]) != want) return "G1 and G2 do not meet in {z1, z2}";
                               return {};
                           }
                           for (int i = 1; i <= k; ++i) {
                               VertexSet want;
                               want.set(z[i]);
                               if ((pv[i] & pv[next(i)]) != want)
                                   return key("G", i) + " and its successor do not meet in " + key("z", i);
                               for (int j = i + 2; j <= k; ++j)
                                   if (j != prev(i) && next(j) != i && pv[i].intersects(pv[j]))
                                       return key("G", i) + " meets a non-consecutive part";
                           }
                           return {};
                       }});
    r.shape.push_back({"(e) sides", [=, &g]() -> std::string {
                           for (int i = 1; i <= k; ++i) {
                               if (single_edge[i]) continue;
                               VertexSet ends;
                               ends.set(z[prev(i)]);
                               ends.set(z[i]);
                               VertexSet att = (g.neighbors(w) & pv[i]) - ends;
                               if (xs[i].empty() || ys[i].empty()) return key("X", i) + " or " + key("Y", i) + " is empty";
                               if (xs[i].intersects(ys[i])) return key("X", i) + " meets " + key("Y", i);
                               if ((xs[i] | ys[i]) != att) return key("X", i) + " and " + key("Y", i) + " do not cover the spokes";
                           }
                           return {};
                       }});
    r.shape.push_back({"(e) planar", [=, &g]() -> std::string {
                           for (int i = 1; i <= k; ++i) {
                               if (single_edge[i]) continue;
                               if (!disk_planar_groups(g.edge_induced(parts[i]), {{z[prev(i)]},
                                                                                   xs[i].to_vector(),
                                                                                   {z[i]},
                                                                                   ys[i].to_vector()}))
                                   return key("G", i) + " fails the planarity clause";
                           }
                           return {};
                       }});

    for (int i = 1; i <= k; ++i) r.bias.push_back({"(b) " + key("G", i) + " balanced", within(parts[i], Bias::Balanced)});
    r.bias.push_back({"(c) rim cycles", [=](const Cycle& c) -> std::optional<Bias> {
                          if (c.verts.test(w)) return std::nullopt;
                          for (int i = 1; i <= k; ++i)
                              if (!c.edges.intersects(parts[i])) return std::nullopt;
                          return Bias::Unbalanced;
                      }});
    r.bias.push_back({"(f) spoke pairs", [=, &g](const Cycle& c) -> std::optional<Bias> {
                          EdgeSet at = c.edges & spokes;
                          if (at.count() != 2) return std::nullopt;
                          auto two = at.to_vector();
                          VertexId x = g.other(two[0], w), y = g.other(two[1], w);
                          if (zs.test(x) || zs.test(y)) return std::nullopt;
                          EdgeSet rest = c.edges - at;
                          for (int i = 1; i <= k; ++i) {
                              if (single_edge[i] || !pv[i].test(x) || !pv[i].test(y)) continue;
                              if (!rest.subset_of(parts[i])) return std::nullopt;
                              return xs[i].test(x) != xs[i].test(y) ? Bias::Unbalanced : Bias::Balanced;
                          }
                          return std::nullopt;
                      }});
    return r;
}

// ---------------------------------------------------------- criss-cross

Rules criss_cross_rules(const FamilyDescriptor& d) {
    const MultiGraph& g = d.graph;
    const VertexId w = role_v(d, "w");
    VertexId u[5];
    EdgeId ee[5];
    for (int i = 1; i <= 4; ++i) {
        u[i] = role_v(d, key("u", i));
        ee[i] = role_e(d, key("e", i));
    }
    const EdgeId f1 = role_e(d, "f1"), f2 = role_e(d, "f2");
    const EdgeSet h = role_es(d, "H");
    const EdgeSet es = edges_of({ee[1], ee[2], ee[3], ee[4]});

    Rules r;
    r.shape.push_back({"edges", [=, &g]() -> std::string {
                           VertexSet all{w, u[1], u[2], u[3], u[4]};
                           if (all.count() != 5) return "w and the u vertices are not distinct";
                           for (int i = 1; i <= 4; ++i)
                               if (!joins(g, ee[i], w, u[i])) return key("e", i) + " does not join w and " + key("u", i);
                           if (!joins(g, f1, u[1], u[3])) return "f1 does not join u1 and u3";
                           if (!joins(g, f2, u[2], u[4])) return "f2 does not join u2 and u4";
                           EdgeSet named = es | edges_of({f1, f2});
                           if (named.count() != 6) return "named edges are not distinct";
                           return check_partition(g, {{"H", h}, {"named", named}});
                       }});
    r.shape.push_back({"H 2-connected", [=, &g]() -> std::string {
                           MultiGraph hg = g.edge_induced(h);
                           if (!is_block(hg)) return "H is not 2-connected";
                           if (hg.vertex_set().test(w)) return "H contains w";
                           VertexSet want = g.vertex_set();
                           want.reset(w);
                           if (hg.vertex_set() != want) return "H does not span the other vertices";
                           return {};
                       }});
    r.shape.push_back({"H planar", [=, &g]() -> std::string {
                           if (!disk_planar(g.edge_induced(h), {u[1], u[2], u[3], u[4]}))
                               return "(H, (u1, u2, u3, u4)) is not planar";
                           return {};
                       }});
    r.bias.push_back({"H balanced", within(h, Bias::Balanced)});
    r.bias.push_back({"f-cycles", single(h, edges_of({f1, f2}), Bias::Unbalanced)});
    r.bias.push_back({"e-pair cycles", paired(h, es, es, Bias::Unbalanced)});
    r.bias.push_back({"balanced triangles", [=](const Cycle& c) -> std::optional<Bias> {
                          if (c.edges == edges_of({ee[1], ee[3], f1}) || c.edges == edges_of({ee[2], ee[4], f2}))
                              return Bias::Balanced;
                          return std::nullopt;
                      }});
    return r;
}

// --------------------------------------------------------- fat triangle

Rules fat_triangle_rules(const FamilyDescriptor& d) {
    const MultiGraph& g = d.graph;
    const VertexId v1 = role_v(d, "v1"), v2 = role_v(d, "v2"), v3 = role_v(d, "v3");
    const EdgeSet h = role_es(d, "H");
    const EdgeSet f12 = role_es(d, "F12"), f23 = role_es(d, "F23"), f31 = role_es(d, "F31");
    const EdgeSet f = f12 | f23 | f31;
    Rules r;
    r.shape.push_back({"corners", [=]() -> std::string {
                           if (VertexSet{v1, v2, v3}.count() != 3) return "corners are not distinct";
                           if (f12.empty() || f23.empty() || f31.empty()) return "an F set is empty";
                           return {};
                       }});
    r.shape.push_back({"edges", [=, &g]() -> std::string {
                           std::string bad = check_all_join(g, f12, v1, v2, "F12");
                           if (bad.empty()) bad = check_all_join(g, f23, v2, v3, "F23");
                           if (bad.empty()) bad = check_all_join(g, f31, v3, v1, "F31");
                           if (bad.empty()) bad = check_partition(g, {{"H", h}, {"F12", f12}, {"F23", f23}, {"F31", f31}});
                           return bad;
                       }});
    r.bias.push_back({"H balanced", within(h, Bias::Balanced)});
    r.bias.push_back({"f-cycles", single(h, f, Bias::Unbalanced)});
    return r;
}

// ------------------------------------------------------- special vertex

Rules special_vertex_rules(const FamilyDescriptor& d) {
    const MultiGraph& g = d.graph;
    const VertexId w = role_v(d, "w"), z1 = role_v(d, "z1"), z2 = role_v(d, "z2"), u1 = role_v(d, "u1"),
                   u2 = role_v(d, "u2");
    const EdgeId ez = role_e(d, "z1z2"), eu = role_e(d, "u1u2"), wz1 = role_e(d, "wz1"), wz2 = role_e(d, "wz2"),
                 g1 = role_e(d, "g1"), g2 = role_e(d, "g2");
    const VertexSet h1v = role_vs(d, "H1"), h2v = role_vs(d, "H2");
    const EdgeSet h1 = role_es(d, "H1"), h2 = role_es(d, "H2");
    const std::vector<EdgeId> fs = d.sequence;
    const std::vector<VertexId> pairing = d.pairing;
    const int m = static_cast<int>(fs.size());
    if (m < 1 || static_cast<int>(pairing.size()) != 2 * m) throw RoleError("pairing must list x1..xm, y1..ym for m >= 1");
    EdgeSet fset;
    for (EdgeId e : fs) {
        if (!g.has_edge(e)) throw RoleError("sequence names no edge");
        fset.set(e);
    }
    for (VertexId v : pairing)
        if (!g.has_vertex(v)) throw RoleError("pairing names no vertex");
    const EdgeSet hall = h1 | h2 | edges_of({ez, eu, wz1, wz2});
    EdgeSet hminus = hall;
    hminus.reset(eu);
    const EdgeSet gs = edges_of({g1, g2});

    Rules r;
    r.shape.push_back({"halves", [=, &g]() -> std::string {
                           if (h1v.intersects(h2v)) return "H1 and H2 share a vertex";
                           if (h1v.test(w) || h2v.test(w)) return "w lies in a half";
                           VertexSet all = h1v | h2v;
                           all.set(w);
                           if (all != g.vertex_set()) return "halves and w do not cover the vertices";
                           if (!g.endpoints(h1).subset_of(h1v) || !g.endpoints(h2).subset_of(h2v))
                               return "a half edge leaves its half";
                           if (!h1v.test(u1) || !h1v.test(z2) || !h2v.test(z1) || !h2v.test(u2))
                               return "u1, z2 must lie in H1 and z1, u2 in H2";
                           for (int i = 0; i < m; ++i)
                               if (!h1v.test(pairing[i]) || !h2v.test(pairing[m + i]))
                                   return "x_i must lie in H1 and y_i in H2";
                           return {};
                       }});
    r.shape.push_back({"edges", [=, &g]() -> std::string {
                           if (!joins(g, ez, z1, z2)) return "z1z2 has the wrong ends";
                           if (!joins(g, eu, u1, u2)) return "u1u2 has the wrong ends";
                           if (!joins(g, wz1, w, z1) || !joins(g, wz2, w, z2)) return "wz edges have the wrong ends";
                           if (!joins(g, g1, w, u1) || !joins(g, g2, w, u2)) return "g edges have the wrong ends";
                           for (int i = 0; i < m; ++i)
                               if (!joins(g, fs[i], pairing[i], pairing[m + i])) return "f_i does not join x_i and y_i";
                           EdgeSet named = edges_of({ez, eu, wz1, wz2, g1, g2});
                           if (named.count() != 6 || static_cast<int>(fset.count()) != m) return "named edges repeat";
                           return check_partition(g, {{"H1", h1}, {"H2", h2}, {"named", named}, {"F", fset}});
                       }});
    r.shape.push_back({"H1 planar", [=, &g]() -> std::string {
                           std::vector<VertexId> ord(pairing.begin(), pairing.begin() + m);
                           ord.push_back(u1);
                           ord.push_back(z2);
                           if (!disk_planar(part_graph(g, h1v, h1), ord)) return "(H1, (x1..xm, u1, z2)) is not planar";
                           return {};
                       }});
    r.shape.push_back({"H2 planar", [=, &g]() -> std::string {
                           std::vector<VertexId> ord(pairing.begin() + m, pairing.end());
                           ord.push_back(z1);
                           ord.push_back(u2);
                           if (!disk_planar(part_graph(g, h2v, h2), ord)) return "(H2, (y1..ym, z1, u2)) is not planar";
                           return {};
                       }});
    r.bias.push_back({"H balanced", within(hall, Bias::Balanced)});
    r.bias.push_back({"f- and g-cycles", single(hall, fset | gs, Bias::Unbalanced)});
    r.bias.push_back({"{g1,g2}-cycles", paired(hall, gs, gs, Bias::Balanced)});
    r.bias.push_back({"{fi,fj}-cycles", paired(hminus, fset, fset, Bias::Balanced)});
    r.bias.push_back({"{gi,fj}-cycles", paired(hminus, gs, fset, Bias::Unbalanced)});
    return r;
}

// --------------------------------------------------------- special pair

Rules special_pair_rules(const FamilyDescriptor& d) {
    const MultiGraph& g = d.graph;
    const VertexId x = role_v(d, "x"), y = role_v(d, "y");
    const VertexSet xs = role_vs(d, "X"), ys = role_vs(d, "Y");
    const EdgeSet h = role_es(d, "H"), fx = role_es(d, "Fx"), fy = role_es(d, "Fy"), ee = role_es(d, "E");
    Rules r;
    r.shape.push_back({"sets", [=]() -> std::string {
                           if (x == y) return "x equals y";
                           if ((xs & ys).count() > 1) return "X and Y share more than one vertex";
                           if (xs.test(x) || ys.test(y)) return "X contains x or Y contains y";
                           return {};
                       }});
    r.shape.push_back({"edges", [=, &g]() -> std::string {
                           std::string bad = check_star(g, x, fx, xs, "Fx");
                           if (bad.empty()) bad = check_star(g, y, fy, ys, "Fy");
                           if (bad.empty()) bad = check_all_join(g, ee, x, y, "E");
                           if (bad.empty()) bad = check_partition(g, {{"H", h}, {"Fx", fx}, {"Fy", fy}, {"E", ee}});
                           return bad;
                       }});
    r.shape.push_back({"H planar", [=, &g]() -> std::string {
                           MultiGraph hg = g.spanning_with(h);
                           VertexSet shared = xs & ys;
                           std::vector<std::vector<VertexId>> groups{{x}, {y}, (xs - shared).to_vector()};
                           if (shared.any()) groups.push_back({shared.first()});
                           groups.push_back((ys - shared).to_vector());
                           if (!disk_planar_groups(hg, groups)) return "(H, (x, y, X, Y)) is not planar";
                           return {};
                       }});
    r.bias.push_back({"H balanced", within(h, Bias::Balanced)});
    r.bias.push_back({"Fx 2-balanced", paired(h, fx, fx, Bias::Balanced)});
    r.bias.push_back({"Fy 2-balanced", paired(h, fy, fy, Bias::Balanced)});
    r.bias.push_back({"e-cycles", single(h, ee, Bias::Unbalanced)});
    return r;
}

// ------------------------------------------------------- special triple

Rules special_triple_rules(const FamilyDescriptor& d) {
    const MultiGraph& g = d.graph;
    const VertexId y1 = role_v(d, "y1"), x = role_v(d, "x"), y2 = role_v(d, "y2");
    const VertexSet xs = role_vs(d, "X");
    const EdgeSet h = role_es(d, "H"), f = role_es(d, "F"), ee = role_es(d, "E"), gg = role_es(d, "G");
    const EdgeId ef = role_e(d, "f");
    Rules r;
    r.shape.push_back({"sets", [=]() -> std::string {
                           if (VertexSet{y1, x, y2}.count() != 3) return "y1, x, y2 are not distinct";
                           if (ee.empty()) return "E is empty";
                           if (xs.test(x)) return "X contains x";
                           return {};
                       }});
    r.shape.push_back({"edges", [=, &g]() -> std::string {
                           std::string bad = check_star(g, x, f, xs, "F");
                           if (bad.empty()) bad = check_all_join(g, ee, x, y1, "E");
                           if (bad.empty()) bad = check_all_join(g, gg, x, y2, "G");
                           if (bad.empty() && !joins(g, ef, y1, y2)) bad = "f does not join y1 and y2";
                           if (bad.empty())
                               bad = check_partition(g, {{"H", h}, {"F", f}, {"E", ee}, {"G", gg}, {"f", edges_of({ef})}});
                           return bad;
                       }});
    r.shape.push_back({"H planar", [=, &g]() -> std::string {
                           if (!disk_planar_groups(g.spanning_with(h), {{y1}, {x}, {y2}, xs.to_vector()}))
                               return "(H, (y1, x, y2, X)) is not planar";
                           return {};
                       }});
    r.bias.push_back({"H balanced", within(h, Bias::Balanced)});
    r.bias.push_back({"F 2-balanced", paired(h, f, f, Bias::Balanced)});
    r.bias.push_back({"e-, g- and f-cycles", single(h, ee | gg | edges_of({ef}), Bias::Unbalanced)});
    return r;
}

// ---------------------------------------------------------- tricoloured

Rules tricoloured_rules(const FamilyDescriptor& d) {
    const MultiGraph& g = d.graph;
    const std::vector<int> index = d.index;
    const bool low = index == std::vector<int>{1, 2, 3};
    if (!low && index != std::vector<int>{1, 3, 5}) throw RoleError("index set must be {1,2,3} or {1,3,5}");
    auto wrap = [](int i) { return (i - 1 + 6) % 6 + 1; };
    std::vector<VertexSet> hv(7);
    std::vector<EdgeSet> he(7);
    std::vector<VertexId> z(7, -1), xv(7, -1);
    std::vector<VertexSet> ys(7);
    std::vector<EdgeSet> es(7);
    EdgeSet hall, eall;
    for (int i = 1; i <= 6; ++i) {
        hv[i] = role_vs(d, key("H", i));
        he[i] = role_es(d, key("H", i));
        z[i] = role_v(d, key("z", i));
        hall |= he[i];
    }
    for (int i : index) {
        xv[i] = role_v(d, key("x", i));
        ys[i] = role_vs(d, key("Y", i));
        es[i] = role_es(d, key("E", i));
        eall |= es[i];
    }

    Rules r;
    r.shape.push_back({"(a) parts", [=, &g]() -> std::string {
                           std::vector<std::pair<std::string, EdgeSet>> ps;
                           for (int i = 1; i <= 6; ++i) ps.push_back({key("H", i), he[i]});
                           for (int i : index) ps.push_back({key("E", i), es[i]});
                           std::string bad = check_partition(g, ps);
                           if (!bad.empty()) return bad;
                           VertexSet cover;
                           for (int i = 1; i <= 6; ++i) {
                               if (hv[i].empty()) return key("H", i) + " is empty";
                               if (!g.endpoints(he[i]).subset_of(hv[i])) return key("H", i) + " has an edge leaving it";
                               if (!is_connected(part_graph(g, hv[i], he[i]))) return key("H", i) + " is not connected";
                               cover |= hv[i];
                           }
                           if (cover != g.vertex_set()) return "parts do not cover the vertices";
                           return {};
                       }});
    r.shape.push_back({"(a) ring", [=]() -> std::string {
                           VertexSet zs;
                           for (int i = 1; i <= 6; ++i) {
                               VertexSet want;
                               want.set(z[i]);
                               if ((hv[i] & hv[wrap(i + 1)]) != want)
                                   return key("H", i) + " and its successor do not meet in " + key("z", i);
                               zs.set(z[i]);
                           }
                           int collapsed = 0;
                           for (int i = 1; i <= 6; ++i)
                               if (z[wrap(i - 1)] == z[i]) {
                                   if (hv[i].count() != 1) return key("z", i) + " repeats without a single-vertex part";
                                   ++collapsed;
                               }
                           if (zs.count() + collapsed != 6) return "the z vertices are not distinct";
                           for (int i = 1; i <= 6; ++i)
                               for (int j = i + 2; j <= 6; ++j) {
                                   if (i == 1 && j == 6) continue;
                                   if (!(hv[i] & hv[j]).subset_of(zs)) return key("H", i) + " meets a non-consecutive part";
                               }
                           return {};
                       }});
    r.shape.push_back({"H 2-connected", [=, &g]() -> std::string {
                           MultiGraph hg = g.spanning_with(hall);
                           if (!is_block(hg)) return "H is not 2-connected";
                           return {};
                       }});
    r.shape.push_back({"(b) terminals", [=, &g]() -> std::string {
                           VertexSet xset;
                           for (int i : index) {
                               if (!hv[i].test(xv[i])) return key("x", i) + " is not in " + key("H", i);
                               if (!ys[i].subset_of(hv[wrap(i + 3)])) return key("Y", i) + " is not in the opposite part";
                               if (ys[i].empty()) return key("Y", i) + " is empty";
                               std::string bad = check_star(g, xv[i], es[i], ys[i], key("E", i));
                               if (!bad.empty()) return bad;
                               xset.set(xv[i]);
                           }
                           if (xset.count() != 3) return "the x vertices are not distinct";
                           return {};
                       }});
    r.shape.push_back({"(b) 3-planar", [=, &g]() -> std::string {
                           MultiGraph hg = g.spanning_with(hall);
                           std::vector<std::vector<VertexId>> groups;
                           if (low)
                               groups = {{xv[1]}, {xv[2]}, {xv[3]}, ys[1].to_vector(), ys[2].to_vector(), ys[3].to_vector()};
                           else
                               groups = {{xv[1]}, ys[5].to_vector(), {xv[3]}, ys[1].to_vector(), {xv[5]}, ys[3].to_vector()};
                           bool ok = for_each_group_order(groups, [&](const std::vector<VertexId>& order) {
                               std::vector<VertexId> ord = normalize_order(order);
                               std::vector<VertexId> sorted = ord;
                               std::sort(sorted.begin(), sorted.end());
                               if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
                               return find_witness(hg, ord).has_value();
                           });
                           return ok ? std::string{} : "H is not 3-planar in the required order";
                       }});
    r.bias.push_back({"H balanced", within(hall, Bias::Balanced)});
    for (int i : index)
        r.bias.push_back({key("E", i) + " 2-balanced", paired(he[wrap(i + 3)], es[i], es[i], Bias::Balanced)});
    for (int i : index)
        for (int j : index) {
            if (j <= i) continue;
            EdgeSet base = he[i] | he[j] | he[wrap(i + 3)] | he[wrap(j + 3)];
            r.bias.push_back({"cross " + key("E", i) + key("E", j), paired(base, es[i], es[j], Bias::Unbalanced)});
        }
    return r;
}

// ------------------------------------------------------------------- K5

Rules k5_rules(const FamilyDescriptor& d) {
    const MultiGraph& g = d.graph;
    VertexId k[5];
    for (int i = 0; i < 5; ++i) k[i] = role_v(d, key("k", i + 1));
    const std::vector<int> mults = d.mults;
    if (mults.size() != 10) throw RoleError("k5 needs ten multiplicities");
    Rules r;
    r.shape.push_back({"K5 with parallels", [=, &g]() -> std::string {
                           VertexSet all{k[0], k[1], k[2], k[3], k[4]};
                           if (all.count() != 5 || all != g.vertex_set()) return "the five named vertices are not the graph";
                           int idx = 0, total = 0;
                           for (int i = 0; i < 5; ++i)
                               for (int j = i + 1; j < 5; ++j, ++idx) {
                                   int c = g.edges_between(k[i], k[j]).count();
                                   if (mults[idx] < 1 || c != mults[idx]) return "multiplicities do not match";
                                   total += c;
                               }
                           if (total != g.num_edges()) return "the graph has loops";
                           return {};
                       }});
    r.whole.push_back({"tangled", [](const BiasedGraph& o) -> std::string {
                           TangleVerdict t = is_tangled(o);
                           return t.tangled() ? std::string{} : std::string("verdict is ") + kind_name(t.kind);
                       }});
    return r;
}

// ------------------------------------------------------------ pp-signed

Rules pp_signed_rules(const FamilyDescriptor& d) {
    const MultiGraph& g = d.graph;
    const EdgeSet b = role_es(d, "B");
    const std::vector<EdgeId> fs = d.sequence;
    const std::vector<VertexId> pairing = d.pairing;
    const int m = static_cast<int>(fs.size());
    if (m < 1 || static_cast<int>(pairing.size()) != 2 * m) throw RoleError("pairing must list x1..xm, y1..ym for m >= 1");
    EdgeSet fset;
    for (EdgeId e : fs) {
        if (!g.has_edge(e)) throw RoleError("sequence names no edge");
        fset.set(e);
    }
    for (VertexId v : pairing)
        if (!g.has_vertex(v)) throw RoleError("pairing names no vertex");
    Rules r;
    r.shape.push_back({"edges", [=, &g]() -> std::string {
                           if (static_cast<int>(fset.count()) != m) return "signature edges repeat";
                           for (int i = 0; i < m; ++i)
                               if (!joins(g, fs[i], pairing[i], pairing[m + i])) return "f_i does not join x_i and y_i";
                           return check_partition(g, {{"B", b}, {"F", fset}});
                       }});
    r.shape.push_back({"base planar", [=, &g]() -> std::string {
                           if (!disk_planar(g.spanning_with(b), pairing))
                               return "(B, (x1..xm, y1..ym)) is not planar";
                           return {};
                       }});
    r.bias.push_back({"signature parity", [fset](const Cycle& c) -> std::optional<Bias> {
                          return (c.edges & fset).count() % 2 == 0 ? Bias::Balanced : Bias::Unbalanced;
                      }});
    return r;
}

Rules rules_for(const FamilyDescriptor& d) {
    switch (d.kind) {
        case FamilyKind::GeneralizedWheel: return wheel_rules(d);
        case FamilyKind::CrissCross: return criss_cross_rules(d);
        case FamilyKind::FatTriangle: return fat_triangle_rules(d);
        case FamilyKind::PPSpecialVertex: return special_vertex_rules(d);
        case FamilyKind::PPSpecialPair: return special_pair_rules(d);
        case FamilyKind::PPSpecialTriple: return special_triple_rules(d);
        case FamilyKind::Tricoloured: return tricoloured_rules(d);
        case FamilyKind::K5Parallel: return k5_rules(d);
        case FamilyKind::PPSigned: return pp_signed_rules(d);
    }
    throw RoleError("unknown kind");
}

Rules checked_rules(const FamilyDescriptor& d, FamilyKind want) {
    if (d.kind != want) throw PreconditionError("shape", std::string("descriptor is not a ") + family_name(want));
    Rules r;
    try {
        r = rules_for(d);
    } catch (const RoleError& e) {
        throw PreconditionError("shape", e.what());
    }
    for (const auto& [name, check] : r.shape) {
        std::string bad = check();
        if (!bad.empty()) throw PreconditionError("shape", name + ": " + bad);
    }
    return r;
}

BiasedGraph build_with(const FamilyDescriptor& d, FamilyKind want, Bias fallback) {
    Rules r = checked_rules(d, want);
    PartialBias partial;
    for (const Cycle& c : enumerate_cycles(d.graph)) {
        std::optional<Bias> fixed;
        std::string by;
        for (const auto& [name, rule] : r.bias) {
            auto b = rule(c);
            if (!b) continue;
            if (fixed && *fixed != *b)
                throw PreconditionError("infeasible", "clauses " + by + " and " + name + " disagree on cycle " + cycle_text(c));
            fixed = b;
            by = name;
        }
        if (fixed) partial[c.edges] = *fixed;
    }
    auto o = complete_bias(d.graph, partial, fallback);
    if (!o) throw PreconditionError("infeasible", "the prescribed biases admit no completion");
    return *o;
}

}  // namespace

const char* family_name(FamilyKind k) { return info(k).name; }
const char* family_label(FamilyKind k) { return info(k).label; }

std::optional<FamilyKind> family_from_name(const std::string& s) {
    for (const auto& i : kInfo)
        if (s == i.name) return i.kind;
    return std::nullopt;
}

bool Certificate::ok() const {
    for (const auto& c : clauses)
        if (!c.ok) return false;
    return !clauses.empty();
}

std::string Certificate::failure() const {
    for (const auto& c : clauses)
        if (!c.ok) return c.name;
    return {};
}

Certificate verify_family(const BiasedGraph& o, const FamilyDescriptor& d) {
    Certificate cert;
    cert.descriptor = d;
    if (!(o.graph() == d.graph)) {
        cert.clauses.push_back({"graph", false, "descriptor graph differs from the input"});
        return cert;
    }
    cert.clauses.push_back({"graph", true, {}});
    Rules r;
    try {
        r = rules_for(d);
    } catch (const RoleError& e) {
        cert.clauses.push_back({"roles", false, e.what()});
        return cert;
    }
    cert.clauses.push_back({"roles", true, {}});
    bool shape_ok = true;
    for (const auto& [name, check] : r.shape) {
        std::string bad;
        try {
            bad = check();
        } catch (const ResourceLimit& e) {
            bad = std::string("undecided: ") + e.what();
        }
        cert.clauses.push_back({name, bad.empty(), bad});
        shape_ok = shape_ok && bad.empty();
    }
    if (!r.bias.empty()) {
        std::vector<Cycle> cycles = enumerate_cycles(o.graph());
        for (const auto& [name, rule] : r.bias) {
            ClauseResult res{name, true, {}};
            for (const Cycle& c : cycles) {
                auto want = rule(c);
                if (!want) continue;
                bool bal = o.is_balanced(c.edges);
                if (bal != (*want == Bias::Balanced)) {
                    res.ok = false;
                    res.detail = "cycle " + cycle_text(c) + (bal ? " is balanced" : " is unbalanced");
                    break;
                }
            }
            cert.clauses.push_back(res);
        }
    }
    for (const auto& [name, check] : r.whole) {
        std::string bad = check(o);
        cert.clauses.push_back({name, bad.empty(), bad});
    }
    (void)shape_ok;
    return cert;
}

bool satisfies_family(const BiasedGraph& o, const FamilyDescriptor& d, const CycleTable& table) {
    if (!(o.graph() == d.graph)) return false;
    Rules r;
    try {
        r = rules_for(d);
    } catch (const RoleError&) {
        return false;
    }
    auto is_planarity = [](const std::string& name) { return name.find("planar") != std::string::npos; };
    for (const auto& [name, check] : r.shape)
        if (!is_planarity(name) && !check().empty()) return false;
    for (const auto& [name, rule] : r.bias)
        for (std::size_t i = 0; i < table.size(); ++i) {
            auto want = rule(table.cycles[i]);
            if (want && (table.balanced[i] != 0) != (*want == Bias::Balanced)) return false;
        }
    for (const auto& [name, check] : r.whole)
        if (!check(o).empty()) return false;
    for (const auto& [name, check] : r.shape)
        if (is_planarity(name) && !check().empty()) return false;
    return true;
}

BiasedGraph build_generalized_wheel(const FamilyDescriptor& d, Bias fallback) {
    return build_with(d, FamilyKind::GeneralizedWheel, fallback);
}
BiasedGraph build_criss_cross(const FamilyDescriptor& d, Bias fallback) {
    return build_with(d, FamilyKind::CrissCross, fallback);
}
BiasedGraph build_fat_triangle(const FamilyDescriptor& d, Bias fallback) {
    return build_with(d, FamilyKind::FatTriangle, fallback);
}
BiasedGraph build_pp_special_vertex(const FamilyDescriptor& d, Bias fallback) {
    return build_with(d, FamilyKind::PPSpecialVertex, fallback);
}
BiasedGraph build_pp_special_pair(const FamilyDescriptor& d, Bias fallback) {
    return build_with(d, FamilyKind::PPSpecialPair, fallback);
}
BiasedGraph build_pp_special_triple(const FamilyDescriptor& d, Bias fallback) {
    return build_with(d, FamilyKind::PPSpecialTriple, fallback);
}
BiasedGraph build_tricoloured(const FamilyDescriptor& d, Bias fallback) {
    return build_with(d, FamilyKind::Tricoloured, fallback);
}

FamilyDescriptor k5_descriptor(const std::vector<int>& mults) {
    if (mults.size() != 10) throw PreconditionError("shape", "k5 needs ten multiplicities");
    FamilyDescriptor d;
    d.kind = FamilyKind::K5Parallel;
    d.graph = MultiGraph(5);
    int idx = 0;
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j, ++idx) {
            if (mults[idx] < 1) throw PreconditionError("shape", "multiplicity below one");
            for (int c = 0; c < mults[idx]; ++c) d.graph.add_edge(i, j);
        }
    for (int i = 0; i < 5; ++i) d.v[key("k", i + 1)] = i;
    d.mults = mults;
    return d;
}

BiasedGraph build_k5_family(const std::vector<int>& mults) {
    FamilyDescriptor d = k5_descriptor(mults);
    const MultiGraph& g = d.graph;
    // An unbalanced digon forces every cycle avoiding its ends to be balanced.
    std::vector<std::pair<VertexId, VertexId>> doubled;
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j)
            if (g.edges_between(i, j).count() > 1) doubled.emplace_back(i, j);
    if (doubled.empty()) return {g, AllUnbalanced{}};
    PartialBias partial;
    for (const Cycle& c : enumerate_cycles(g)) {
        if (c.length() == 2) {
            partial[c.edges] = Bias::Unbalanced;
            continue;
        }
        for (auto [a, b] : doubled)
            if (!c.verts.test(a) && !c.verts.test(b)) partial[c.edges] = Bias::Balanced;
    }
    auto o = complete_bias(g, partial, Bias::Unbalanced);
    if (!o) throw PreconditionError("infeasible", "parallel classes on disjoint pairs cannot all be unbalanced");
    return *o;
}

BiasedGraph build_pp_signed(const FamilyDescriptor& d) {
    checked_rules(d, FamilyKind::PPSigned);
    EdgeSet f;
    for (EdgeId e : d.sequence) f.set(e);
    return make_signed(d.graph, f);
}

BiasedGraph build_family(const FamilyDescriptor& d, Bias fallback) {
    switch (d.kind) {
        case FamilyKind::K5Parallel:
            checked_rules(d, FamilyKind::K5Parallel);
            return build_k5_family(d.mults);
        case FamilyKind::PPSigned: return build_pp_signed(d);
        default: return build_with(d, d.kind, fallback);
    }
}

namespace {

struct Maker {
    FamilyDescriptor d;
    Maker(FamilyKind k, int n) {
        d.kind = k;
        d.graph = MultiGraph(n);
    }
    EdgeId edge(VertexId a, VertexId b) { return d.graph.add_edge(a, b); }
    EdgeSet path(std::initializer_list<VertexId> vs, bool closed = false) {
        std::vector<VertexId> p(vs);
        EdgeSet s;
        for (std::size_t i = 0; i + 1 < p.size(); ++i) s.set(edge(p[i], p[i + 1]));
        if (closed) s.set(edge(p.back(), p.front()));
        return s;
    }
};

FamilyDescriptor wheel_example(int setting) {
    if (setting == 0) {
        Maker m(FamilyKind::GeneralizedWheel, 4);
        m.d.es["G1"] = m.path({3, 1});
        m.d.es["G2"] = m.path({1, 2});
        m.d.es["G3"] = m.path({2, 3});
        for (int i = 1; i <= 3; ++i) {
            m.d.v[key("z", i)] = i;
            m.edge(0, i);
            m.edge(0, i);
        }
        m.d.v["w"] = 0;
        return m.d;
    }
    if (setting == 1) {
        Maker m(FamilyKind::GeneralizedWheel, 5);
        m.d.es["G1"] = m.path({1, 2, 3, 4}, true);
        m.d.es["G2"] = m.path({1, 3});
        m.d.v["w"] = 0;
        m.d.v["z1"] = 1;
        m.d.v["z2"] = 3;
        m.d.vs["X1"] = VertexSet{2};
        m.d.vs["Y1"] = VertexSet{4};
        m.edge(0, 2);
        m.edge(0, 4);
        m.edge(0, 1);
        return m.d;
    }
    Maker m(FamilyKind::GeneralizedWheel, 6);
    m.d.es["G1"] = m.path({3, 4, 1, 5}, true);
    m.d.es["G2"] = m.path({1, 2});
    m.d.es["G3"] = m.path({2, 3});
    m.d.v["w"] = 0;
    m.d.v["z1"] = 1;
    m.d.v["z2"] = 2;
    m.d.v["z3"] = 3;
    m.d.vs["X1"] = VertexSet{4};
    m.d.vs["Y1"] = VertexSet{5};
    m.edge(0, 4);
    m.edge(0, 5);
    m.edge(0, 2);
    m.edge(0, 2);
    return m.d;
}

FamilyDescriptor criss_cross_example(int setting) {
    Maker m(FamilyKind::CrissCross, setting == 0 ? 5 : 6);
    EdgeSet h = m.path({1, 2, 3, 4}, setting != 2);
    if (setting == 1)
        for (int u = 1; u <= 4; ++u) h.set(m.edge(5, u));
    if (setting == 2) {
        h |= m.path({4, 5, 1});
        h.set(m.edge(2, 5));
    }
    m.d.es["H"] = h;
    m.d.v["w"] = 0;
    for (int i = 1; i <= 4; ++i) {
        m.d.v[key("u", i)] = i;
        m.d.e[key("e", i)] = m.edge(0, i);
    }
    m.d.e["f1"] = m.edge(1, 3);
    m.d.e["f2"] = m.edge(2, 4);
    return m.d;
}

FamilyDescriptor fat_triangle_example(int setting) {
    if (setting == 0 || setting == 1) {
        Maker m(FamilyKind::FatTriangle, setting == 0 ? 3 : 4);
        EdgeSet h = m.path({0, 1, 2}, true);
        if (setting == 1)
            for (int u = 0; u < 3; ++u) h.set(m.edge(u, 3));
        m.d.es["H"] = h;
        m.d.es["F12"] = m.path({0, 1});
        m.d.es["F23"] = m.path({1, 2});
        m.d.es["F31"] = m.path({2, 0});
        m.d.v["v1"] = 0;
        m.d.v["v2"] = 1;
        m.d.v["v3"] = 2;
        return m.d;
    }
    Maker m(FamilyKind::FatTriangle, 5);
    m.d.es["H"] = m.path({0, 1, 2, 3, 4}, true);
    m.d.es["F12"] = m.path({0, 1}) | m.path({0, 1});
    m.d.es["F23"] = m.path({1, 3});
    m.d.es["F31"] = m.path({3, 0});
    m.d.v["v1"] = 0;
    m.d.v["v2"] = 1;
    m.d.v["v3"] = 3;
    return m.d;
}

FamilyDescriptor special_vertex_example(int setting) {
    const int mm = setting == 0 ? 1 : 2;
    Maker m(FamilyKind::PPSpecialVertex, 1 + 2 * (mm + 2));
    // H1 on 1..mm+2 (x's, u1, z2), H2 on mm+3..2mm+4 (y's, z1, u2)
    const int a = 1, b = mm + 3;
    std::vector<VertexId> h1, h2;
    for (int i = 0; i < mm + 2; ++i) {
        h1.push_back(a + i);
        h2.push_back(b + i);
    }
    EdgeSet e1, e2;
    for (std::size_t i = 0; i + 1 < h1.size(); ++i) {
        e1.set(m.edge(h1[i], h1[i + 1]));
        e2.set(m.edge(h2[i], h2[i + 1]));
    }
    if (setting == 2) {
        e1.set(m.edge(h1.back(), h1.front()));
        e2.set(m.edge(h2.back(), h2.front()));
    }
    const VertexId u1 = h1[mm], z2 = h1[mm + 1], z1 = h2[mm], u2 = h2[mm + 1];
    m.d.vs["H1"] = VertexSet::of(h1);
    m.d.vs["H2"] = VertexSet::of(h2);
    m.d.es["H1"] = e1;
    m.d.es["H2"] = e2;
    m.d.v["w"] = 0;
    m.d.v["u1"] = u1;
    m.d.v["u2"] = u2;
    m.d.v["z1"] = z1;
    m.d.v["z2"] = z2;
    m.d.e["z1z2"] = m.edge(z1, z2);
    m.d.e["u1u2"] = m.edge(u1, u2);
    m.d.e["wz1"] = m.edge(0, z1);
    m.d.e["wz2"] = m.edge(0, z2);
    m.d.e["g1"] = m.edge(0, u1);
    m.d.e["g2"] = m.edge(0, u2);
    for (int i = 0; i < mm; ++i) m.d.pairing.push_back(h1[i]);
    for (int i = 0; i < mm; ++i) m.d.pairing.push_back(h2[i]);
    for (int i = 0; i < mm; ++i) m.d.sequence.push_back(m.edge(h1[i], h2[i]));
    return m.d;
}

FamilyDescriptor special_pair_example(int setting) {
    const int n = 4 + setting;
    Maker m(FamilyKind::PPSpecialPair, n);
    std::vector<VertexId> ring;
    for (int i = 0; i < n; ++i) ring.push_back(i);
    EdgeSet h;
    for (int i = 0; i < n; ++i) h.set(m.edge(i, (i + 1) % n));
    VertexSet xs, ys;
    if (setting == 0) {
        xs = {2};
        ys = {3};
    } else if (setting == 1) {
        xs = {2, 3};
        ys = {4};
    } else {
        xs = {2, 3};
        ys = {4, 5};
    }
    EdgeSet fx, fy, ee;
    xs.for_each([&](int v) { fx.set(m.edge(0, v)); });
    ys.for_each([&](int v) { fy.set(m.edge(1, v)); });
    if (setting > 0) ee.set(m.edge(0, 1));
    m.d.v["x"] = 0;
    m.d.v["y"] = 1;
    m.d.vs["X"] = xs;
    m.d.vs["Y"] = ys;
    m.d.es["H"] = h;
    m.d.es["Fx"] = fx;
    m.d.es["Fy"] = fy;
    m.d.es["E"] = ee;
    return m.d;
}

FamilyDescriptor special_triple_example(int setting) {
    const int n = setting == 2 ? 5 : 4;
    Maker m(FamilyKind::PPSpecialTriple, n);
    EdgeSet h;
    for (int i = 0; i < n; ++i) h.set(m.edge(i, (i + 1) % n));
    VertexSet xs = setting == 2 ? VertexSet{3, 4} : VertexSet{3};
    EdgeSet f, ee, gg;
    xs.for_each([&](int v) { f.set(m.edge(1, v)); });
    ee.set(m.edge(1, 0));
    if (setting == 2) ee.set(m.edge(1, 0));
    if (setting == 1) gg.set(m.edge(1, 2));
    m.d.v["y1"] = 0;
    m.d.v["x"] = 1;
    m.d.v["y2"] = 2;
    m.d.vs["X"] = xs;
    m.d.es["H"] = h;
    m.d.es["F"] = f;
    m.d.es["E"] = ee;
    m.d.es["G"] = gg;
    m.d.e["f"] = m.edge(0, 2);
    return m.d;
}

FamilyDescriptor tricoloured_example(int setting) {
    Maker m(FamilyKind::Tricoloured, setting == 2 ? 7 : 6);
    // H_i joins c_{i-1} and c_i; in setting 2, H4 is the path c3 - 6 - c4
    for (int i = 1; i <= 6; ++i) {
        VertexId a = i - 1, b = i % 6;
        if (setting == 2 && i == 4) {
            m.d.es["H4"] = m.path({a, 6, b});
            m.d.vs["H4"] = VertexSet{a, 6, b};
        } else {
            m.d.es[key("H", i)] = m.path({a, b});
            m.d.vs[key("H", i)] = VertexSet{a, b};
        }
        m.d.v[key("z", i)] = b;
    }
    auto colour = [&](int i, VertexId x, std::initializer_list<VertexId> ys) {
        m.d.v[key("x", i)] = x;
        VertexSet y;
        EdgeSet es;
        for (VertexId t : ys) {
            y.set(t);
            es.set(m.edge(x, t));
        }
        m.d.vs[key("Y", i)] = y;
        m.d.es[key("E", i)] = es;
    };
    if (setting == 1) {
        m.d.index = {1, 3, 5};
        colour(1, 0, {3});
        colour(3, 2, {5});
        colour(5, 4, {1});
    } else {
        m.d.index = {1, 2, 3};
        if (setting == 2)
            colour(1, 1, {6, 4});
        else
            colour(1, 1, {4});
        colour(2, 2, {5});
        colour(3, 3, {0});
    }
    return m.d;
}

FamilyDescriptor pp_signed_example(int setting) {
    const int n = setting == 1 ? 8 : 6;
    Maker m(FamilyKind::PPSigned, n);
    EdgeSet b;
    for (int i = 0; i < n; ++i) b.set(m.edge(i, (i + 1) % n));
    if (setting == 2) b.set(m.edge(1, 3));
    const int half = n / 2;
    for (int i = 0; i < half; ++i) m.d.pairing.push_back(i);
    for (int i = 0; i < half; ++i) m.d.pairing.push_back(half + i);
    for (int i = 0; i < half; ++i) m.d.sequence.push_back(m.edge(i, half + i));
    m.d.es["B"] = b;
    return m.d;
}

}  // namespace

FamilyDescriptor example_descriptor(FamilyKind k, int setting) {
    if (setting < 0 || setting >= kExampleSettings) throw PreconditionError("shape", "example setting out of range");
    switch (k) {
        case FamilyKind::GeneralizedWheel: return wheel_example(setting);
        case FamilyKind::CrissCross: return criss_cross_example(setting);
        case FamilyKind::FatTriangle: return fat_triangle_example(setting);
        case FamilyKind::PPSpecialVertex: return special_vertex_example(setting);
        case FamilyKind::PPSpecialPair: return special_pair_example(setting);
        case FamilyKind::PPSpecialTriple: return special_triple_example(setting);
        case FamilyKind::Tricoloured: return tricoloured_example(setting);
        case FamilyKind::PPSigned: return pp_signed_example(setting);
        case FamilyKind::K5Parallel: {
            std::vector<int> mults(10, 1);
            if (setting >= 1) mults[0] = 2;
            if (setting == 2) mults[4] = 2;
            return k5_descriptor(mults);
        }
    }
    throw PreconditionError("shape", "unknown family");
}

bool disk_planar(const MultiGraph& g, const std::vector<VertexId>& order) {
    for (VertexId v : order)
        if (!g.has_vertex(v)) throw PreconditionError("unknown-vertex", "order names a vertex not in the graph");
    std::vector<VertexId> ord = normalize_order(order);
    if (ord.size() <= 1) return planar_embedding(g).has_value();
    // The boundary of the disk becomes a rim through the order vertices.
    MultiGraph h = g;
    for (std::size_t i = 0; i < ord.size(); ++i) {
        VertexId a = ord[i], b = ord[(i + 1) % ord.size()];
        if (ord.size() == 2 && i == 1) break;
        h.add_edge(a, b);
    }
    return ordered_planarity(h, ord).has_value();
}

// ----------------------------------------------------------------- t-sum

SumResult t_sum(const BiasedGraph& o1, const BiasedGraph& o2, int t, const SumGlue& glue) {
    const MultiGraph& g1 = o1.graph();
    const MultiGraph& g2 = o2.graph();
    if (t < 1 || t > 3) throw PreconditionError("shape", "t must be 1, 2 or 3");
    if (static_cast<int>(glue.verts.size()) != t) throw PreconditionError("shape", "glue must list t vertex pairs");
    const std::size_t want_kt = t == 1 ? 0 : (t == 2 ? 1 : 3);
    if (glue.kt.size() != want_kt) throw PreconditionError("shape", "glue must list the K_t edges");
    if (g1.num_vertices() <= t || g2.num_vertices() <= t) throw PreconditionError("size", "each summand needs more than t vertices");
    if (!is_balanced_graph(o2)) throw PreconditionError("unbalanced-summand", "the second summand must be balanced");

    std::vector<VertexId> vmap(g2.vertex_bound(), -1);
    VertexSet side1, side2;
    for (auto [a, b] : glue.verts) {
        if (!g1.has_vertex(a) || !g2.has_vertex(b)) throw PreconditionError("unknown-vertex", "glue names a missing vertex");
        if (side1.test(a) || side2.test(b)) throw PreconditionError("shape", "glue repeats a vertex");
        side1.set(a);
        side2.set(b);
        vmap[b] = a;
    }
    EdgeSet kt1, kt2;
    for (auto [e1, e2] : glue.kt) {
        if (!g1.has_edge(e1) || !g2.has_edge(e2)) throw PreconditionError("unknown-edge", "glue names a missing edge");
        const Edge& a = g1.edge(e1);
        const Edge& b = g2.edge(e2);
        if (a.is_loop() || !side1.test(a.u) || !side1.test(a.v) || b.is_loop() || !side2.test(b.u) ||
            !side2.test(b.v) || std::minmax(a.u, a.v) != std::minmax(vmap[b.u], vmap[b.v]))
            throw PreconditionError("shape", "glue edges do not match the identified vertices");
        if (kt1.test(e1) || kt2.test(e2)) throw PreconditionError("shape", "glue repeats an edge");
        kt1.set(e1);
        kt2.set(e2);
    }
    if (t == 3) {
        std::set<std::pair<VertexId, VertexId>> pairs;
        kt1.for_each([&](int e) { pairs.insert(std::minmax(g1.edge(e).u, g1.edge(e).v)); });
        if (pairs.size() != 3) throw PreconditionError("shape", "glue edges do not form a triangle");
        if (!o1.is_balanced(kt1)) throw PreconditionError("unbalanced-kt", "the triangle of the first summand is unbalanced");
    }

    const int vfresh0 = std::max(g1.vertex_bound(), g2.vertex_bound());
    const int efresh0 = std::max(g1.edge_bound(), g2.edge_bound());
    int vfresh = vfresh0, efresh = efresh0;
    MultiGraph g;
    for (VertexId v : g1.vertices()) g.add_vertex_with_id(v);
    for (VertexId v : g2.vertices()) {
        if (vmap[v] >= 0) continue;
        vmap[v] = g1.has_vertex(v) ? vfresh++ : v;
        g.add_vertex_with_id(vmap[v]);
    }
    EdgeSet from1, from2;
    for (EdgeId e : g1.edges()) {
        if (kt1.test(e)) continue;
        g.add_edge_with_id(e, g1.edge(e).u, g1.edge(e).v);
        from1.set(e);
    }
    std::vector<EdgeId> emap(g2.edge_bound(), -1);
    std::vector<EdgeId> back(kMaxIds, -1);
    for (EdgeId e : g2.edges()) {
        if (kt2.test(e)) continue;
        EdgeId id = (e < g1.edge_bound() && (g1.has_edge(e) || kt1.test(e))) ? efresh++ : e;
        emap[e] = id;
        back[id] = e;
        g.add_edge_with_id(id, vmap[g2.edge(e).u], vmap[g2.edge(e).v]);
        from2.set(id);
    }

    auto kt_edge = [&](const MultiGraph& h, const EdgeSet& kt, VertexId a, VertexId b) {
        EdgeId found = -1;
        kt.for_each([&](int e) {
            if (joins(h, e, a, b)) found = e;
        });
        return found;
    };
    ExplicitBias bias;
    for (const Cycle& c : enumerate_cycles(g)) {
        EdgeSet p1 = c.edges & from1;
        EdgeSet p2 = c.edges & from2;
        EdgeSet p2back;
        p2.for_each([&](int e) { p2back.set(back[e]); });
        bool bal;
        if (p2.empty()) {
            bal = o1.is_balanced(p1);
        } else if (p1.empty()) {
            bal = o2.is_balanced(p2back);
        } else {
            // Each side meets the cycle in one path between two glued vertices.
            VertexId ends[2];
            int n = 0;
            for (VertexId v : g.endpoints(p1).to_vector()) {
                int deg = 0;
                for (EdgeId e : g.incident(v))
                    if (p1.test(e)) ++deg;
                if (deg == 1 && n < 2) ends[n++] = v;
            }
            if (n != 2) throw std::logic_error("t-sum cycle crosses the joint more than twice");
            VertexId b0 = -1, b1 = -1;
            for (auto [a, b] : glue.verts) {
                if (a == ends[0]) b0 = b;
                if (a == ends[1]) b1 = b;
            }
            EdgeId e1 = kt_edge(g1, kt1, ends[0], ends[1]);
            EdgeId e2 = kt_edge(g2, kt2, b0, b1);
            if (e1 < 0 || e2 < 0) throw std::logic_error("t-sum cycle crosses outside the joint");
            EdgeSet c1 = p1, c2 = p2back;
            c1.set(e1);
            c2.set(e2);
            bal = o1.is_balanced(c1) && o2.is_balanced(c2);
        }
        if (bal) bias.balanced.insert(c.edges);
    }
    return {BiasedGraph(std::move(g), std::move(bias)), std::move(vmap), std::move(emap)};
}

}  // namespace tangle
