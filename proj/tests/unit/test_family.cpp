#include "doctest.h"
#include "oracles.hpp"
#include "tangle/config.hpp"
#include "tangle/family.hpp"
#include "tangle/tangle.hpp"

using namespace tangle;

TEST_CASE("every example builds, verifies and is tangled") {
    for (FamilyKind k : kAllFamilies)
        for (int s = 0; s < kExampleSettings; ++s) {
            std::string fam = family_name(k);
            CAPTURE(fam);
            CAPTURE(s);
            FamilyDescriptor d = example_descriptor(k, s);
            BiasedGraph o = build_family(d);
            Certificate c = verify_family(o, d);
            CAPTURE(c.failure());
            CHECK(c.ok());
            CHECK(oracle::tangled_by_definition(o));
            CHECK(oracle::theta_by_definition(o));
            CHECK(is_simple(o));
        }
}

namespace {

bool shape_error(const FamilyDescriptor& d) {
    try {
        build_family(d);
    } catch (const PreconditionError& e) {
        return e.kind() == "shape";
    }
    return false;
}

}  // namespace

TEST_CASE("criss-cross rejects a crossing order of the u vertices") {
    FamilyDescriptor d = example_descriptor(FamilyKind::CrissCross, 0);
    std::swap(d.v["u2"], d.v["u3"]);
    std::swap(d.e["e2"], d.e["e3"]);
    CHECK(shape_error(d));
}

TEST_CASE("fat triangle needs every F set") {
    FamilyDescriptor d = example_descriptor(FamilyKind::FatTriangle, 0);
    d.es["H"] |= d.es["F12"];
    d.es["F12"] = EdgeSet{};
    CHECK(shape_error(d));
}

TEST_CASE("tricoloured needs distinct x vertices") {
    FamilyDescriptor d = example_descriptor(FamilyKind::Tricoloured, 0);
    d.v["x2"] = d.v["x1"];
    CHECK(shape_error(d));
}

TEST_CASE("generalized wheel with a part violating the planarity clause") {
    // G1 = K4 cannot carry z2, X1, z1, Y1 on one face
    FamilyDescriptor d;
    d.kind = FamilyKind::GeneralizedWheel;
    d.graph = MultiGraph(5);
    EdgeSet g1;
    for (int a = 1; a <= 4; ++a)
        for (int b = a + 1; b <= 4; ++b) g1.set(d.graph.add_edge(a, b));
    EdgeSet g2;
    g2.set(d.graph.add_edge(1, 3));
    d.graph.add_edge(0, 2);
    d.graph.add_edge(0, 4);
    d.es["G1"] = g1;
    d.es["G2"] = g2;
    d.v["w"] = 0;
    d.v["z1"] = 1;
    d.v["z2"] = 3;
    d.vs["X1"] = VertexSet{2};
    d.vs["Y1"] = VertexSet{4};
    CHECK(shape_error(d));
    Certificate c = verify_family(BiasedGraph(d.graph, AllUnbalanced{}), d);
    CHECK_FALSE(c.ok());
    CHECK(c.failure() == "(e) planar");
}

TEST_CASE("a descriptor of one family fails on another family") {
    BiasedGraph fat = build_family(example_descriptor(FamilyKind::FatTriangle, 1));
    FamilyDescriptor cc = example_descriptor(FamilyKind::CrissCross, 0);
    Certificate c = verify_family(fat, cc);
    CHECK_FALSE(c.ok());
    CHECK(c.failure() == "graph");
    // same graph, wrong bias: a criss-cross descriptor on an all-unbalanced graph
    Certificate c2 = verify_family(BiasedGraph(cc.graph, AllUnbalanced{}), cc);
    CHECK_FALSE(c2.ok());
    CHECK(c2.failure() == "H balanced");
}

TEST_CASE("criss-cross roles rotated by one step still verify") {
    FamilyDescriptor d = example_descriptor(FamilyKind::CrissCross, 0);
    BiasedGraph o = build_family(d);
    FamilyDescriptor r = d;
    for (int i = 1; i <= 4; ++i) {
        int j = i % 4 + 1;
        r.v["u" + std::to_string(i)] = d.v["u" + std::to_string(j)];
        r.e["e" + std::to_string(i)] = d.e["e" + std::to_string(j)];
    }
    r.e["f1"] = d.e["f2"];
    r.e["f2"] = d.e["f1"];
    CHECK(verify_family(o, r).ok());
}

TEST_CASE("pp-signed with a single cross edge has a blocking vertex") {
    FamilyDescriptor d;
    d.kind = FamilyKind::PPSigned;
    d.graph = oracle::cycle_graph(4);
    d.es["B"] = d.graph.edge_set();
    d.pairing = {0, 2};
    d.sequence = {d.graph.add_edge(0, 2)};
    BiasedGraph o = build_pp_signed(d);
    CHECK(verify_family(o, d).ok());
    CHECK(is_tangled(o).kind == TangleVerdict::Kind::HasBlockingVertex);
}

TEST_CASE("K5 family") {
    std::vector<int> ones(10, 1);
    BiasedGraph k5 = build_k5_family(ones);
    CHECK(is_tangled(k5).tangled());
    CHECK(simplify(k5).graph() == k5.graph());
    std::vector<int> two = ones;
    two[0] = 2;
    BiasedGraph k5p = build_k5_family(two);
    CHECK(oracle::tangled_by_definition(k5p));
    CHECK(simplify(k5p).graph() == k5p.graph());
    // unbalanced digons on disjoint pairs would be disjoint unbalanced cycles
    std::vector<int> bad = ones;
    bad[0] = bad[9] = 2;
    CHECK_THROWS_AS(build_k5_family(bad), PreconditionError);
}

TEST_CASE("disk planarity") {
    MultiGraph c4 = oracle::cycle_graph(4);
    CHECK(disk_planar(c4, {0, 1, 2, 3}));
    CHECK_FALSE(disk_planar(c4, {0, 2, 1, 3}));
    // two disjoint edges on a common boundary
    MultiGraph two(4);
    two.add_edge(0, 1);
    two.add_edge(2, 3);
    CHECK(disk_planar(two, {0, 1, 2, 3}));
    CHECK_FALSE(disk_planar(two, {0, 2, 1, 3}));
    CHECK(disk_planar(oracle::complete(4), {0, 1, 2}));
    CHECK_FALSE(disk_planar(oracle::complete(4), {0, 1, 2, 3}));
}

namespace {

BiasedGraph balanced(const MultiGraph& g) { return BiasedGraph(g, AllBalanced{}); }

}  // namespace

TEST_CASE("1-sum of a fat triangle and a balanced triangle") {
    BiasedGraph fat = build_family(example_descriptor(FamilyKind::FatTriangle, 0));
    SumResult r = t_sum(fat, balanced(oracle::cycle_graph(3)), 1, {{{0, 0}}, {}});
    CHECK(r.sum.graph().num_vertices() == 5);
    CHECK(r.sum.graph().num_edges() == 9);
    CHECK(oracle::theta_by_definition(r.sum));
    CHECK(oracle::tangled_by_definition(r.sum));
}

TEST_CASE("2-sum across a shared edge") {
    FamilyDescriptor d = example_descriptor(FamilyKind::FatTriangle, 1);
    BiasedGraph fat = build_family(d);
    // an H edge at the fourth vertex, replaced by a balanced 4-cycle
    EdgeId e1 = -1;
    for (EdgeId e : fat.graph().edges())
        if (d.es["H"].test(e) && fat.graph().edge(e).v == 3) e1 = e;
    REQUIRE(e1 >= 0);
    MultiGraph c4 = oracle::cycle_graph(4);
    const Edge& ed = fat.graph().edge(e1);
    SumResult r = t_sum(fat, balanced(c4), 2, {{{ed.u, 0}, {ed.v, 1}}, {{e1, 0}}});
    CHECK(r.sum.graph().num_vertices() == 6);
    CHECK(oracle::theta_by_definition(r.sum));
    CHECK(oracle::tangled_by_definition(r.sum));
    CHECK(r.emap2[0] == -1);
    CHECK(r.vmap2[0] == ed.u);
}

TEST_CASE("3-sum with a balanced K4") {
    FamilyDescriptor d = example_descriptor(FamilyKind::CrissCross, 1);
    BiasedGraph cc = build_family(d);
    const MultiGraph& g = cc.graph();
    // triangle u1, u2, hub 5 of the wheel
    auto between = [&](VertexId a, VertexId b) { return g.edges_between(a, b).first(); };
    MultiGraph k4 = oracle::complete(4);
    auto kb = [&](VertexId a, VertexId b) { return k4.edges_between(a, b).first(); };
    SumGlue glue{{{1, 0}, {2, 1}, {5, 2}}, {{between(1, 2), kb(0, 1)}, {between(2, 5), kb(1, 2)}, {between(1, 5), kb(0, 2)}}};
    SumResult r = t_sum(cc, balanced(k4), 3, glue);
    CHECK(r.sum.graph().num_vertices() == 7);
    CHECK(r.sum.graph().num_edges() == g.num_edges() - 3 + 3);
    CHECK(oracle::theta_by_definition(r.sum));
    CHECK(oracle::tangled_by_definition(r.sum));
}

TEST_CASE("t-sum preconditions") {
    BiasedGraph fat = build_family(example_descriptor(FamilyKind::FatTriangle, 0));
    CHECK_THROWS_AS(t_sum(fat, fat, 1, {{{0, 0}}, {}}), PreconditionError);
    CHECK_THROWS_AS(t_sum(fat, balanced(oracle::cycle_graph(3)), 1, {}), PreconditionError);
    CHECK_THROWS_AS(t_sum(fat, balanced(MultiGraph(1)), 1, {{{0, 0}}, {}}), PreconditionError);
}
