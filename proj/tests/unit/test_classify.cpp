#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tangle/classify.hpp"
#include "tangle/config.hpp"

using namespace tangle;

TEST_CASE("every example is classified with its own label") {
    for (FamilyKind k : kAllFamilies)
        for (int s = 0; s < kExampleSettings; ++s) {
            std::string fam = family_name(k);
            CAPTURE(fam);
            CAPTURE(s);
            BiasedGraph o = build_family(example_descriptor(k, s));
            auto c = recognize(o, k);
            REQUIRE(c.has_value());
            CHECK(verify_family(o, c->descriptor).ok());
            ClassificationReport r = classify(o);
            CHECK(r.has(family_label(k)));
            CHECK(verify_report(o, r) == "");
        }
}

TEST_CASE("balanced input gives an empty label set") {
    BiasedGraph o(oracle::complete(5), AllBalanced{});
    ClassificationReport r = classify(o);
    CHECK(r.verdict.kind == TangleVerdict::Kind::Balanced);
    CHECK(r.labels.empty());
}

TEST_CASE("classify preconditions") {
    MultiGraph two(4);
    two.add_edge(0, 1);
    two.add_edge(2, 3);
    CHECK_THROWS_AS(classify(BiasedGraph(two, AllUnbalanced{})), PreconditionError);
    MultiGraph dig(2);
    dig.add_edge(0, 1);
    dig.add_edge(0, 1);
    CHECK_THROWS_AS(classify(BiasedGraph(dig, AllBalanced{})), PreconditionError);
    CHECK_THROWS_AS(small_classify(BiasedGraph(oracle::complete(6), AllUnbalanced{})), PreconditionError);
}

TEST_CASE("small instances") {
    // three vertices: a fat triangle
    MultiGraph tri(3);
    tri.add_edge(0, 1);
    tri.add_edge(1, 2);
    tri.add_edge(2, 0);
    tri.add_edge(0, 1);
    tri.add_edge(1, 2);
    tri.add_edge(2, 0);
    BiasedGraph fat = build_family(example_descriptor(FamilyKind::FatTriangle, 0));
    CHECK(small_classify(fat).has("T1d"));
    BiasedGraph k5(oracle::complete(5), AllUnbalanced{});
    ClassificationReport r = small_classify(k5);
    CHECK(r.has("T2"));
    CHECK(verify_report(k5, r) == "");
}

TEST_CASE("first mode stops at one label") {
    BiasedGraph k5(oracle::complete(5), AllUnbalanced{});
    ClassificationReport r = classify(k5, LabelMode::First);
    CHECK(r.labels.size() == 1);
}

TEST_CASE("pp-signed instance carries a signature certificate") {
    BiasedGraph o = build_family(example_descriptor(FamilyKind::PPSigned, 0));
    auto sig = signed_signature(o);
    REQUIRE(sig.has_value());
    ClassificationReport r = classify(o);
    REQUIRE(r.has("T1a"));
    for (const auto& l : r.labels)
        if (l.label == "T1a") {
            EdgeSet f;
            for (EdgeId e : l.certificate->descriptor.sequence) f.set(e);
            for (const Cycle& c : enumerate_cycles(o.graph()))
                CHECK(o.is_balanced(c.edges) == ((c.edges & f).count() % 2 == 0));
        }
}

TEST_CASE("signature recovery") {
    std::mt19937 rng(7);
    for (int it = 0; it < 40; ++it) {
        MultiGraph g = oracle::random_connected(rng, 6, 5);
        EdgeSet sig = oracle::random_subset(rng, g.edge_set());
        BiasedGraph s = make_signed(g, sig);
        BiasedGraph x(g, s.to_explicit());
        auto rec = signed_signature(x);
        REQUIRE(rec.has_value());
        for (const Cycle& c : enumerate_cycles(g)) CHECK(((c.edges & *rec).count() % 2 == 0) == s.is_balanced(c.edges));
    }
    // K4 with every cycle unbalanced is not signed
    CHECK_FALSE(signed_signature(BiasedGraph(oracle::complete(4), AllUnbalanced{})).has_value());
}

TEST_CASE("oracle verdicts") {
    MultiGraph loops(2);
    loops.add_edge(0, 0);
    loops.add_edge(1, 1);
    loops.add_edge(0, 1);
    CHECK(oracle_is_tangled(BiasedGraph(loops, AllUnbalanced{})).kind == TangleVerdict::Kind::TwoDisjointUnbalanced);
    CHECK(oracle_is_tangled(BiasedGraph(oracle::complete(5), AllUnbalanced{})).tangled());
    CHECK(oracle_is_tangled(BiasedGraph(oracle::complete(4), AllBalanced{})).kind == TangleVerdict::Kind::Balanced);
    CHECK(oracle_is_tangled(BiasedGraph(oracle::cycle_graph(5), AllUnbalanced{})).kind ==
          TangleVerdict::Kind::HasBlockingVertex);
    CHECK_THROWS_AS(oracle_is_tangled(BiasedGraph(oracle::complete(10), AllUnbalanced{})), ResourceLimit);
}

TEST_CASE("oracle agrees with is_tangled on random graphs") {
    std::mt19937 rng(11);
    for (int it = 0; it < 150; ++it) {
        MultiGraph g = oracle::random_connected(rng, 3 + it % 5, it % 6);
        BiasedGraph o = make_signed(g, oracle::random_subset(rng, g.edge_set(), 0.3));
        CHECK(oracle_is_tangled(o).kind == is_tangled(o).kind);
    }
}

namespace {

BiasedGraph balanced(const MultiGraph& g) { return BiasedGraph(g, AllBalanced{}); }

}  // namespace

TEST_CASE("decompose splits a 1-sum and recomposes it") {
    BiasedGraph fat = build_family(example_descriptor(FamilyKind::FatTriangle, 0));
    SumResult s = t_sum(fat, balanced(oracle::cycle_graph(4)), 1, {{{0, 0}}, {}});
    SumDecomposition d = decompose(s.sum);
    REQUIRE(d.steps.size() >= 1);
    CHECK(d.steps[0].t == 1);
    CHECK(check_decomposition(s.sum, d) == "");
    BiasedGraph back = recompose(d);
    for (const Cycle& c : enumerate_cycles(s.sum.graph())) CHECK(back.is_balanced(c.edges) == s.sum.is_balanced(c.edges));
}

TEST_CASE("decompose on a 3-sum with a balanced K4") {
    FamilyDescriptor dd = example_descriptor(FamilyKind::CrissCross, 1);
    BiasedGraph cc = build_family(dd);
    const MultiGraph& g = cc.graph();
    MultiGraph k4 = oracle::complete(4);
    auto between = [&](VertexId a, VertexId b) { return g.edges_between(a, b).first(); };
    auto kb = [&](VertexId a, VertexId b) { return k4.edges_between(a, b).first(); };
    SumGlue glue{{{1, 0}, {2, 1}, {5, 2}}, {{between(1, 2), kb(0, 1)}, {between(2, 5), kb(1, 2)}, {between(1, 5), kb(0, 2)}}};
    SumResult s = t_sum(cc, balanced(k4), 3, glue);
    SumDecomposition d = decompose(s.sum);
    REQUIRE_FALSE(d.steps.empty());
    CHECK(check_decomposition(s.sum, d) == "");
    ClassificationReport r = classify(s.sum);
    CHECK(r.has("T3"));
    CHECK(verify_report(s.sum, r) == "");
}

TEST_CASE("decompose stops at once on a 4-connected input") {
    BiasedGraph k5(oracle::complete(5), AllUnbalanced{});
    SumDecomposition d = decompose(k5);
    CHECK(d.steps.empty());
    CHECK(d.core_kind == CoreKind::FourConnected);
    CHECK_THROWS_AS(decompose(BiasedGraph(oracle::complete(4), AllBalanced{})), PreconditionError);
}

TEST_CASE("decompose ends on a wheel core") {
    BiasedGraph w = build_family(example_descriptor(FamilyKind::GeneralizedWheel, 0));
    SumDecomposition d = decompose(w);
    if (d.steps.empty()) {
        CHECK(d.core_kind == CoreKind::GeneralizedWheel);
        REQUIRE(d.wheel.has_value());
        CHECK(verify_family(d.core, d.wheel->descriptor).ok());
    }
    CHECK(check_decomposition(w, d) == "");
}

TEST_CASE("balanced base search") {
    BiasedGraph pp = build_family(example_descriptor(FamilyKind::PPSigned, 0));
    if (is_k_connected(pp.graph(), 4)) {
        BaseOutcome b = find_balanced_base(pp);
        REQUIRE(b.base.has_value());
        CHECK(is_two_connected(pp.graph().spanning_with(b.base->base)));
    }
    CHECK_THROWS_AS(find_balanced_base(BiasedGraph(oracle::complete(6), AllBalanced{})), PreconditionError);
    // K6 signed with a perfect-matching signature
    MultiGraph k6 = oracle::complete(6);
    EdgeSet sig;
    sig.set(k6.edges_between(0, 1).first());
    sig.set(k6.edges_between(2, 3).first());
    sig.set(k6.edges_between(4, 5).first());
    BiasedGraph o = make_signed(k6, sig);
    if (is_tangled(o).tangled()) {
        BaseOutcome b = find_balanced_base(o);
        CHECK((b.base.has_value() || b.exception.has_value()));
        BaseOutcome p = find_planar_balanced_base(o);
        if (p.base) {
            REQUIRE(p.base->embedding.has_value());
            CHECK(verify_ordered_embedding(k6.spanning_with(p.base->base), *p.base->embedding));
        }
    }
}
