#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tangle/bias.hpp"
#include "tangle/config.hpp"

using namespace tangle;

namespace {

// Theta property by direct scan over all cycle pairs.
bool theta_ok(const BiasedGraph& o) {
    auto cyc = enumerate_cycles(o.graph());
    for (std::size_t i = 0; i < cyc.size(); ++i)
        for (std::size_t j = i + 1; j < cyc.size(); ++j) {
            if (!forms_theta(cyc[i], cyc[j])) continue;
            bool a = o.is_balanced(cyc[i].edges), b = o.is_balanced(cyc[j].edges);
            bool c = o.is_balanced(cyc[i].edges ^ cyc[j].edges);
            if (a && b && !c) return false;
            if (a && !b && c) return false;
            if (!a && b && c) return false;
        }
    return true;
}

}  // namespace

TEST_CASE("signed bias satisfies the theta property") {
    std::mt19937 rng(1);
    for (int it = 0; it < 60; ++it) {
        MultiGraph g = oracle::random_graph(rng, 5, 8, true);
        BiasedGraph o = make_signed(g, oracle::random_subset(rng, g.edge_set()));
        CHECK(theta_ok(o));
        CHECK(validate_theta(o).ok);
    }
}

TEST_CASE("explicit bias theta violation is reported") {
    MultiGraph g = oracle::complete(4);
    auto cyc = enumerate_cycles(g);
    // two triangles of K4 sharing an edge, without the quadrilateral
    std::vector<EdgeSet> bal;
    for (auto& c : cyc)
        if (c.length() == 3 && c.verts.test(0) && c.verts.test(1)) bal.push_back(c.edges);
    REQUIRE(bal.size() == 2);
    auto chk = validate_theta(g, bal);
    CHECK(!chk.ok);
    REQUIRE(chk.violation);
    CHECK_THROWS_AS(make_explicit(g, bal), PreconditionError);
    EdgeSet notcycle;
    notcycle.set(0);
    CHECK_THROWS_AS(validate_theta(g, {notcycle}), PreconditionError);
}

TEST_CASE("complete_bias extends consistently") {
    std::mt19937 rng(2);
    for (int it = 0; it < 50; ++it) {
        MultiGraph g = oracle::random_connected(rng, 4 + it % 3, 2 + it % 3);
        BiasedGraph ref = make_signed(g, oracle::random_subset(rng, g.edge_set()));
        auto cyc = enumerate_cycles(g);
        PartialBias partial;
        for (auto& c : cyc)
            if (rng() % 3 == 0) partial[c.edges] = ref.bias(c);
        auto done = complete_bias(g, partial);
        REQUIRE(done);
        CHECK(theta_ok(*done));
        for (auto& [es, b] : partial) CHECK((done->is_balanced(es) == (b == Bias::Balanced)));
    }
}

TEST_CASE("complete_bias detects infeasible partial biases") {
    MultiGraph g = oracle::complete(4);
    auto cyc = enumerate_cycles(g);
    PartialBias partial;
    Cycle a = cyc[0];
    Cycle b;
    for (auto& c : cyc)
        if (c != a && forms_theta(a, c)) {
            b = c;
            break;
        }
    partial[a.edges] = Bias::Balanced;
    partial[b.edges] = Bias::Balanced;
    partial[a.edges ^ b.edges] = Bias::Unbalanced;
    CHECK(!complete_bias(g, partial).has_value());
}

TEST_CASE("reroute returns the third theta cycle") {
    MultiGraph g = oracle::complete(4);
    auto cyc = enumerate_cycles(g);
    for (auto& a : cyc)
        for (auto& b : cyc)
            if (forms_theta(a, b)) {
                Cycle c = reroute(g, a, b);
                CHECK(c.edges == (a.edges ^ b.edges));
            }
    CHECK_THROWS_AS(reroute(g, cyc[0], cyc[0]), PreconditionError);
}

TEST_CASE("simplify removes balanced loops and balanced parallels") {
    MultiGraph g(3);
    g.add_edge(0, 1);  // 0
    g.add_edge(0, 1);  // 1 balanced with 0
    g.add_edge(0, 1);  // 2 negative
    g.add_edge(1, 2);  // 3
    g.add_edge(2, 2);  // 4 positive loop
    g.add_edge(2, 2);  // 5 negative loop
    EdgeSet sig;
    sig.set(2);
    sig.set(5);
    BiasedGraph o = make_signed(g, sig);
    BiasedGraph s = simplify(o);
    CHECK(s.graph().num_edges() == 4);
    CHECK(s.graph().has_edge(0));
    CHECK(!s.graph().has_edge(1));
    CHECK(!s.graph().has_edge(4));
    CHECK(!is_simple(o));
    CHECK(is_simple(s));
    // every cycle of s keeps its bias
    for (auto& c : enumerate_cycles(s.graph())) CHECK(s.is_balanced(c.edges) == o.is_balanced(c.edges));
}

TEST_CASE("balanced graph detection matches cycle scan") {
    std::mt19937 rng(4);
    for (int it = 0; it < 100; ++it) {
        MultiGraph g = oracle::random_graph(rng, 5, 6, true);
        EdgeSet sig = oracle::random_subset(rng, g.edge_set(), 0.2);
        BiasedGraph o = make_signed(g, sig);
        bool want = true;
        for (auto& c : oracle::cycles_by_subsets(g))
            if ((c & sig).count() % 2) want = false;
        CHECK(is_balanced_graph(o) == want);
        BiasedGraph e(g, o.to_explicit());
        CHECK(is_balanced_graph(e) == want);
    }
}
