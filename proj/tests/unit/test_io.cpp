#include <regex>

#include "doctest.h"
#include "dot_grammar.hpp"
#include "oracles.hpp"
#include "tangle/config.hpp"
#include "tangle/io.hpp"

using namespace tangle;

namespace {

ParseError parse_error(const std::string& text) {
    try {
        parse(text);
    } catch (const ParseError& e) {
        return e;
    }
    FAIL("parsed without error: " << text);
    return ParseError("", 0, 0, "");
}

InstanceDocument example_document(FamilyKind k, int s) {
    FamilyDescriptor d = example_descriptor(k, s);
    InstanceDocument doc = from_biased(build_family(d));
    doc.family = d;
    return doc;
}

}  // namespace

TEST_CASE("minimal document round-trips") {
    const std::string text = "biasedgraph 1\nv 1\ne 0 0 0\nbias all-unbalanced\n";
    InstanceDocument d = parse(text);
    CHECK(serialize(d) == text);
    CHECK(parse(serialize(d)) == d);
    BiasedGraph o = to_biased(d);
    CHECK(o.graph().num_edges() == 1);
    CHECK(balance(o, EdgeSet{0}) == Bias::Unbalanced);
}

TEST_CASE("comments, blank lines and bal order are canonicalized") {
    InstanceDocument d = parse(
        "# a theta\n\nbiasedgraph 1\nv 2\ne 2 0 1\ne 0 0 1\n  e 1 1 0\nbias explicit\nbal 1 0\nbal 0 1\n# end\n");
    CHECK(d.bias.balanced.size() == 1);
    CHECK(serialize(d) == "biasedgraph 1\nv 2\ne 0 0 1\ne 1 1 0\ne 2 0 1\nbias explicit\nbal 0 1\n");
}

TEST_CASE("example descriptors round-trip through text") {
    for (FamilyKind k : kAllFamilies)
        for (int s = 0; s < kExampleSettings; ++s) {
            std::string fam = family_name(k);
            CAPTURE(fam);
            InstanceDocument d = example_document(k, s);
            std::string text = serialize(d);
            InstanceDocument back = parse(text);
            CHECK(back == d);
            CHECK(serialize(back) == text);
            BiasedGraph o = to_biased(back);
            CHECK(verify_family(o, *back.family).failure() == "");
        }
}

TEST_CASE("partial bias records are completed") {
    const std::string text =
        "biasedgraph 1\nv 2\ne 0 0 1\ne 1 0 1\ne 2 0 1\nbias partial\nbal 0 1\nunbal 1 2\ndefault balanced\n";
    InstanceDocument d = parse(text);
    CHECK(serialize(d) == text);
    BiasedGraph o = to_biased(d);
    CHECK(balance(o, EdgeSet{0, 1}) == Bias::Balanced);
    CHECK(balance(o, EdgeSet{0, 2}) == Bias::Unbalanced);
    CHECK(parse_error("biasedgraph 1\nv 2\ne 0 0 1\ne 1 0 1\ne 2 0 1\nbias partial\nbal 0 1\nbal 1 2\nunbal 0 2\n").kind() ==
          "semantic");
}

TEST_CASE("signed K5 document gives the all-negative K5") {
    std::string text = "biasedgraph 1\nv 5\n";
    int id = 0;
    std::string sig;
    for (int u = 0; u < 5; ++u)
        for (int v = u + 1; v < 5; ++v) {
            text += "e " + std::to_string(id) + " " + std::to_string(u) + " " + std::to_string(v) + "\n";
            sig += " " + std::to_string(id++);
        }
    text += "bias signed" + sig + "\n";
    InstanceDocument d = parse(text);
    CHECK(serialize(d) == text);
    BiasedGraph o = to_biased(d);
    CHECK(is_tangled(o).kind == TangleVerdict::Kind::Tangled);
    ClassificationReport r = classify(o);
    CHECK(r.has("T2"));
    CHECK(verify_report(o, r) == "");
}

TEST_CASE("theta violation is a semantic error naming the triple") {
    ParseError e = parse_error("biasedgraph 1\nv 2\ne 0 0 1\ne 1 0 1\ne 2 0 1\nbias explicit\nbal 0 1\nbal 1 2\n");
    CHECK(e.kind() == "semantic");
    CHECK(e.line() == 7);
    std::string msg = e.what();
    CHECK(msg.find("theta") != std::string::npos);
    CHECK(msg.find("{0 1}") != std::string::npos);
    CHECK(msg.find("{1 2}") != std::string::npos);
    CHECK(msg.find("{0 2}") != std::string::npos);
}

TEST_CASE("errors carry kind, line and column") {
    struct Case {
        const char* text;
        const char* kind;
        int line, column;
    };
    const Case cases[] = {
        {"graph 1\n", "syntax", 1, 1},
        {"biasedgraph 2\n", "semantic", 1, 13},
        {"biasedgraph 1\nv x\n", "syntax", 2, 3},
        {"biasedgraph 1\nv 2\ne 0 0 5\n", "semantic", 3, 7},
        {"biasedgraph 1\nv 2\ne 0 0 1\ne 0 1 0\n", "semantic", 4, 3},
        {"biasedgraph 1\nv 2\ne 0 0 1\nbias signed 3\n", "semantic", 4, 13},
        {"biasedgraph 1\nv 3\ne 0 0 1\ne 1 1 2\nbias explicit\nbal 0 1\n", "semantic", 6, 5},
        {"biasedgraph 1\nv 2\ne 0 0 1\nbias weird\n", "syntax", 4, 6},
        {"biasedgraph 1\nv 2\ne 0 0 1\nbias signed\nbal 0\n", "syntax", 5, 1},
        {"biasedgraph 1\nv 2\ne 0 0 1\nbias signed\nfamily nonsense\n", "semantic", 5, 8},
        {"biasedgraph 1\nv 2\ne 0 0 1\nbias signed\nfamily k5\nrole v k1 7\n", "semantic", 6, 11},
        {"biasedgraph 1\nv 2\ne 0 0 1\n", "syntax", 4, 1},
        {"biasedgraph 1\nv 2 3\n", "syntax", 2, 5},
    };
    for (const Case& c : cases) {
        CAPTURE(c.text);
        ParseError e = parse_error(c.text);
        CHECK(e.kind() == c.kind);
        CHECK(e.line() == c.line);
        CHECK(e.column() == c.column);
    }
}

TEST_CASE("from_biased needs contiguous vertices") {
    MultiGraph g(3);
    g.add_edge(0, 2);
    g = g.without_vertices(VertexSet{1});
    CHECK_THROWS_AS(from_biased(BiasedGraph(g, AllBalanced{})), PreconditionError);
}

TEST_CASE("dot output of a fat triangle") {
    BiasedGraph o = build_family(example_descriptor(FamilyKind::FatTriangle, 0));
    std::string dot = export_dot(o);
    CHECK(dot::well_formed(dot));
    std::regex node(R"(\n  v\d+ \[label=)");
    CHECK(std::distance(std::sregex_iterator(dot.begin(), dot.end(), node), std::sregex_iterator()) ==
          o.graph().num_vertices());
    std::regex edge(R"(\n  v\d+ -- v\d+ )");
    CHECK(std::distance(std::sregex_iterator(dot.begin(), dot.end(), edge), std::sregex_iterator()) ==
          o.graph().num_edges());
}

TEST_CASE("dot output of a pp-signed instance dashes the signature") {
    FamilyDescriptor d = example_descriptor(FamilyKind::PPSigned, 0);
    BiasedGraph o = build_family(d);
    ClassificationReport r = classify(o);
    std::string dot = export_dot(o, &r);
    CHECK(dot::well_formed(dot));
    const auto& sig = std::get<SignedBias>(o.spec()).signature;
    int dashed = 0;
    for (std::size_t p = dot.find("style=dashed"); p != std::string::npos; p = dot.find("style=dashed", p + 1)) ++dashed;
    CHECK(dashed == sig.count());
    CHECK(dot.find("color=red") != std::string::npos);
}

TEST_CASE("dot output parses for every example with its report") {
    for (FamilyKind k : kAllFamilies) {
        BiasedGraph o = build_family(example_descriptor(k, 1));
        ClassificationReport r = classify(o, LabelMode::First);
        std::string dot = export_dot(o, &r);
        CHECK(dot::well_formed(dot));
        CHECK(dot.find("label=\"T") != std::string::npos);
    }
    CHECK_FALSE(dot::well_formed("graph { a -- ; }"));
    CHECK_FALSE(dot::well_formed("graph { a [x=] }"));
}
