#pragma once

#include <map>
#include <optional>
#include <unordered_set>
#include <variant>
#include <vector>

#include "tangle/graph.hpp"

namespace tangle {

enum class Bias { Balanced, Unbalanced };

struct SignedBias {
    EdgeSet signature;
};
// Balanced cycles listed by edge set; every other cycle is unbalanced.
struct ExplicitBias {
    std::unordered_set<EdgeSet> balanced;
};
struct AllBalanced {};
struct AllUnbalanced {};

using BiasSpec = std::variant<ExplicitBias, SignedBias, AllBalanced, AllUnbalanced>;

class BiasedGraph {
public:
    BiasedGraph() = default;
    // No theta check here; use make_signed / make_explicit for checked input.
    BiasedGraph(MultiGraph g, BiasSpec spec) : g_(std::move(g)), spec_(std::move(spec)) {}

    const MultiGraph& graph() const { return g_; }
    const BiasSpec& spec() const { return spec_; }

    bool is_balanced(const EdgeSet& cycle_edges) const;
    Bias bias(const Cycle& c) const { return is_balanced(c.edges) ? Bias::Balanced : Bias::Unbalanced; }

    BiasedGraph without_vertices(const VertexSet& x) const { return {g_.without_vertices(x), spec_}; }
    BiasedGraph without_edges(const EdgeSet& es) const { return {g_.without_edges(es), spec_}; }
    BiasedGraph induced(const VertexSet& x) const { return {g_.induced(x), spec_}; }
    BiasedGraph edge_induced(const EdgeSet& es) const { return {g_.edge_induced(es), spec_}; }
    BiasedGraph spanning_with(const EdgeSet& es) const { return {g_.spanning_with(es), spec_}; }

    // Drops stored data about cycles that no longer exist in the graph.
    BiasedGraph compacted() const;
    // Balanced cycles of the graph, enumerated.
    ExplicitBias to_explicit() const;

private:
    MultiGraph g_;
    BiasSpec spec_;
};

// Every cycle with its bias, in enumerate_cycles order.
struct CycleTable {
    std::vector<Cycle> cycles;
    std::vector<char> balanced;
    std::size_t size() const { return cycles.size(); }
};
CycleTable cycle_table(const BiasedGraph& o);

BiasedGraph make_signed(const MultiGraph& g, const EdgeSet& signature);

struct ThetaCheck {
    bool ok = true;
    std::optional<Theta> violation;
};

// Checks the theta property for the given balanced set. Throws
// PreconditionError when a listed edge set is not a cycle of g.
ThetaCheck validate_theta(const MultiGraph& g, const std::vector<EdgeSet>& balanced);
ThetaCheck validate_theta(const BiasedGraph& o);

// Explicit biased graph after a theta check; throws PreconditionError("theta")
// on a violation.
BiasedGraph make_explicit(const MultiGraph& g, const std::vector<EdgeSet>& balanced);

Bias balance(const BiasedGraph& o, const Cycle& c);
Bias balance(const BiasedGraph& o, const EdgeSet& cycle_edges);

// Third cycle of the theta c1 ∪ c2.
Cycle reroute(const MultiGraph& g, const Cycle& c1, const Cycle& c2);

using PartialBias = std::map<EdgeSet, Bias>;

// Extends `partial` to a full bias satisfying the theta property, preferring
// `fallback` for unconstrained cycles. Returns nullopt when no extension exists.
std::optional<BiasedGraph> complete_bias(const MultiGraph& g, const PartialBias& partial,
                                         Bias fallback = Bias::Unbalanced);

// Deletes balanced loops and keeps the least edge of each balanced parallel class.
BiasedGraph simplify(const BiasedGraph& o);
bool is_simple(const BiasedGraph& o);

// Whether every cycle of the (sub)graph is balanced.
bool is_balanced_graph(const BiasedGraph& o);

}  // namespace tangle
