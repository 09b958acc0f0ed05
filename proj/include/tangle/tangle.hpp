#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "tangle/bias.hpp"

namespace tangle {

struct TangleVerdict {
    enum class Kind { Balanced, HasBlockingVertex, Tangled, TwoDisjointUnbalanced };
    Kind kind = Kind::Balanced;
    VertexId blocking = -1;       // HasBlockingVertex
    std::optional<Cycle> first;   // TwoDisjointUnbalanced
    std::optional<Cycle> second;
    bool tangled() const { return kind == Kind::Tangled; }
};

const char* kind_name(TangleVerdict::Kind k);

// Unbalanced cycles only, in enumerate_cycles order.
std::vector<Cycle> unbalanced_cycles(const BiasedGraph& o);

std::optional<std::pair<Cycle, Cycle>> find_disjoint_unbalanced_pair(const BiasedGraph& o);
VertexSet blocking_vertices(const BiasedGraph& o);
std::vector<std::pair<VertexId, VertexId>> blocking_pairs(const BiasedGraph& o);
TangleVerdict is_tangled(const BiasedGraph& o);

struct StandardPartition {
    VertexId v = -1;
    std::vector<EdgeSet> classes;  // ordered by least edge id
};

// Requires v blocking and o - v connected.
StandardPartition standard_partition(const BiasedGraph& o, VertexId v);

struct TwoBalancedCheck {
    bool ok = true;
    std::optional<Cycle> violation;
};

// Every {e,f}-cycle for `base` (e != f in f_set) is balanced.
TwoBalancedCheck is_2_balanced(const BiasedGraph& o, const EdgeSet& base, const EdgeSet& f_set);

struct SignatureRecovery {
    bool ok = false;
    EdgeSet signature;
    std::optional<Cycle> counterexample;
};

// Certifies that every cycle of base ∪ f_set is balanced exactly when it
// meets f_set evenly.
SignatureRecovery recover_signature(const BiasedGraph& o, const EdgeSet& base, const EdgeSet& f_set);

// base + e contains an unbalanced cycle for every edge e outside base.
bool is_maximal_balanced(const BiasedGraph& o, const EdgeSet& base);

}  // namespace tangle
