#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tangle/graph.hpp"

namespace tangle {

struct Path {
    std::vector<VertexId> verts;
    std::vector<EdgeId> edges;  // edges[i] joins verts[i] and verts[i+1]
    VertexSet vertex_set() const;
};

struct Linkage {
    Path p1;  // s1 -> t1
    Path p2;  // s2 -> t2
};

// Checks endpoints, path structure in g, and vertex-disjointness.
bool verify_linkage(const MultiGraph& g, const Linkage& l, VertexId s1, VertexId t1, VertexId s2, VertexId t2,
                    std::string* why = nullptr);

// Proj(G, sets) as a simple graph: the sets deleted, loops and parallel
// copies dropped (the least edge id stays), and each neighbourhood made a
// clique. Missing clique edges get ids from g.edge_bound() upward, set by
// set, pairs in increasing order; clique_edges[i] receives every edge of
// the clique on N(sets[i]).
MultiGraph projection(const MultiGraph& g, const std::vector<VertexSet>& sets,
                      std::vector<EdgeSet>* clique_edges = nullptr);

struct ThreePlanarWitness {
    std::vector<VertexSet> sets;
    Embedding embedding;            // of projection(g, sets)
    std::vector<VertexId> order;
};

struct WitnessCheck {
    bool ok = true;
    std::string defect;
};

WitnessCheck verify_witness(const MultiGraph& g, const ThreePlanarWitness& w, const std::vector<VertexId>& order);

// Witness for (g, order), or nullopt when none exists.
// Throws ResourceLimit past limits().search_cap.
std::optional<ThreePlanarWitness> find_witness(const MultiGraph& g, const std::vector<VertexId>& order);

// Some (s1-t1, s2-t2)-linkage, found by exhaustive path search.
std::optional<Linkage> search_linkage(const MultiGraph& g, VertexId s1, VertexId t1, VertexId s2, VertexId t2);

using LinkageOutcome = std::variant<Linkage, ThreePlanarWitness>;

// Exactly one of: a linkage, or a witness for order (s1, s2, t1, t2).
LinkageOutcome find_linkage(const MultiGraph& g, VertexId s1, VertexId t1, VertexId s2, VertexId t2);

// Refines sets until none admits a refinement that keeps the witness valid.
ThreePlanarWitness minimalize(const MultiGraph& g, const ThreePlanarWitness& w);
// Whether sets[i] admits a valid refinement into two or more parts.
bool is_refinable(const MultiGraph& g, const ThreePlanarWitness& w, std::size_t i);

// Cycle of g through `order` in circular order, by substituting paths
// through the sets for projected face edges. Requires g 2-connected.
Cycle cycle_through(const MultiGraph& g, const ThreePlanarWitness& w, const std::vector<VertexId>& order);

// Lifts a (v1-u1*, v2-u2*) linkage of the projection to a (v1-u1, v2-u2)
// linkage of g, where ui* = ui or a neighbour of the set holding ui.
Linkage lift_linkage(const MultiGraph& g, const ThreePlanarWitness& w, const Linkage& projected, VertexId u1,
                     VertexId u2);

struct HubCut {
    VertexId x = -1, y = -1;
    std::vector<Bridge> bridges;
    std::vector<int> bridge_of;  // bridge index for each listed vertex
};

struct LinkageFound {
    VertexId a = -1, b = -1;  // the pair that is linked against the other
    VertexId c = -1, d = -1;
    Linkage linkage;
};

std::variant<HubCut, LinkageFound> hub_cut_analysis(const MultiGraph& g, VertexId x, VertexId y,
                                                    const std::vector<VertexId>& vs);

struct TwoSeparation {
    VertexId a = -1, b = -1;
    EdgeSet side1, side2;  // edge sets of A1 and A2
    VertexSet verts1, verts2;
};

std::variant<TwoSeparation, ThreePlanarWitness, LinkageFound> planar_or_2sep(const MultiGraph& g, VertexId v1,
                                                                            VertexId v2, const VertexSet& x,
                                                                            const VertexSet& y);

struct PairOrder {
    std::vector<int> permutation;  // permutation[i] = index into the input pairs
    std::vector<bool> swapped;     // per output position
    std::vector<VertexId> order;   // x1..xn, y1..yn after reordering
    ThreePlanarWitness witness;
};

std::variant<PairOrder, LinkageFound> multi_pair_order(const MultiGraph& g,
                                                      const std::vector<std::pair<VertexId, VertexId>>& pairs);

}  // namespace tangle
