#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tangle/bits.hpp"

namespace tangle {

using VertexId = int;
using EdgeId = int;

struct Edge {
    VertexId u = -1;
    VertexId v = -1;
    bool is_loop() const { return u == v; }
};

// Undirected multigraph with loops. Vertex and edge ids are stable: deleting
// a vertex or an edge leaves a hole rather than renumbering.
class MultiGraph {
public:
    MultiGraph() = default;
    explicit MultiGraph(int n);

    VertexId add_vertex();
    void add_vertex_with_id(VertexId v);
    EdgeId add_edge(VertexId u, VertexId v);
    void add_edge_with_id(EdgeId e, VertexId u, VertexId v);

    int vertex_bound() const { return static_cast<int>(vpresent_.size()); }
    int edge_bound() const { return static_cast<int>(edges_.size()); }
    bool has_vertex(VertexId v) const {
        return v >= 0 && v < vertex_bound() && vpresent_[v];
    }
    bool has_edge(EdgeId e) const { return e >= 0 && e < edge_bound() && epresent_[e]; }
    int num_vertices() const { return nv_; }
    int num_edges() const { return ne_; }

    const Edge& edge(EdgeId e) const { return edges_[e]; }
    VertexId other(EdgeId e, VertexId v) const {
        return edges_[e].u == v ? edges_[e].v : edges_[e].u;
    }
    // Incident edges of v; a loop is listed once.
    const std::vector<EdgeId>& incident(VertexId v) const { return inc_[v]; }
    int degree(VertexId v) const;

    std::vector<VertexId> vertices() const;
    std::vector<EdgeId> edges() const;
    VertexSet vertex_set() const { return vset_; }
    EdgeSet edge_set() const { return eset_; }

    VertexSet neighbors(VertexId v) const;
    VertexSet neighbors(const VertexSet& x) const;  // N(X), excludes X
    EdgeSet delta(const VertexSet& x) const;        // edges with exactly one end in X
    EdgeSet edges_within(const VertexSet& x) const; // both ends in X
    EdgeSet edges_between(VertexId a, VertexId b) const;
    VertexSet endpoints(const EdgeSet& es) const;

    MultiGraph without_vertices(const VertexSet& x) const;
    MultiGraph without_edges(const EdgeSet& es) const;
    MultiGraph induced(const VertexSet& x) const;
    // G[Y]: the edges Y and their endpoints.
    MultiGraph edge_induced(const EdgeSet& es) const;
    // Same vertex set, only the given edges.
    MultiGraph spanning_with(const EdgeSet& es) const;

    friend bool operator==(const MultiGraph& a, const MultiGraph& b);

private:
    void rebuild();

    std::vector<char> vpresent_;
    std::vector<Edge> edges_;
    std::vector<char> epresent_;
    std::vector<std::vector<EdgeId>> inc_;
    VertexSet vset_;
    EdgeSet eset_;
    int nv_ = 0;
    int ne_ = 0;
};

// A cycle: edge set plus its canonical traversal.
struct Cycle {
    EdgeSet edges;
    VertexSet verts;
    std::vector<EdgeId> seq;     // least rotation/reflection of the edge sequence
    std::vector<VertexId> vseq;  // vseq[i] is the common end of seq[i-1] and seq[i]

    int length() const { return static_cast<int>(seq.size()); }
    friend bool operator==(const Cycle& a, const Cycle& b) { return a.edges == b.edges; }
};

// Builds the cycle with edge set `es` if it is connected and 2-regular.
std::optional<Cycle> make_cycle(const MultiGraph& g, const EdgeSet& es);
// Deterministic order: by length, then canonical sequence.
bool cycle_less(const Cycle& a, const Cycle& b);

// All cycles, optionally only those with at most max_len edges.
// Throws ResourceLimit past limits().cycle_cap.
std::vector<Cycle> enumerate_cycles(const MultiGraph& g, std::optional<int> max_len = std::nullopt);

// Components as vertex sets, ordered by least vertex.
std::vector<VertexSet> components(const MultiGraph& g);
bool is_connected(const MultiGraph& g);
// No vertex set of size < k disconnects g, and g has more than k vertices
// (complete graphs on k+1 or fewer vertices count as k-connected when they
// have at least k+1 vertices).
bool is_k_connected(const MultiGraph& g, int k);
bool is_two_connected(const MultiGraph& g);

// Simple paths between a and b (as vertex sequences), all of them.
std::vector<std::vector<VertexId>> simple_paths(const MultiGraph& g, VertexId a, VertexId b,
                                                const VertexSet& forbidden = {});

struct Bridge {
    VertexSet interior;     // one component of G - X
    VertexSet attachments;  // vertices of X it touches
    EdgeSet edges;          // edges with an end in the interior
    VertexSet vertices() const { return interior | attachments; }
};

struct VertexCut {
    VertexSet cut;
    std::vector<Bridge> bridges;
};

std::vector<Bridge> bridges_of(const MultiGraph& g, const VertexSet& x);
bool is_vertex_cut(const MultiGraph& g, const VertexSet& x);
// All vertex cuts of size at most k. Requires g connected.
std::vector<VertexCut> find_vertex_cuts(const MultiGraph& g, int k);

struct Block {
    EdgeSet edges;
    VertexSet verts;
};

struct BlockTree {
    std::vector<Block> blocks;
    VertexSet cut_vertices;
    std::vector<std::pair<int, int>> tree_edges;  // block index pairs
    bool is_leaf(int b) const;
    int num_cut_vertices_in(int b) const;
};

// Loops form single-edge blocks. Requires g connected.
BlockTree block_tree(const MultiGraph& g);

struct Theta {
    Cycle a, b, c;
};

// True when c1 and c2 are distinct cycles whose union is a theta graph.
bool forms_theta(const Cycle& c1, const Cycle& c2);
bool forms_theta(const EdgeSet& e1, const VertexSet& v1, const EdgeSet& e2, const VertexSet& v2);
std::vector<Theta> enumerate_theta_subgraphs(const MultiGraph& g);

// Rotation system of the loopless part of a multigraph: rotation[v] lists
// the incident non-loop edges of v in cyclic order.
struct Embedding {
    std::vector<std::vector<EdgeId>> rotation;
};

struct Face {
    std::vector<EdgeId> edges;
    std::vector<VertexId> walk;  // tail of each traversed edge
};

std::vector<Face> trace_faces(const MultiGraph& g, const Embedding& emb);
// Checks that emb is a rotation system of g's non-loop edges and that it is
// planar (Euler characteristic 2 per component).
bool is_planar_embedding(const MultiGraph& g, const Embedding& emb, std::string* why = nullptr);
// Whether `order` occurs as a cyclic subsequence of the walk, read in either
// direction.
bool walk_contains_order(const std::vector<VertexId>& walk, const std::vector<VertexId>& order);
// Removes cyclically consecutive repeats.
std::vector<VertexId> normalize_order(const std::vector<VertexId>& order);

std::optional<Embedding> planar_embedding(const MultiGraph& g);

struct OrderedPlanarEmbedding {
    Embedding embedding;
    int face = -1;
    std::vector<VertexId> face_walk;
    std::vector<VertexId> order;
};

std::optional<OrderedPlanarEmbedding> ordered_planarity(const MultiGraph& g,
                                                        const std::vector<VertexId>& order);
bool verify_ordered_embedding(const MultiGraph& g, const OrderedPlanarEmbedding& w,
                              std::string* why = nullptr);

// (G, (X1, X2, ...)) planar for some ordering inside each group.
std::optional<OrderedPlanarEmbedding> ordered_planarity_groups(
    const MultiGraph& g, const std::vector<std::vector<VertexId>>& groups);

}  // namespace tangle
