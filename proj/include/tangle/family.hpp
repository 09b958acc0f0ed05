#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tangle/bias.hpp"

namespace tangle {

enum class FamilyKind {
    GeneralizedWheel,
    CrissCross,
    FatTriangle,
    PPSpecialVertex,
    PPSpecialPair,
    PPSpecialTriple,
    Tricoloured,
    K5Parallel,
    PPSigned,
};

inline constexpr FamilyKind kAllFamilies[] = {
    FamilyKind::PPSigned,        FamilyKind::GeneralizedWheel, FamilyKind::CrissCross,
    FamilyKind::FatTriangle,     FamilyKind::PPSpecialVertex,  FamilyKind::PPSpecialPair,
    FamilyKind::PPSpecialTriple, FamilyKind::Tricoloured,      FamilyKind::K5Parallel,
};

const char* family_name(FamilyKind k);   // "criss-cross", ...
const char* family_label(FamilyKind k);  // "T1c", ...
std::optional<FamilyKind> family_from_name(const std::string& s);

// Role assignment over a concrete underlying graph. Role names per kind:
//   generalized-wheel: v w, z1..zk; es G1..Gk; vs Xi, Yi for every Gi that
//     is not a single edge
//   criss-cross: v w, u1..u4; e e1..e4, f1, f2; es H
//   fat-triangle: v v1..v3; es H, F12, F23, F31
//   special-vertex: v w, z1, z2, u1, u2; e z1z2, u1u2, wz1, wz2, g1, g2;
//     vs/es H1, H2; sequence f1..fm; pairing x1..xm, y1..ym
//   special-pair: v x, y; vs X, Y; es H, Fx, Fy, E
//   special-triple: v y1, x, y2; vs X; es H, F, E, G; e f
//   tricoloured: index I; vs/es H1..H6; v z1..z6, xi; vs Yi; es Ei (i in I)
//   k5: v k1..k5; mults (10 entries, pairs in lexicographic order)
//   pp-signed: es B; sequence f1..fm; pairing x1..xm, y1..ym
struct FamilyDescriptor {
    FamilyKind kind = FamilyKind::PPSigned;
    MultiGraph graph;
    std::map<std::string, VertexId> v;
    std::map<std::string, EdgeId> e;
    std::map<std::string, VertexSet> vs;
    std::map<std::string, EdgeSet> es;
    std::vector<EdgeId> sequence;
    std::vector<VertexId> pairing;
    std::vector<int> index;
    std::vector<int> mults;

    friend bool operator==(const FamilyDescriptor&, const FamilyDescriptor&) = default;
};

struct ClauseResult {
    std::string name;
    bool ok = true;
    std::string detail;
};

struct Certificate {
    FamilyDescriptor descriptor;
    std::vector<ClauseResult> clauses;
    bool ok() const;
    // Name of the first failing clause, or empty.
    std::string failure() const;
};

// Every defining clause of d.kind evaluated against o. Never throws for
// malformed descriptors; those fail the "roles" clause.
Certificate verify_family(const BiasedGraph& o, const FamilyDescriptor& d);

// Same verdict as verify_family(o, d).ok(), stopping at the first failing
// clause and leaving the planarity clauses for last. `table` is
// cycle_table(o).
bool satisfies_family(const BiasedGraph& o, const FamilyDescriptor& d, const CycleTable& table);

// Builders: check the structural clauses (PreconditionError "shape"), then
// fix the prescribed biases and complete the rest with `fallback`
// (PreconditionError "infeasible" when no completion exists).
BiasedGraph build_generalized_wheel(const FamilyDescriptor& d, Bias fallback = Bias::Unbalanced);
BiasedGraph build_criss_cross(const FamilyDescriptor& d, Bias fallback = Bias::Unbalanced);
BiasedGraph build_fat_triangle(const FamilyDescriptor& d, Bias fallback = Bias::Unbalanced);
BiasedGraph build_pp_special_vertex(const FamilyDescriptor& d, Bias fallback = Bias::Unbalanced);
BiasedGraph build_pp_special_pair(const FamilyDescriptor& d, Bias fallback = Bias::Unbalanced);
BiasedGraph build_pp_special_triple(const FamilyDescriptor& d, Bias fallback = Bias::Unbalanced);
BiasedGraph build_tricoloured(const FamilyDescriptor& d, Bias fallback = Bias::Unbalanced);
BiasedGraph build_k5_family(const std::vector<int>& mults);
BiasedGraph build_pp_signed(const FamilyDescriptor& d);
BiasedGraph build_family(const FamilyDescriptor& d, Bias fallback = Bias::Unbalanced);

// Descriptor (with its graph) for K5 with the given multiplicities.
FamilyDescriptor k5_descriptor(const std::vector<int>& mults);

// Small ready-made members of each family; setting in [0, 3).
inline constexpr int kExampleSettings = 3;
FamilyDescriptor example_descriptor(FamilyKind k, int setting);

// (g, order) planar in the disk sense: g drawn in a closed disk with the
// order vertices on the boundary in this cyclic order (consecutive repeats
// allowed). Components of g need not be joined.
bool disk_planar(const MultiGraph& g, const std::vector<VertexId>& order);

// Identification for a t-sum: verts[i] = (vertex of o1, vertex of o2);
// kt[i] = (edge of o1, edge of o2) for the K_t edges (t = 2: one pair,
// t = 3: three pairs).
struct SumGlue {
    std::vector<std::pair<VertexId, VertexId>> verts;
    std::vector<std::pair<EdgeId, EdgeId>> kt;
};

struct SumResult {
    BiasedGraph sum;
    std::vector<VertexId> vmap2;  // o2 vertex -> sum vertex (-1 if absent)
    std::vector<EdgeId> emap2;    // o2 edge -> sum edge (-1 for K_t edges)
};

// Ids of o1 are kept; ids of o2 are kept when free in o1, renumbered above
// the bounds of both graphs otherwise.
SumResult t_sum(const BiasedGraph& o1, const BiasedGraph& o2, int t, const SumGlue& glue);

}  // namespace tangle
