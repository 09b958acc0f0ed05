#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tangle/family.hpp"
#include "tangle/tangle.hpp"

namespace tangle {

// Spanning, 2-connected, balanced subgraph; `residual` holds the other
// edges. The pairing is filled by find_planar_balanced_base only.
struct BalancedBase {
    EdgeSet base;
    EdgeSet residual;
    std::vector<EdgeId> sequence;     // f_1..f_m
    std::vector<VertexId> pairing;    // x_1..x_m, y_1..y_m
    std::optional<OrderedPlanarEmbedding> embedding;
};

// A base search either succeeds or meets one of the shapes that has no
// such base; the shape comes with its certificate.
struct BaseOutcome {
    std::optional<BalancedBase> base;
    std::optional<Certificate> exception;
};

// Requires o simple, 4-connected, tangled, with at least 6 vertices.
BaseOutcome find_balanced_base(const BiasedGraph& o);
// As above, additionally pairing the residual edges along one face of the
// base. The exception is a criss-cross, special triple or fat triangle.
BaseOutcome find_planar_balanced_base(const BiasedGraph& o);

// One split off the tangled side: the balanced summand and how it glues.
// Summand vertex and edge ids are those of the graph being split; the K_t
// edges get fresh ids, shared by both summands.
struct SumStep {
    int t = 0;
    std::vector<VertexId> joint;
    BiasedGraph balanced;
    SumGlue glue;
};

enum class CoreKind { FourConnected, GeneralizedWheel, Irreducible };
const char* core_kind_name(CoreKind k);

struct SumDecomposition {
    std::vector<SumStep> steps;  // in splitting order
    BiasedGraph core;            // the tangled side after the last step
    CoreKind core_kind = CoreKind::Irreducible;
    std::optional<Certificate> wheel;
};

// Requires o tangled.
SumDecomposition decompose(const BiasedGraph& o);
// Glues the steps back onto the core, last step first.
BiasedGraph recompose(const SumDecomposition& d);
// Empty when d recomposes to o cycle for cycle, every intermediate tangled
// side is tangled and every balanced side is balanced and large enough.
std::string check_decomposition(const BiasedGraph& o, const SumDecomposition& d);

// The first split that o admits, if any.
std::optional<SumStep> find_sum_step(const BiasedGraph& o);

struct LabelMatch {
    std::string label;  // T1a..T1h, T2, T3
    std::optional<Certificate> certificate;
    std::optional<SumDecomposition> sum;
};

struct ClassificationReport {
    TangleVerdict verdict;
    std::vector<LabelMatch> labels;
    std::vector<std::string> trace;
    bool has(const std::string& label) const;
};

enum class LabelMode { All, First };

// Requires o simple and connected. Throws ResourceLimit when no label was
// found and some recognizer ran out of budget.
ClassificationReport classify(const BiasedGraph& o, LabelMode mode = LabelMode::All);
// Requires o simple, tangled, with at most 5 vertices.
ClassificationReport small_classify(const BiasedGraph& o, LabelMode mode = LabelMode::All);
// Empty when every label's certificate re-verifies against o.
std::string verify_report(const BiasedGraph& o, const ClassificationReport& r);

// Recognizers, one per family; each returns a verified certificate.
std::optional<Certificate> recognize(const BiasedGraph& o, FamilyKind k);

// A signature whose parity gives the bias of every cycle, if there is one.
std::optional<EdgeSet> signed_signature(const BiasedGraph& o);

// Definitional scan over every cycle; throws ResourceLimit past
// limits().oracle_vertex_cap vertices.
TangleVerdict oracle_is_tangled(const BiasedGraph& o);

}  // namespace tangle
