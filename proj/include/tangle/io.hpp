#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tangle/classify.hpp"

namespace tangle {

// Line-oriented instance format:
//
//   biasedgraph 1
//   v <count>
//   e <id> <u> <v>
//   bias signed <edge ids>
//   bias explicit            then   bal <edge ids>   per balanced cycle
//   bias all-balanced | bias all-unbalanced
//   bias partial             then   bal / unbal lines and
//   default balanced | default unbalanced
//   family <name>            then   role v|e <name> <id>,
//                                   role vs|es <name> <ids>,
//                                   role seq|pairing|index|mults <values>
//
// Blank lines and lines starting with '#' are ignored.
struct BiasRecord {
    enum class Kind { Signed, Explicit, AllBalanced, AllUnbalanced, Partial };
    Kind kind = Kind::AllBalanced;
    EdgeSet signature;
    std::vector<EdgeSet> balanced;    // sorted, no repeats
    std::vector<EdgeSet> unbalanced;  // partial only
    Bias fallback = Bias::Unbalanced;

    friend bool operator==(const BiasRecord&, const BiasRecord&) = default;
};

struct InstanceDocument {
    int version = 1;
    MultiGraph graph;
    BiasRecord bias;
    std::optional<FamilyDescriptor> family;  // its graph is `graph`

    friend bool operator==(const InstanceDocument&, const InstanceDocument&) = default;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::string kind, int line, int column, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
          kind_(std::move(kind)), line_(line), column_(column) {}
    const std::string& kind() const { return kind_; }  // "syntax" or "semantic"
    int line() const { return line_; }
    int column() const { return column_; }

private:
    std::string kind_;
    int line_, column_;
};

// Checks syntax, ids, cycles and the theta property of explicit biases.
InstanceDocument parse(const std::string& text);
std::string serialize(const InstanceDocument& doc);

// Partial records are completed here; PreconditionError("infeasible") when
// no completion exists.
BiasedGraph to_biased(const InstanceDocument& doc);
// Vertices must be 0..n-1 without holes.
InstanceDocument from_biased(const BiasedGraph& o);

// Graphviz text. With a report, roles of the first certified label become
// node and edge labels and edges outside its balanced part are drawn bold;
// signature edges of signed inputs are dashed.
std::string export_dot(const BiasedGraph& o, const ClassificationReport* report = nullptr);

}  // namespace tangle
