#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tangle {

// Thrown when an enumeration or search exceeds its configured ceiling.
class ResourceLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Thrown when an operation is called outside its domain. `kind` is a short
// machine-readable tag so callers can tell violations apart.
class PreconditionError : public std::invalid_argument {
public:
    PreconditionError(std::string kind, const std::string& what)
        : std::invalid_argument(what), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

// Minimum vertex count of the balanced summand of a 3-sum.
enum class SumThreshold {
    Four,  // 2, 3, 4 for t = 1, 2, 3
    Five,  // 2, 3, 5 (signed-graph variant)
};

struct Limits {
    std::size_t cycle_cap = 1'000'000;
    int oracle_vertex_cap = 9;
    std::size_t search_cap = 2'000'000;  // candidate sets, role assignments, embeddings
    SumThreshold sum_threshold = SumThreshold::Four;
};

Limits& limits();

// Reads TANGLE_CYCLE_CAP if set; returns false on a malformed value.
bool load_limits_from_env();

inline int min_balanced_side(int t, SumThreshold mode) {
    if (t == 1) return 2;
    if (t == 2) return 3;
    return mode == SumThreshold::Four ? 4 : 5;
}

}  // namespace tangle
