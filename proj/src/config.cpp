#include "tangle/config.hpp"

#include <cstdlib>
#include <string>

namespace tangle {

Limits& limits() {
    static Limits l;
    return l;
}

bool load_limits_from_env() {
    const char* s = std::getenv("TANGLE_CYCLE_CAP");
    if (!s || !*s) return true;
    try {
        std::size_t pos = 0;
        unsigned long long v = std::stoull(s, &pos);
        if (pos != std::string(s).size() || v == 0) return false;
        limits().cycle_cap = static_cast<std::size_t>(v);
    } catch (...) {
        return false;
    }
    return true;
}

}  // namespace tangle
