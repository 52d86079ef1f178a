#pragma once

#include <stdexcept>
#include <string>

namespace stratmc {

using StateId = int;
using PlayerId = int;  // 0-based internally, 1-based in all text formats
using ActionId = int;
using ClassId = int;
using PropId = int;

// Raised by the text front-ends (model, formula, machine files).
struct ParseError : std::runtime_error {
    int line;
    int col;
    ParseError(std::string msg, int line_ = 0, int col_ = 0)
        : std::runtime_error(line_ > 0 ? "line " + std::to_string(line_) +
                                             (col_ > 0 ? ":" + std::to_string(col_) : "") + ": " + msg
                                       : msg),
          line(line_), col(col_) {}
};

// Raised when a query asks for a semantics the tool cannot decide.
struct UnsupportedSemantics : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Saturating counters for enumeration-space sizes.  kSatCount is "too many
// to index"; arithmetic clamps there instead of overflowing.
inline constexpr unsigned long long kSatCount = 1ULL << 62;

inline unsigned long long sat_add(unsigned long long a, unsigned long long b) {
    a = a > kSatCount ? kSatCount : a;
    b = b > kSatCount ? kSatCount : b;
    unsigned long long s = a + b;
    return s > kSatCount ? kSatCount : s;
}

inline unsigned long long sat_mul(unsigned long long a, unsigned long long b) {
    if (a == 0 || b == 0) return 0;
    a = a > kSatCount ? kSatCount : a;
    b = b > kSatCount ? kSatCount : b;
    if (a > kSatCount / b) return kSatCount;
    return a * b;
}

}  // namespace stratmc
