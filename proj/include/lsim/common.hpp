#pragma once
// Shared aliases, error types and small numeric helpers.

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lsim {

using cplx = std::complex<double>;
inline constexpr double PI = 3.14159265358979323846;

// Violated numerical/logic contract inside the library (CLI maps this to exit 3).
struct ContractError : std::runtime_error {
    explicit ContractError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid user-facing configuration (CLI maps this to exit 2).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw ContractError(msg);
}

// Canonicalize an angle to [0, 2*pi). Returns the canonical angle and sets
// `wraps` to the integer k with angle = canonical + 2*pi*k.
inline double canonical_angle(double angle, long& wraps) {
    double twopi = 2.0 * PI;
    double k = std::floor(angle / twopi);
    double a = angle - k * twopi;
    if (a >= twopi) {  // guard against rounding at the boundary
        a -= twopi;
        k += 1.0;
    }
    if (a < 0.0) {
        a += twopi;
        k -= 1.0;
    }
    wraps = static_cast<long>(k);
    return a;
}

}  // namespace lsim
