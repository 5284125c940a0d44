#pragma once

#include <cmath>
#include <numbers>

namespace entlight {

inline constexpr double pi = std::numbers::pi;

// sin(y)/y, continuous at 0.  Below |y| = 1e-4 the direct quotient loses
// accuracy to cancellation in sin, so switch to the Taylor series; at the
// branch point the y^6 term is ~2e-28, far below double epsilon.
inline double sinc(double y) {
    const double a = std::abs(y);
    if (a < 1e-4) {
        const double y2 = y * y;
        return 1.0 - y2 / 6.0 * (1.0 - y2 / 20.0);
    }
    return std::sin(y) / y;
}

} // namespace entlight
