#pragma once

#include <complex>

namespace cuntz {

using Complex = std::complex<double>;

/// Numerical thresholds shared by every module.
struct Tolerances {
    /// |nu| below this counts as an impossible transition.
    double zero = 1e-9;
    /// Isometry / unitarity defect allowed in filter-matrix checks.
    double matrix = 1e-10;
    /// Row normalization and other accumulated floating identities.
    double numeric = 1e-10;
    /// Relative singular-value cutoff for fixed-space rank decisions.
    double rank = 1e-8;
};

inline constexpr Tolerances default_tolerances{};

} // namespace cuntz
