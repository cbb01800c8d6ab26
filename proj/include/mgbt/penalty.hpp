#pragma once

#include <cmath>
#include <stdexcept>

namespace mgbt {

/// Depth-based penalization of monotone splits. gamma tunes how strongly
/// splits near the root are discouraged; epsilon keeps penalized gains
/// strictly positive so a fully penalized level can still split when no
/// other split exists.
struct PenaltyParams {
    double gamma = 0.0;
    double epsilon = 1e-10;
};

/// Penalty factor in [0, 1] multiplying the gain of a monotone split at
/// the given depth (root = 0). Zero up to the level gamma prohibits,
/// then approaching 1 with depth.
inline double penalty(double gamma, int depth) {
    if (gamma < 0.0) throw std::invalid_argument("penalty: gamma must be >= 0");
    if (depth < 0) throw std::invalid_argument("penalty: depth must be >= 0");
    if (gamma >= static_cast<double>(depth) + 1.0) return 0.0;
    if (gamma <= 1.0) return 1.0 - gamma / std::exp2(static_cast<double>(depth));
    return 1.0 - std::exp2(gamma - 1.0 - static_cast<double>(depth));
}

}  // namespace mgbt
