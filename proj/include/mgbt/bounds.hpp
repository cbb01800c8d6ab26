#pragma once

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace mgbt {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPosInf = std::numeric_limits<double>::infinity();

/// Closed output interval [min, max]; defaults to unbounded.
struct Bounds {
    double min = kNegInf;
    double max = kPosInf;

    bool unbounded() const { return min == kNegInf && max == kPosInf; }
    bool feasible() const { return min <= max; }

    void tighten_min(double v) { min = std::max(min, v); }
    void tighten_max(double v) { max = std::min(max, v); }

    /// Intersection of two intervals (tightest of both).
    static Bounds intersect(const Bounds& a, const Bounds& b) {
        return Bounds{std::max(a.min, b.min), std::min(a.max, b.max)};
    }

    bool operator==(const Bounds& o) const { return min == o.min && max == o.max; }
};

/// Minimizer of G*w + 0.5*(H+lambda)*w^2 over [b.min, b.max].
/// The unconstrained minimizer is the Newton step -G/(H+lambda); the
/// objective is convex, so clamping yields the constrained optimum.
inline double constrained_leaf_output(double grad_sum, double hess_sum, double lambda,
                                      const Bounds& b) {
    if (b.min > b.max) {
        throw std::logic_error("constrained_leaf_output: infeasible bounds (min > max)");
    }
    const double denom = hess_sum + lambda;
    const double raw = -grad_sum / denom;
    return std::clamp(raw, b.min, b.max);
}

/// Second-order objective value G*w + 0.5*(H+lambda)*w^2 at output w.
inline double leaf_score(double grad_sum, double hess_sum, double lambda, double w) {
    return grad_sum * w + 0.5 * (hess_sum + lambda) * w * w;
}

}  // namespace mgbt
