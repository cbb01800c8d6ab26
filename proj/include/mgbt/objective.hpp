#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace mgbt {

struct GradHess {
    double grad = 0.0;
    double hess = 0.0;
};

enum class ObjectiveKind { kBinaryLogloss, kL2 };

/// Logistic function with outputs clamped to [1e-15, 1 - 1e-15] so that
/// downstream logarithms stay finite.
inline double sigmoid(double margin) {
    const double p = 1.0 / (1.0 + std::exp(-margin));
    if (p < 1e-15) return 1e-15;
    if (p > 1.0 - 1e-15) return 1.0 - 1e-15;
    return p;
}

inline GradHess grad_hess(ObjectiveKind kind, double margin, double label) {
    if (kind == ObjectiveKind::kBinaryLogloss) {
        const double p = sigmoid(margin);
        return {p - label, p * (1.0 - p)};
    }
    return {margin - label, 1.0};
}

/// Fills per-row gradient/hessian pairs for the current margins.
inline void grad_hess_rows(ObjectiveKind kind, std::span<const double> margins,
                           std::span<const double> labels, std::vector<GradHess>* out) {
    out->resize(margins.size());
    for (size_t i = 0; i < margins.size(); ++i) {
        (*out)[i] = grad_hess(kind, margins[i], labels[i]);
    }
}

}  // namespace mgbt
