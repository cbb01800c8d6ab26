#pragma once

#include <cstdint>
#include <vector>

#include "mgbt/bounds.hpp"
#include "mgbt/tree.hpp"

namespace mgbt {

struct GradStats {
    double grad = 0.0;
    double hess = 0.0;
    int64_t count = 0;

    GradStats& operator+=(const GradStats& o) {
        grad += o.grad;
        hess += o.hess;
        count += o.count;
        return *this;
    }
    GradStats operator-(const GradStats& o) const {
        return {grad - o.grad, hess - o.hess, count - o.count};
    }
};

/// Best split found for one leaf: constrained child outputs plus raw and
/// penalized gain. Invalid when no admissible positive-gain split exists.
struct SplitCandidate {
    NodeId leaf = kNoNode;
    int feature = -1;
    int threshold = -1;
    double left_output = 0.0;
    double right_output = 0.0;
    double raw_gain = 0.0;
    double penalized_gain = 0.0;
    GradStats left_stats;
    GradStats right_stats;
    bool valid = false;
    uint64_t version = 0;
};

/// Read-only picture of the growing tree handed to constraint engines.
struct GrowthView {
    const Tree& tree;
    const std::vector<LeafRegion>& regions;
    const std::vector<int>& monotone_directions;
    const std::vector<uint16_t>& bin_counts;
};

/// Which leaves had their constraints tightened or rebuilt by a split.
struct ConstraintUpdateReport {
    std::vector<NodeId> changed_leaves;
    bool recomputed = false;
};

}  // namespace mgbt
