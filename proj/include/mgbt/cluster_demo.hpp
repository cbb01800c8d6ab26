#pragma once

#include <string>
#include <vector>

#include "mgbt/constraints.hpp"

namespace mgbt {

/// Four-cluster 2-D regression demonstration of how the constraint modes
/// differ. The plane is split into quadrants with targets
///   left-top 0.2, left-bottom 0.7, right-top 0.5, right-bottom 0.8,
/// x monotone increasing. Cluster sizes are weighted so the first split's
/// side means are 0.3 and 0.6 exactly. Replaying the scripted sequence
/// (x-split, then y on the right, then y on the left) under squared error
/// with learning rate 1 makes the left-bottom leaf come out as 0.45 under
/// the midpoint method, 0.5 under the fast method, and 0.7 (its true mean)
/// under the slow method.
struct ClusterDemoResult {
    ConstraintMode mode;
    double left_bottom_value = 0.0;  // prediction for the left-bottom cluster
    double expected = 0.0;
};

ClusterDemoResult run_cluster_demo(ConstraintMode mode);

/// All three constrained modes, in order basic, fast, slow.
std::vector<ClusterDemoResult> run_cluster_demo_all();

std::string cluster_demo_report();

}  // namespace mgbt
