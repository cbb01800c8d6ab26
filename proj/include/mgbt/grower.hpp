#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mgbt/constraints.hpp"
#include "mgbt/dataset.hpp"
#include "mgbt/growth_types.hpp"
#include "mgbt/histogram.hpp"
#include "mgbt/objective.hpp"
#include "mgbt/penalty.hpp"
#include "mgbt/tree.hpp"

namespace mgbt {

struct TreeConfig {
    int num_leaves = 32;
    int max_depth = 5;
    int min_data_in_leaf = 100;
    double min_hessian = 1e-3;
    double lambda = 0.0;
    PenaltyParams penalty;
};

/// One scripted split for replaying a fixed growth sequence.
struct ForcedSplit {
    NodeId leaf = kNoNode;
    int feature = -1;
    int threshold = -1;
};

/// Called after each executed split with the updated view.
using GrowObserver =
    std::function<void(const GrowthView&, NodeId split_node, const ConstraintUpdateReport&)>;

/// Grows one regression tree leaf-wise (best-first by penalized gain) from
/// gradient/hessian statistics, consulting `engine` for output bounds and
/// notifying it after every executed split. Leaves whose constraints a split
/// changed get their queued candidate recomputed.
class TreeGrower {
public:
    TreeGrower(const BinnedDataset& ds, const TreeConfig& config, ConstraintEngine* engine);

    Tree grow(std::span<const size_t> rows, std::span<const GradHess> grad_hess,
              const GrowObserver& observer = nullptr);

    /// Executes exactly the scripted splits in order (no gain search, no
    /// min-data checks); constraint hooks run as in normal growth. A
    /// monotone split whose clamped outputs would violate the required
    /// ordering is pooled to the shared constrained value.
    Tree grow_forced(std::span<const size_t> rows, std::span<const GradHess> grad_hess,
                     std::span<const ForcedSplit> script,
                     const GrowObserver& observer = nullptr);

    /// Best admissible split of `leaf` under the engine's current bounds,
    /// or an invalid candidate when none has positive penalized gain.
    SplitCandidate find_best_split(NodeId leaf) const;

private:
    struct LeafState {
        size_t row_begin = 0;
        size_t row_end = 0;
        GradStats stats;
        Histogram hist;
        uint64_t version = 0;
    };

    GrowthView view() const { return {tree_, regions_, ds_.monotone_directions, ds_.bin_counts}; }

    void start(std::span<const size_t> rows, std::span<const GradHess> grad_hess);
    NodeId execute_split(const SplitCandidate& cand, int order);
    double constrained_output(NodeId leaf, const Bounds& bounds) const;

    const BinnedDataset& ds_;
    TreeConfig config_;
    ConstraintEngine* engine_;
    HistogramLayout layout_;

    Tree tree_;
    std::vector<LeafRegion> regions_;
    std::vector<LeafState> leaves_;
    std::vector<size_t> row_index_;
    std::span<const GradHess> grad_hess_;
};

/// Convenience wrapper building the engine from a mode tag.
Tree grow_tree(const BinnedDataset& ds, std::span<const size_t> rows,
               std::span<const GradHess> grad_hess, const TreeConfig& config,
               ConstraintMode mode);

}  // namespace mgbt
