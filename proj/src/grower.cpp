#include "mgbt/grower.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace mgbt {

namespace {

struct QueueEntry {
    double penalized_gain = 0.0;
    NodeId leaf = kNoNode;
    uint64_t version = 0;

    bool operator<(const QueueEntry& o) const {
        if (penalized_gain != o.penalized_gain) return penalized_gain < o.penalized_gain;
        return leaf > o.leaf;  // lower id wins ties
    }
};

}  // namespace

TreeGrower::TreeGrower(const BinnedDataset& ds, const TreeConfig& config, ConstraintEngine* engine)
    : ds_(ds), config_(config), engine_(engine), layout_(ds) {
    if (config_.num_leaves < 1) throw std::invalid_argument("num_leaves must be >= 1");
    if (config_.max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
}

void TreeGrower::start(std::span<const size_t> rows, std::span<const GradHess> grad_hess) {
    if (rows.empty()) throw std::invalid_argument("grow: no rows");
    grad_hess_ = grad_hess;
    row_index_.assign(rows.begin(), rows.end());

    tree_.nodes.clear();
    TreeNode root;
    root.id = 0;
    root.depth = 0;
    tree_.nodes.push_back(root);

    regions_.clear();
    LeafRegion root_region(ds_.feature_count);
    for (size_t f = 0; f < ds_.feature_count; ++f) {
        root_region[f] = {0, static_cast<uint16_t>(ds_.bin_counts[f] - 1)};
    }
    regions_.push_back(std::move(root_region));

    leaves_.assign(1, LeafState{});
    LeafState& root_state = leaves_[0];
    root_state.row_begin = 0;
    root_state.row_end = row_index_.size();
    for (size_t r : row_index_) {
        root_state.stats.grad += grad_hess[r].grad;
        root_state.stats.hess += grad_hess[r].hess;
        root_state.stats.count += 1;
    }
    build_histogram(ds_, layout_, row_index_, grad_hess, &root_state.hist);

    engine_->reset(view());
    tree_.nodes[0].leaf_output = constrained_output(0, engine_->leaf_bounds(view(), 0));
}

double TreeGrower::constrained_output(NodeId leaf, const Bounds& bounds) const {
    const GradStats& s = leaves_[static_cast<size_t>(leaf)].stats;
    return constrained_leaf_output(s.grad, s.hess, config_.lambda, bounds);
}

SplitCandidate TreeGrower::find_best_split(NodeId leaf) const {
    const LeafState& state = leaves_[static_cast<size_t>(leaf)];
    const TreeNode& node = tree_.nodes[static_cast<size_t>(leaf)];
    SplitCandidate best;
    best.leaf = leaf;
    best.version = state.version;
    if (node.depth >= config_.max_depth) return best;

    const GrowthView v = view();
    const bool enforcing = engine_->enforcing();
    const Bounds parent_bounds = engine_->leaf_bounds(v, leaf);
    const double parent_output =
        constrained_leaf_output(state.stats.grad, state.stats.hess, config_.lambda, parent_bounds);
    const double parent_score =
        leaf_score(state.stats.grad, state.stats.hess, config_.lambda, parent_output);

    std::vector<Bounds> left_bounds, right_bounds;
    for (size_t f = 0; f < ds_.feature_count; ++f) {
        if (ds_.unsplittable[f]) continue;
        const BinInterval span = regions_[static_cast<size_t>(leaf)][f];
        if (span.lo >= span.hi) continue;
        const int dir = enforcing ? ds_.monotone_directions[f] : 0;

        left_bounds.assign(ds_.bin_counts[f], Bounds{});
        right_bounds.assign(ds_.bin_counts[f], Bounds{});
        engine_->split_bounds(v, leaf, static_cast<int>(f), left_bounds, right_bounds);

        const std::span<const GradStats> hist = state.hist.feature(layout_, f, ds_.bin_counts[f]);
        GradStats acc;
        for (int t = span.lo; t < span.hi; ++t) {
            acc += hist[static_cast<size_t>(t)];
            const GradStats left = acc;
            const GradStats right = state.stats - acc;
            if (left.count < config_.min_data_in_leaf || right.count < config_.min_data_in_leaf) {
                continue;
            }
            if (left.hess < config_.min_hessian || right.hess < config_.min_hessian) continue;

            const double wl = constrained_leaf_output(left.grad, left.hess, config_.lambda,
                                                      left_bounds[static_cast<size_t>(t)]);
            const double wr = constrained_leaf_output(right.grad, right.hess, config_.lambda,
                                                      right_bounds[static_cast<size_t>(t)]);
            if (dir > 0 && wl > wr) continue;
            if (dir < 0 && wl < wr) continue;

            const double gain = parent_score - leaf_score(left.grad, left.hess, config_.lambda, wl) -
                                leaf_score(right.grad, right.hess, config_.lambda, wr);
            const double pg =
                dir != 0 ? gain * (penalty(config_.penalty.gamma, node.depth) +
                                   config_.penalty.epsilon)
                         : gain;
            if (pg > best.penalized_gain || !best.valid) {
                if (pg <= 0.0) continue;
                best.valid = true;
                best.feature = static_cast<int>(f);
                best.threshold = t;
                best.left_output = wl;
                best.right_output = wr;
                best.raw_gain = gain;
                best.penalized_gain = pg;
                best.left_stats = left;
                best.right_stats = right;
            }
        }
    }
    return best;
}

NodeId TreeGrower::execute_split(const SplitCandidate& cand, int order) {
    const NodeId parent = cand.leaf;
    const size_t parent_begin = leaves_[static_cast<size_t>(parent)].row_begin;
    const size_t parent_end = leaves_[static_cast<size_t>(parent)].row_end;
    Histogram parent_hist = std::move(leaves_[static_cast<size_t>(parent)].hist);
    TreeNode& pn = tree_.nodes[static_cast<size_t>(parent)];

    // Partition rows: bin <= threshold goes left; stable to keep order
    // deterministic.
    const auto& col = ds_.bins[static_cast<size_t>(cand.feature)];
    auto begin = row_index_.begin() + static_cast<ptrdiff_t>(parent_begin);
    auto end = row_index_.begin() + static_cast<ptrdiff_t>(parent_end);
    auto mid = std::stable_partition(begin, end, [&](size_t r) {
        return col[r] <= static_cast<uint16_t>(cand.threshold);
    });
    const size_t mid_pos = static_cast<size_t>(mid - row_index_.begin());

    const NodeId left_id = static_cast<NodeId>(tree_.nodes.size());
    const NodeId right_id = left_id + 1;
    pn.is_leaf = false;
    pn.feature = cand.feature;
    pn.threshold = cand.threshold;
    pn.left = left_id;
    pn.right = right_id;
    pn.split_order = order;
    pn.is_monotone_split = ds_.monotone_directions[static_cast<size_t>(cand.feature)] != 0;
    pn.split_gain = cand.penalized_gain;

    TreeNode left, right;
    left.id = left_id;
    right.id = right_id;
    left.parent = right.parent = parent;
    left.depth = right.depth = pn.depth + 1;
    left.leaf_output = cand.left_output;
    right.leaf_output = cand.right_output;
    tree_.nodes.push_back(left);
    tree_.nodes.push_back(right);

    LeafRegion left_region = regions_[static_cast<size_t>(parent)];
    LeafRegion right_region = left_region;
    left_region[static_cast<size_t>(cand.feature)].hi = static_cast<uint16_t>(cand.threshold);
    right_region[static_cast<size_t>(cand.feature)].lo = static_cast<uint16_t>(cand.threshold + 1);
    regions_.push_back(std::move(left_region));
    regions_.push_back(std::move(right_region));

    leaves_.resize(tree_.nodes.size());
    LeafState& ls = leaves_[static_cast<size_t>(left_id)];
    LeafState& rs = leaves_[static_cast<size_t>(right_id)];
    ls.row_begin = parent_begin;
    ls.row_end = mid_pos;
    rs.row_begin = mid_pos;
    rs.row_end = parent_end;
    ls.stats = cand.left_stats;
    rs.stats = cand.right_stats;

    // Build the smaller child's histogram from its rows; the sibling comes
    // from subtraction against the parent. Children at the depth cap can
    // never split, so their histograms are not materialized.
    if (left.depth < config_.max_depth) {
        const std::span<const size_t> left_rows{row_index_.data() + ls.row_begin,
                                                ls.row_end - ls.row_begin};
        const std::span<const size_t> right_rows{row_index_.data() + rs.row_begin,
                                                 rs.row_end - rs.row_begin};
        if (left_rows.size() <= right_rows.size()) {
            build_histogram(ds_, layout_, left_rows, grad_hess_, &ls.hist);
            subtract_histogram(parent_hist, ls.hist, &rs.hist);
        } else {
            build_histogram(ds_, layout_, right_rows, grad_hess_, &rs.hist);
            subtract_histogram(parent_hist, rs.hist, &ls.hist);
        }
    }
    return parent;
}

Tree TreeGrower::grow(std::span<const size_t> rows, std::span<const GradHess> grad_hess,
                      const GrowObserver& observer) {
    start(rows, grad_hess);

    std::priority_queue<QueueEntry> queue;
    std::vector<SplitCandidate> candidates(1);
    candidates[0] = find_best_split(0);
    if (candidates[0].valid) queue.push({candidates[0].penalized_gain, 0, candidates[0].version});

    int open_leaves = 1;
    int order = 0;
    while (open_leaves < config_.num_leaves && !queue.empty()) {
        const QueueEntry entry = queue.top();
        queue.pop();
        const NodeId leaf = entry.leaf;
        if (!tree_.nodes[static_cast<size_t>(leaf)].is_leaf) continue;  // already split
        if (entry.version != leaves_[static_cast<size_t>(leaf)].version) {
            // Constraints moved under this entry; the fresh candidate was
            // already queued when the leaf was reported changed.
            continue;
        }
        const SplitCandidate cand = candidates[static_cast<size_t>(leaf)];
        if (!cand.valid || cand.version != entry.version) continue;

        const NodeId node = execute_split(cand, ++order);
        ++open_leaves;
        const TreeNode& n = tree_.nodes[static_cast<size_t>(node)];
        const ConstraintUpdateReport report = engine_->on_split(view(), node, cand);
        if (observer) observer(view(), node, report);

        candidates.resize(tree_.nodes.size());
        for (const NodeId child : {n.left, n.right}) {
            candidates[static_cast<size_t>(child)] = find_best_split(child);
            const SplitCandidate& cc = candidates[static_cast<size_t>(child)];
            if (cc.valid) queue.push({cc.penalized_gain, child, cc.version});
        }
        for (const NodeId changed : report.changed_leaves) {
            if (!tree_.nodes[static_cast<size_t>(changed)].is_leaf) continue;
            if (changed == n.left || changed == n.right) continue;
            leaves_[static_cast<size_t>(changed)].version += 1;
            candidates[static_cast<size_t>(changed)] = find_best_split(changed);
            const SplitCandidate& cc = candidates[static_cast<size_t>(changed)];
            if (cc.valid) queue.push({cc.penalized_gain, changed, cc.version});
        }
    }
    return tree_;
}

Tree TreeGrower::grow_forced(std::span<const size_t> rows, std::span<const GradHess> grad_hess,
                             std::span<const ForcedSplit> script, const GrowObserver& observer) {
    start(rows, grad_hess);
    int order = 0;
    for (const ForcedSplit& step : script) {
        if (step.leaf < 0 || static_cast<size_t>(step.leaf) >= tree_.nodes.size() ||
            !tree_.nodes[static_cast<size_t>(step.leaf)].is_leaf) {
            throw std::invalid_argument("forced split references a non-leaf node");
        }
        const GrowthView v = view();
        LeafState& state = leaves_[static_cast<size_t>(step.leaf)];
        const size_t f = static_cast<size_t>(step.feature);
        if (state.hist.data.empty()) {
            // Scripts may split leaves past the depth cap where normal
            // growth skipped the histogram.
            const std::span<const size_t> rows_span{row_index_.data() + state.row_begin,
                                                    state.row_end - state.row_begin};
            build_histogram(ds_, layout_, rows_span, grad_hess_, &state.hist);
        }

        std::vector<Bounds> left_bounds(ds_.bin_counts[f]), right_bounds(ds_.bin_counts[f]);
        engine_->split_bounds(v, step.leaf, step.feature, left_bounds, right_bounds);
        const Bounds lb = left_bounds[static_cast<size_t>(step.threshold)];
        const Bounds rb = right_bounds[static_cast<size_t>(step.threshold)];

        SplitCandidate cand;
        cand.leaf = step.leaf;
        cand.feature = step.feature;
        cand.threshold = step.threshold;
        const std::span<const GradStats> hist = state.hist.feature(layout_, f, ds_.bin_counts[f]);
        GradStats left;
        for (int t = regions_[static_cast<size_t>(step.leaf)][f].lo; t <= step.threshold; ++t) {
            left += hist[static_cast<size_t>(t)];
        }
        cand.left_stats = left;
        cand.right_stats = state.stats - left;
        if (cand.left_stats.count == 0 || cand.right_stats.count == 0) {
            throw std::invalid_argument("forced split leaves an empty side");
        }
        cand.left_output = constrained_leaf_output(left.grad, left.hess, config_.lambda, lb);
        cand.right_output = constrained_leaf_output(cand.right_stats.grad, cand.right_stats.hess,
                                                    config_.lambda, rb);
        const int dir = engine_->enforcing() ? ds_.monotone_directions[f] : 0;
        const bool violates = (dir > 0 && cand.left_output > cand.right_output) ||
                              (dir < 0 && cand.left_output < cand.right_output);
        if (violates) {
            // Pool both sides to the shared constrained value.
            const Bounds both = Bounds::intersect(lb, rb);
            if (!both.feasible()) {
                throw std::logic_error("forced split: pooled bounds infeasible");
            }
            const double pooled = constrained_leaf_output(
                state.stats.grad, state.stats.hess, config_.lambda, both);
            cand.left_output = cand.right_output = pooled;
        }
        const double parent_output = constrained_leaf_output(
            state.stats.grad, state.stats.hess, config_.lambda, engine_->leaf_bounds(v, step.leaf));
        cand.raw_gain =
            leaf_score(state.stats.grad, state.stats.hess, config_.lambda, parent_output) -
            leaf_score(left.grad, left.hess, config_.lambda, cand.left_output) -
            leaf_score(cand.right_stats.grad, cand.right_stats.hess, config_.lambda,
                       cand.right_output);
        cand.penalized_gain = cand.raw_gain;
        cand.valid = true;

        const NodeId node = execute_split(cand, ++order);
        const ConstraintUpdateReport report = engine_->on_split(view(), node, cand);
        if (observer) observer(view(), node, report);
    }
    return tree_;
}

Tree grow_tree(const BinnedDataset& ds, std::span<const size_t> rows,
               std::span<const GradHess> grad_hess, const TreeConfig& config,
               ConstraintMode mode) {
    auto engine = make_engine(mode);
    TreeGrower grower(ds, config, engine.get());
    return grower.grow(rows, grad_hess);
}

}  // namespace mgbt
