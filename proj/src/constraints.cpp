#include "mgbt/constraints.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <stdexcept>

namespace mgbt {

ConstraintMode constraint_mode_from_string(const std::string& name) {
    if (name == "none") return ConstraintMode::kNone;
    if (name == "basic") return ConstraintMode::kBasic;
    if (name == "fast") return ConstraintMode::kFast;
    if (name == "slow") return ConstraintMode::kSlow;
    throw std::invalid_argument("unknown monotone method '" + name + "'");
}

std::string to_string(ConstraintMode mode) {
    switch (mode) {
        case ConstraintMode::kNone: return "none";
        case ConstraintMode::kBasic: return "basic";
        case ConstraintMode::kFast: return "fast";
        case ConstraintMode::kSlow: return "slow";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// PiecewiseConstraint
// ---------------------------------------------------------------------------

namespace {

// Pointwise tighten of a per-feature profile: over `iv` the profile value
// becomes tighter(old, v) (or v where uncovered); segments stay sorted,
// disjoint, and merged when adjacent with equal values.
void insert_segment(std::vector<ConstraintSegment>* profile, BinInterval iv, double v,
                    bool take_min) {
    std::vector<ConstraintSegment> out;
    out.reserve(profile->size() + 2);
    int cursor = iv.lo;  // next uncovered bin of iv
    for (const ConstraintSegment& seg : *profile) {
        if (seg.interval.hi < iv.lo || seg.interval.lo > iv.hi) {
            out.push_back(seg);
            continue;
        }
        if (seg.interval.lo < iv.lo) {
            out.push_back({{seg.interval.lo, static_cast<uint16_t>(iv.lo - 1)}, seg.value});
        }
        const int ov_lo = std::max<int>(seg.interval.lo, iv.lo);
        const int ov_hi = std::min<int>(seg.interval.hi, iv.hi);
        if (cursor < ov_lo) {
            out.push_back({{static_cast<uint16_t>(cursor), static_cast<uint16_t>(ov_lo - 1)}, v});
        }
        const double tightened = take_min ? std::min(seg.value, v) : std::max(seg.value, v);
        out.push_back({{static_cast<uint16_t>(ov_lo), static_cast<uint16_t>(ov_hi)}, tightened});
        cursor = ov_hi + 1;
        if (seg.interval.hi > iv.hi) {
            out.push_back({{static_cast<uint16_t>(iv.hi + 1), seg.interval.hi}, seg.value});
        }
    }
    if (cursor <= iv.hi) {
        out.push_back({{static_cast<uint16_t>(cursor), iv.hi}, v});
    }
    std::sort(out.begin(), out.end(), [](const ConstraintSegment& a, const ConstraintSegment& b) {
        return a.interval.lo < b.interval.lo;
    });
    std::vector<ConstraintSegment> merged;
    for (const auto& seg : out) {
        if (!merged.empty() && merged.back().value == seg.value &&
            merged.back().interval.hi + 1 == seg.interval.lo) {
            merged.back().interval.hi = seg.interval.hi;
        } else {
            merged.push_back(seg);
        }
    }
    *profile = std::move(merged);
}

// Clips a profile to [lo, hi]; segments outside vanish.
void clip_profile(std::vector<ConstraintSegment>* profile, uint16_t lo, uint16_t hi) {
    std::vector<ConstraintSegment> out;
    for (auto seg : *profile) {
        if (seg.interval.hi < lo || seg.interval.lo > hi) continue;
        seg.interval.lo = std::max(seg.interval.lo, lo);
        seg.interval.hi = std::min(seg.interval.hi, hi);
        out.push_back(seg);
    }
    *profile = std::move(out);
}

}  // namespace

bool PiecewiseConstraint::empty() const {
    for (const auto& p : min_segments) {
        if (!p.empty()) return false;
    }
    for (const auto& p : max_segments) {
        if (!p.empty()) return false;
    }
    return true;
}

Bounds PiecewiseConstraint::aggregate() const {
    Bounds b;
    for (const auto& profile : min_segments) {
        for (const auto& seg : profile) b.tighten_min(seg.value);
    }
    for (const auto& profile : max_segments) {
        for (const auto& seg : profile) b.tighten_max(seg.value);
    }
    return b;
}

CanonicalBoundProfile canonicalize(const PiecewiseConstraint& c, const LeafRegion& region) {
    const size_t n_features = region.size();
    CanonicalBoundProfile out;
    out.min_profile.resize(n_features);
    out.max_profile.resize(n_features);

    auto expand = [&](const std::vector<ConstraintSegment>& profile, size_t g, double none,
                      bool take_min) {
        std::vector<double> arr(region[g].hi - region[g].lo + 1, none);
        for (const auto& seg : profile) {
            for (int v = seg.interval.lo; v <= seg.interval.hi; ++v) {
                double& slot = arr[static_cast<size_t>(v - region[g].lo)];
                slot = take_min ? std::min(slot, seg.value) : std::max(slot, seg.value);
            }
        }
        return arr;
    };

    std::vector<std::vector<double>> raw_max(n_features), raw_min(n_features);
    std::vector<double> loosest_max(n_features), loosest_min(n_features);
    for (size_t g = 0; g < n_features; ++g) {
        raw_max[g] = expand(c.max_segments[g], g, kPosInf, true);
        raw_min[g] = expand(c.min_segments[g], g, kNegInf, false);
        loosest_max[g] = *std::max_element(raw_max[g].begin(), raw_max[g].end());
        loosest_min[g] = *std::min_element(raw_min[g].begin(), raw_min[g].end());
    }
    // The effective bound at a point is the tightest over per-feature
    // profiles; the canonical per-feature form folds in the loosest value
    // reachable on the other axes, making equal effective functions compare
    // equal regardless of which feature their segments were keyed on.
    for (size_t g = 0; g < n_features; ++g) {
        double cross_max = kPosInf, cross_min = kNegInf;
        for (size_t h = 0; h < n_features; ++h) {
            if (h == g) continue;
            cross_max = std::min(cross_max, loosest_max[h]);
            cross_min = std::max(cross_min, loosest_min[h]);
        }
        out.max_profile[g] = std::move(raw_max[g]);
        out.min_profile[g] = std::move(raw_min[g]);
        for (double& v : out.max_profile[g]) v = std::min(v, cross_max);
        for (double& v : out.min_profile[g]) v = std::max(v, cross_min);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Upward walk over monotone ancestors with pruned opposite-branch descent
// ---------------------------------------------------------------------------

namespace {

struct OppositeVisit {
    NodeId ancestor = kNoNode;
    int feature = -1;
    // True when the split node's side of the ancestor is the low-output
    // side (left for increasing, right for decreasing).
    bool from_low_side = false;
    NodeId leaf = kNoNode;
};

// Visits every leaf in the opposite branch of each monotone ancestor of
// `start`, skipping subtrees whose region is disjoint from `start`'s region
// on any feature other than the ancestor's split feature.
void visit_opposite_leaves(const GrowthView& view, NodeId start,
                           const std::function<void(const OppositeVisit&)>& fn) {
    const auto& nodes = view.tree.nodes;
    const LeafRegion& start_region = view.regions[static_cast<size_t>(start)];
    NodeId node = start;
    while (nodes[static_cast<size_t>(node)].parent != kNoNode) {
        const NodeId parent = nodes[static_cast<size_t>(node)].parent;
        const TreeNode& pn = nodes[static_cast<size_t>(parent)];
        const int dir = view.monotone_directions[static_cast<size_t>(pn.feature)];
        if (dir != 0) {
            const bool from_left = pn.left == node;
            const NodeId opposite = from_left ? pn.right : pn.left;
            OppositeVisit visit;
            visit.ancestor = parent;
            visit.feature = pn.feature;
            visit.from_low_side = (dir > 0) == from_left;
            std::vector<NodeId> stack{opposite};
            while (!stack.empty()) {
                const NodeId cur = stack.back();
                stack.pop_back();
                const LeafRegion& region = view.regions[static_cast<size_t>(cur)];
                bool disjoint = false;
                for (size_t g = 0; g < region.size(); ++g) {
                    if (static_cast<int>(g) == pn.feature) continue;
                    if (!region[g].overlaps(start_region[g])) {
                        disjoint = true;
                        break;
                    }
                }
                if (disjoint) continue;
                const TreeNode& cn = nodes[static_cast<size_t>(cur)];
                if (cn.is_leaf) {
                    visit.leaf = cur;
                    fn(visit);
                } else {
                    stack.push_back(cn.right);
                    stack.push_back(cn.left);
                }
            }
        }
        node = parent;
    }
}

bool overlaps_except(const LeafRegion& a, const LeafRegion& b, int skip_feature) {
    for (size_t g = 0; g < a.size(); ++g) {
        if (static_cast<int>(g) == skip_feature) continue;
        if (!a[g].overlaps(b[g])) return false;
    }
    return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// Engines
// ---------------------------------------------------------------------------

std::pair<Bounds, Bounds> ConstraintEngine::bounds_for_split(const GrowthView& view, NodeId leaf,
                                                             int feature, int threshold) const {
    const size_t nb = view.bin_counts[static_cast<size_t>(feature)];
    std::vector<Bounds> left(nb), right(nb);
    split_bounds(view, leaf, feature, left, right);
    return {left[static_cast<size_t>(threshold)], right[static_cast<size_t>(threshold)]};
}

namespace {

class NoneEngine final : public ConstraintEngine {
public:
    ConstraintMode mode() const override { return ConstraintMode::kNone; }
    void reset(const GrowthView&) override {}
    Bounds leaf_bounds(const GrowthView&, NodeId) const override { return {}; }
    void split_bounds(const GrowthView&, NodeId, int, std::span<Bounds> left,
                      std::span<Bounds> right) const override {
        std::fill(left.begin(), left.end(), Bounds{});
        std::fill(right.begin(), right.end(), Bounds{});
    }
    ConstraintUpdateReport on_split(const GrowthView&, NodeId, const SplitCandidate&) override {
        return {};
    }
};

// Shared storage for the engines that keep one (min, max) pair per leaf.
class PairBoundsEngine : public ConstraintEngine {
public:
    void reset(const GrowthView& view) override {
        bounds_.assign(view.tree.nodes.size(), Bounds{});
    }
    Bounds leaf_bounds(const GrowthView&, NodeId leaf) const override {
        return bounds_[static_cast<size_t>(leaf)];
    }
    void split_bounds(const GrowthView&, NodeId leaf, int, std::span<Bounds> left,
                      std::span<Bounds> right) const override {
        const Bounds b = bounds_[static_cast<size_t>(leaf)];
        std::fill(left.begin(), left.end(), b);
        std::fill(right.begin(), right.end(), b);
    }

protected:
    void inherit_children(const GrowthView& view, NodeId node) {
        bounds_.resize(view.tree.nodes.size(), Bounds{});
        const TreeNode& n = view.tree.nodes[static_cast<size_t>(node)];
        bounds_[static_cast<size_t>(n.left)] = bounds_[static_cast<size_t>(node)];
        bounds_[static_cast<size_t>(n.right)] = bounds_[static_cast<size_t>(node)];
    }

    std::vector<Bounds> bounds_;
};

// Midpoint baseline: a monotone split walls its children off at the mean
// of their two outputs; nothing ever propagates across branches.
class BasicEngine final : public PairBoundsEngine {
public:
    ConstraintMode mode() const override { return ConstraintMode::kBasic; }

    ConstraintUpdateReport on_split(const GrowthView& view, NodeId node,
                                    const SplitCandidate& cand) override {
        inherit_children(view, node);
        const TreeNode& n = view.tree.nodes[static_cast<size_t>(node)];
        const int dir = view.monotone_directions[static_cast<size_t>(n.feature)];
        if (dir != 0) {
            const double mid = 0.5 * (cand.left_output + cand.right_output);
            Bounds& left = bounds_[static_cast<size_t>(n.left)];
            Bounds& right = bounds_[static_cast<size_t>(n.right)];
            if (dir > 0) {
                left.tighten_max(mid);
                right.tighten_min(mid);
            } else {
                left.tighten_min(mid);
                right.tighten_max(mid);
            }
        }
        return {};
    }
};

// Single-bound method: children are fenced by their sibling's output, and
// every split walks up the tree to tighten leaves across monotone
// ancestors with the extremal overlapping new output.
class FastEngine final : public PairBoundsEngine {
public:
    ConstraintMode mode() const override { return ConstraintMode::kFast; }

    ConstraintUpdateReport on_split(const GrowthView& view, NodeId node,
                                    const SplitCandidate& cand) override {
        inherit_children(view, node);
        const TreeNode& n = view.tree.nodes[static_cast<size_t>(node)];
        const int dir = view.monotone_directions[static_cast<size_t>(n.feature)];
        if (dir != 0) {
            Bounds& left = bounds_[static_cast<size_t>(n.left)];
            Bounds& right = bounds_[static_cast<size_t>(n.right)];
            if (dir > 0) {
                left.tighten_max(cand.right_output);
                right.tighten_min(cand.left_output);
            } else {
                left.tighten_min(cand.right_output);
                right.tighten_max(cand.left_output);
            }
        }

        ConstraintUpdateReport report;
        const NodeId children[2] = {n.left, n.right};
        const double outputs[2] = {cand.left_output, cand.right_output};
        visit_opposite_leaves(view, node, [&](const OppositeVisit& visit) {
            Bounds& b = bounds_[static_cast<size_t>(visit.leaf)];
            const LeafRegion& leaf_region = view.regions[static_cast<size_t>(visit.leaf)];
            bool any = false;
            double extremal = 0.0;
            for (int c = 0; c < 2; ++c) {
                const LeafRegion& child_region =
                    view.regions[static_cast<size_t>(children[c])];
                if (!overlaps_except(child_region, leaf_region, visit.feature)) continue;
                if (!any) {
                    extremal = outputs[c];
                } else {
                    extremal = visit.from_low_side ? std::max(extremal, outputs[c])
                                                   : std::min(extremal, outputs[c]);
                }
                any = true;
            }
            if (!any) return;
            bool changed = false;
            if (visit.from_low_side) {
                // New outputs sit below this leaf; its floor rises to the
                // highest overlapping output.
                if (extremal > b.min) {
                    b.min = extremal;
                    changed = true;
                }
            } else {
                if (extremal < b.max) {
                    b.max = extremal;
                    changed = true;
                }
            }
            if (!b.feasible()) {
                throw std::logic_error("fast constraint propagation produced min > max");
            }
            if (changed) report.changed_leaves.push_back(visit.leaf);
        });
        std::sort(report.changed_leaves.begin(), report.changed_leaves.end());
        return report;
    }
};

// ---------------------------------------------------------------------------
// Slow engine: piecewise per-feature bounds, exact via full recomputation
// whenever a split touches the existing constraint web.
// ---------------------------------------------------------------------------

// Records on `target` the bound contributed by `source`'s output across a
// monotone feature: keyed on the first feature where the source covers only
// part of the target, or stored over a full axis when it covers everything.
void add_pair_constraint(PiecewiseConstraint* state, const LeafRegion& target,
                         const LeafRegion& source, int monotone_feature, double value,
                         bool is_max) {
    const size_t n_features = target.size();
    int key = -1;
    int proper = 0;
    for (size_t g = 0; g < n_features; ++g) {
        if (static_cast<int>(g) == monotone_feature) continue;
        const BinInterval ov{std::max(target[g].lo, source[g].lo),
                             std::min(target[g].hi, source[g].hi)};
        if (!(ov == target[g])) {
            ++proper;
            if (key < 0) key = static_cast<int>(g);
        }
    }
    BinInterval interval;
    if (key < 0) {
        for (size_t g = 0; g < n_features; ++g) {
            if (static_cast<int>(g) != monotone_feature) {
                key = static_cast<int>(g);
                break;
            }
        }
        if (key < 0) key = monotone_feature;  // single-feature dataset
        interval = target[static_cast<size_t>(key)];
    } else {
        interval = {std::max(target[static_cast<size_t>(key)].lo,
                             source[static_cast<size_t>(key)].lo),
                    std::min(target[static_cast<size_t>(key)].hi,
                             source[static_cast<size_t>(key)].hi)};
    }
    if (proper >= 2) state->needs_recompute_on_split = true;
    auto& profiles = is_max ? state->max_segments : state->min_segments;
    insert_segment(&profiles[static_cast<size_t>(key)], interval, value, is_max);
}

class SlowEngine final : public ConstraintEngine {
public:
    ConstraintMode mode() const override { return ConstraintMode::kSlow; }

    void reset(const GrowthView& view) override {
        states_.assign(view.tree.nodes.size(), empty_state(view));
    }

    Bounds leaf_bounds(const GrowthView&, NodeId leaf) const override {
        return states_[static_cast<size_t>(leaf)].aggregate();
    }

    void split_bounds(const GrowthView& view, NodeId leaf, int feature, std::span<Bounds> left,
                      std::span<Bounds> right) const override {
        const PiecewiseConstraint& st = states_[static_cast<size_t>(leaf)];
        const LeafRegion& region = view.regions[static_cast<size_t>(leaf)];
        const BinInterval span = region[static_cast<size_t>(feature)];

        // Segments on other features cover both sides; segments on the split
        // feature distribute by threshold via prefix/suffix sweeps.
        Bounds base;
        for (size_t g = 0; g < st.min_segments.size(); ++g) {
            if (static_cast<int>(g) == feature) continue;
            for (const auto& seg : st.min_segments[g]) base.tighten_min(seg.value);
            for (const auto& seg : st.max_segments[g]) base.tighten_max(seg.value);
        }
        const auto& f_min = st.min_segments[static_cast<size_t>(feature)];
        const auto& f_max = st.max_segments[static_cast<size_t>(feature)];

        Bounds acc = base;
        size_t i_min = 0, i_max = 0;
        for (int t = span.lo; t < span.hi; ++t) {
            while (i_min < f_min.size() && f_min[i_min].interval.lo <= t) {
                acc.tighten_min(f_min[i_min].value);
                ++i_min;
            }
            while (i_max < f_max.size() && f_max[i_max].interval.lo <= t) {
                acc.tighten_max(f_max[i_max].value);
                ++i_max;
            }
            left[static_cast<size_t>(t)] = acc;
        }
        acc = base;
        size_t r_min = f_min.size(), r_max = f_max.size();
        for (int t = span.hi - 1; t >= span.lo; --t) {
            while (r_min > 0 && f_min[r_min - 1].interval.hi > t) {
                acc.tighten_min(f_min[r_min - 1].value);
                --r_min;
            }
            while (r_max > 0 && f_max[r_max - 1].interval.hi > t) {
                acc.tighten_max(f_max[r_max - 1].value);
                --r_max;
            }
            right[static_cast<size_t>(t)] = acc;
        }
    }

    ConstraintUpdateReport on_split(const GrowthView& view, NodeId node,
                                    const SplitCandidate& cand) override {
        states_.resize(view.tree.nodes.size(), empty_state(view));
        const TreeNode& n = view.tree.nodes[static_cast<size_t>(node)];
        const int split_feature = n.feature;
        const int dir = view.monotone_directions[static_cast<size_t>(split_feature)];

        ConstraintUpdateReport report;
        const bool fire =
            states_[static_cast<size_t>(node)].needs_recompute_on_split || source_trigger(view, node);
        if (fire) {
            std::vector<PiecewiseConstraint> fresh = recompute_all_constraints(view);
            report.recomputed = true;
            for (const NodeId leaf : view.tree.leaf_ids()) {
                if (leaf == n.left || leaf == n.right) continue;
                const auto& region = view.regions[static_cast<size_t>(leaf)];
                if (!(canonicalize(states_[static_cast<size_t>(leaf)], region) ==
                      canonicalize(fresh[static_cast<size_t>(leaf)], region))) {
                    report.changed_leaves.push_back(leaf);
                }
            }
            states_ = std::move(fresh);
        } else {
            // Children take the parent's constraints restricted to their
            // regions; a monotone split additionally seeds each child with
            // its sibling's output.
            states_[static_cast<size_t>(n.left)] =
                restrict(states_[static_cast<size_t>(node)], view, n.left, split_feature);
            states_[static_cast<size_t>(n.right)] =
                restrict(states_[static_cast<size_t>(node)], view, n.right, split_feature);
            if (dir != 0) {
                const bool left_is_low = dir > 0;
                const NodeId low = left_is_low ? n.left : n.right;
                const NodeId high = left_is_low ? n.right : n.left;
                const double low_out = left_is_low ? cand.left_output : cand.right_output;
                const double high_out = left_is_low ? cand.right_output : cand.left_output;
                add_pair_constraint(&states_[static_cast<size_t>(low)],
                                    view.regions[static_cast<size_t>(low)],
                                    view.regions[static_cast<size_t>(high)], split_feature,
                                    high_out, /*is_max=*/true);
                add_pair_constraint(&states_[static_cast<size_t>(high)],
                                    view.regions[static_cast<size_t>(high)],
                                    view.regions[static_cast<size_t>(low)], split_feature,
                                    low_out, /*is_max=*/false);
            }
            // Cross-branch tightening from the two new outputs, applied only
            // over each opposite leaf's actual overlap.
            const NodeId children[2] = {n.left, n.right};
            const double outputs[2] = {cand.left_output, cand.right_output};
            visit_opposite_leaves(view, node, [&](const OppositeVisit& visit) {
                PiecewiseConstraint& st = states_[static_cast<size_t>(visit.leaf)];
                const PiecewiseConstraint before = st;
                const LeafRegion& leaf_region = view.regions[static_cast<size_t>(visit.leaf)];
                for (int c = 0; c < 2; ++c) {
                    const LeafRegion& child_region =
                        view.regions[static_cast<size_t>(children[c])];
                    if (!overlaps_except(child_region, leaf_region, visit.feature)) continue;
                    // A leaf above the new outputs gains floors; below, caps.
                    add_pair_constraint(&st, leaf_region, child_region, visit.feature,
                                        outputs[c], /*is_max=*/!visit.from_low_side);
                }
                if (!st.aggregate().feasible()) {
                    throw std::logic_error("slow constraint propagation produced min > max");
                }
                if (!(canonicalize(before, leaf_region) == canonicalize(st, leaf_region))) {
                    report.changed_leaves.push_back(visit.leaf);
                }
            });
        }
        states_[static_cast<size_t>(node)] = empty_state(view);  // now internal
        std::sort(report.changed_leaves.begin(), report.changed_leaves.end());
        return report;
    }

    const PiecewiseConstraint& state_of(NodeId leaf) const {
        return states_[static_cast<size_t>(leaf)];
    }

private:
    static PiecewiseConstraint empty_state(const GrowthView& view) {
        PiecewiseConstraint st;
        st.min_segments.resize(view.bin_counts.size());
        st.max_segments.resize(view.bin_counts.size());
        return st;
    }

    static PiecewiseConstraint restrict(const PiecewiseConstraint& parent, const GrowthView& view,
                                        NodeId child, int split_feature) {
        PiecewiseConstraint out = parent;
        const BinInterval iv =
            view.regions[static_cast<size_t>(child)][static_cast<size_t>(split_feature)];
        clip_profile(&out.min_segments[static_cast<size_t>(split_feature)], iv.lo, iv.hi);
        clip_profile(&out.max_segments[static_cast<size_t>(split_feature)], iv.lo, iv.hi);
        return out;
    }

    // An existing constraint held by an opposite-branch leaf may have been
    // sourced by the leaf we just split; its bound would then be stale.
    // Detection is conservative: any direction-matching segment whose
    // interval intersects the split leaf's region fires a recomputation.
    bool source_trigger(const GrowthView& view, NodeId node) const {
        const LeafRegion& region = view.regions[static_cast<size_t>(node)];
        bool fire = false;
        visit_opposite_leaves(view, node, [&](const OppositeVisit& visit) {
            if (fire) return;
            const PiecewiseConstraint& st = states_[static_cast<size_t>(visit.leaf)];
            const auto& profiles = visit.from_low_side ? st.min_segments : st.max_segments;
            for (size_t h = 0; h < profiles.size(); ++h) {
                for (const auto& seg : profiles[h]) {
                    if (static_cast<int>(h) == visit.feature ||
                        seg.interval.overlaps(region[h])) {
                        fire = true;
                        return;
                    }
                }
            }
        });
        return fire;
    }

    std::vector<PiecewiseConstraint> states_;

    friend class mgbt::SlowEngineInspector;
};

}  // namespace

const PiecewiseConstraint* SlowEngineInspector::state_of(const ConstraintEngine& engine,
                                                         NodeId leaf) {
    const auto* slow = dynamic_cast<const SlowEngine*>(&engine);
    if (slow == nullptr) return nullptr;
    return &slow->state_of(leaf);
}

std::vector<PiecewiseConstraint> recompute_all_constraints(const GrowthView& view) {
    const size_t n_features = view.bin_counts.size();
    std::vector<PiecewiseConstraint> states(view.tree.nodes.size());
    for (auto& st : states) {
        st.min_segments.resize(n_features);
        st.max_segments.resize(n_features);
    }
    const std::vector<NodeId> leaves = view.tree.leaf_ids();
    for (size_t f = 0; f < n_features; ++f) {
        const int dir = view.monotone_directions[f];
        if (dir == 0) continue;
        for (const NodeId a : leaves) {
            const LeafRegion& ra = view.regions[static_cast<size_t>(a)];
            for (const NodeId b : leaves) {
                if (a == b) continue;
                const LeafRegion& rb = view.regions[static_cast<size_t>(b)];
                // a strictly on the low-output side of b along f
                const bool a_low = dir > 0 ? ra[f].hi < rb[f].lo : ra[f].lo > rb[f].hi;
                if (!a_low) continue;
                if (!overlaps_except(ra, rb, static_cast<int>(f))) continue;
                const double out_a =
                    view.tree.nodes[static_cast<size_t>(a)].leaf_output;
                const double out_b =
                    view.tree.nodes[static_cast<size_t>(b)].leaf_output;
                add_pair_constraint(&states[static_cast<size_t>(a)], ra, rb,
                                    static_cast<int>(f), out_b, /*is_max=*/true);
                add_pair_constraint(&states[static_cast<size_t>(b)], rb, ra,
                                    static_cast<int>(f), out_a, /*is_max=*/false);
            }
        }
    }
    return states;
}

std::unique_ptr<ConstraintEngine> make_engine(ConstraintMode mode) {
    switch (mode) {
        case ConstraintMode::kNone: return std::make_unique<NoneEngine>();
        case ConstraintMode::kBasic: return std::make_unique<BasicEngine>();
        case ConstraintMode::kFast: return std::make_unique<FastEngine>();
        case ConstraintMode::kSlow: return std::make_unique<SlowEngine>();
    }
    throw std::logic_error("unreachable");
}

}  // namespace mgbt
