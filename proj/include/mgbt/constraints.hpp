#pragma once

#include <memory>
#include <span>
#include <vector>

#include "mgbt/bounds.hpp"
#include "mgbt/growth_types.hpp"
#include "mgbt/penalty.hpp"

namespace mgbt {

enum class ConstraintMode { kNone, kBasic, kFast, kSlow };

ConstraintMode constraint_mode_from_string(const std::string& name);
std::string to_string(ConstraintMode mode);

/// One (value, bin interval) piece of a piecewise bound on one feature.
struct ConstraintSegment {
    BinInterval interval;
    double value = 0.0;

    bool operator==(const ConstraintSegment& o) const {
        return interval == o.interval && value == o.value;
    }
};

/// Piecewise per-feature bounds for one leaf: for every feature, sorted
/// disjoint min- and max-segments; points not covered by any segment are
/// unbounded. The effective bound at a region point is the tightest over
/// the segments containing it on any feature.
struct PiecewiseConstraint {
    std::vector<std::vector<ConstraintSegment>> min_segments;  // [feature]
    std::vector<std::vector<ConstraintSegment>> max_segments;  // [feature]
    // Set when a held constraint came from a source narrower than the leaf
    // on two or more features; splitting such a leaf forces recomputation.
    bool needs_recompute_on_split = false;

    bool empty() const;
    bool operator==(const PiecewiseConstraint& o) const {
        return min_segments == o.min_segments && max_segments == o.max_segments;
    }

    /// Tightest bounds over the whole region (min over max-segments etc.).
    Bounds aggregate() const;
};

/// Canonical per-feature profile of the effective bound function over a
/// leaf's region: two equal states always canonicalize identically, no
/// matter how their segments were keyed. Used by the incremental-vs-scratch
/// equality checks.
struct CanonicalBoundProfile {
    std::vector<std::vector<double>> min_profile;  // [feature][bin offset in region]
    std::vector<std::vector<double>> max_profile;

    bool operator==(const CanonicalBoundProfile& o) const {
        return min_profile == o.min_profile && max_profile == o.max_profile;
    }
};

CanonicalBoundProfile canonicalize(const PiecewiseConstraint& c, const LeafRegion& region);

/// Per-leaf constraint bookkeeping behind the tree grower. Engines see the
/// growing tree through GrowthView after each structural change.
class ConstraintEngine {
public:
    virtual ~ConstraintEngine() = default;

    virtual ConstraintMode mode() const = 0;
    bool enforcing() const { return mode() != ConstraintMode::kNone; }

    /// Called once at the start of a growth with the root in place.
    virtual void reset(const GrowthView& view) = 0;

    /// Tightest bounds applying to the leaf's own output (whole region).
    virtual Bounds leaf_bounds(const GrowthView& view, NodeId leaf) const = 0;

    /// Bounds applying to each side of a split of `leaf` on `feature`, for
    /// every threshold t covered by the leaf's region: left spans bins
    /// [region.lo, t], right spans (t, region.hi]. Output spans are indexed
    /// by absolute threshold and must cover [region.lo, region.hi).
    virtual void split_bounds(const GrowthView& view, NodeId leaf, int feature,
                              std::span<Bounds> left, std::span<Bounds> right) const = 0;

    /// Post-split hook: `node` was a leaf and now has two children whose
    /// outputs are final. Returns which other leaves changed.
    virtual ConstraintUpdateReport on_split(const GrowthView& view, NodeId node,
                                            const SplitCandidate& cand) = 0;

    /// Convenience single-threshold view (tests and tooling).
    std::pair<Bounds, Bounds> bounds_for_split(const GrowthView& view, NodeId leaf, int feature,
                                               int threshold) const;
};

std::unique_ptr<ConstraintEngine> make_engine(ConstraintMode mode);

/// Exact per-leaf constraints rebuilt from scratch off the current leaves:
/// for every pair of leaves ordered by a monotone feature and overlapping
/// everywhere else, the lower leaf is capped by the upper leaf's output
/// over their overlap and vice versa. Indexed by node id.
std::vector<PiecewiseConstraint> recompute_all_constraints(const GrowthView& view);

/// Direct access to the slow engine's stored state (inspection in tests).
class SlowEngineInspector {
public:
    static const PiecewiseConstraint* state_of(const ConstraintEngine& engine, NodeId leaf);
};

}  // namespace mgbt
