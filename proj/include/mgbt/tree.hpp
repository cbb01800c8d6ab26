#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mgbt/dataset.hpp"

namespace mgbt {

using NodeId = int32_t;
constexpr NodeId kNoNode = -1;

struct TreeNode {
    NodeId id = kNoNode;
    bool is_leaf = true;
    int feature = -1;            // internal only
    int threshold = -1;          // internal only; bin <= threshold goes left
    NodeId left = kNoNode;
    NodeId right = kNoNode;
    NodeId parent = kNoNode;
    double leaf_output = 0.0;    // leaf only
    int depth = 0;               // root = 0
    int split_order = -1;        // internal only; 1-based pop order
    bool is_monotone_split = false;
    double split_gain = 0.0;     // penalized gain of the executed split
};

struct Tree {
    std::vector<TreeNode> nodes;

    const TreeNode& root() const { return nodes.front(); }
    size_t leaf_count() const;
    std::vector<NodeId> leaf_ids() const;

    /// Routes one binned row to its leaf output.
    double predict_bins(const std::vector<uint16_t>& row_bins) const;

    /// Leaf output for row `row` of a binned dataset.
    double predict_row(const BinnedDataset& ds, size_t row) const;
};

/// Inclusive bin interval a node covers on one feature.
struct BinInterval {
    uint16_t lo = 0;
    uint16_t hi = 0;

    bool contains(uint16_t b) const { return lo <= b && b <= hi; }
    bool overlaps(const BinInterval& o) const { return lo <= o.hi && o.lo <= hi; }
    bool operator==(const BinInterval& o) const { return lo == o.lo && hi == o.hi; }
};

/// Axis-aligned box of per-feature bin intervals.
using LeafRegion = std::vector<BinInterval>;

/// Region of every node, derived from the split structure and the
/// per-feature bin counts (root spans all bins of every feature).
std::vector<LeafRegion> node_regions(const Tree& tree, const std::vector<uint16_t>& bin_counts);

/// Graphviz text: internal nodes labeled feature/threshold/gain/order,
/// monotone splits filled green, leaves labeled with outputs.
std::string export_dot(const Tree& tree, const std::vector<std::string>& feature_names = {});

/// JSON dump / reload of the node array.
std::string tree_to_json(const Tree& tree);
Tree tree_from_json(const std::string& text);

}  // namespace mgbt
