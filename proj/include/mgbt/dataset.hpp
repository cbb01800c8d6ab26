#pragma once

#include <cstdint>
#include <vector>

#include "mgbt/schema.hpp"
#include "mgbt/table.hpp"

namespace mgbt {

/// Column-binned training substrate: per-feature bin ordinals per row,
/// the finite upper cut points separating bins, labels and monotone
/// directions. Bin b covers (cut[b-1], cut[b]] with the last bin open.
struct BinnedDataset {
    size_t feature_count = 0;
    size_t row_count = 0;
    std::vector<std::string> feature_names;
    std::vector<std::vector<uint16_t>> bins;        // [feature][row]
    std::vector<std::vector<double>> bin_upper;      // [feature], size bin_count-1
    std::vector<uint16_t> bin_counts;                // [feature]
    std::vector<bool> unsplittable;                  // [feature], single-bin features
    std::vector<double> labels;
    std::vector<int> monotone_directions;            // [feature]

    uint16_t bin_of(size_t feature, size_t row) const { return bins[feature][row]; }
};

/// Equal-frequency binning over each feature's values, capped at max_bins.
/// Features with at most max_bins distinct values get one bin per distinct
/// value; identical candidate cut points are merged. Constant features end
/// up with a single bin and are flagged unsplittable.
BinnedDataset bin_features(const RawTable& raw, const FeatureSchema& schema, int max_bins = 255);

/// Train/test partition of row indices for one Monte-Carlo trial.
struct SplitPlan {
    std::vector<size_t> train_rows;
    std::vector<size_t> test_rows;
    uint64_t trial_seed = 0;
};

/// Deterministic random subsampling: a seed-keyed permutation whose first
/// floor(train_ratio * rows) indices form the training set.
SplitPlan mc_split(size_t rows, double train_ratio, uint64_t trial_seed);

/// Row-subset copy sharing the bin structure (cuts, counts, directions).
BinnedDataset subset_rows(const BinnedDataset& ds, const std::vector<size_t>& rows);

}  // namespace mgbt
