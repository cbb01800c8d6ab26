#include "mgbt/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mgbt/rng.hpp"

namespace mgbt {

namespace {

// Finite cut points for one feature: equal-frequency quantiles over the
// sorted values; one bin per distinct value when few enough.
std::vector<double> choose_cuts(std::vector<double> values, int max_bins) {
    std::sort(values.begin(), values.end());
    std::vector<double> distinct;
    for (double v : values) {
        if (distinct.empty() || distinct.back() != v) distinct.push_back(v);
    }
    std::vector<double> cuts;
    if (distinct.size() <= 1) return cuts;

    if (distinct.size() <= static_cast<size_t>(max_bins)) {
        cuts.reserve(distinct.size() - 1);
        for (size_t i = 0; i + 1 < distinct.size(); ++i) {
            cuts.push_back(0.5 * (distinct[i] + distinct[i + 1]));
        }
        return cuts;
    }

    const size_t n = values.size();
    for (int k = 1; k < max_bins; ++k) {
        const size_t pos = n * static_cast<size_t>(k) / static_cast<size_t>(max_bins);
        if (pos == 0 || pos >= n) continue;
        if (values[pos - 1] == values[pos]) continue;  // cut would split a tie block
        const double cut = 0.5 * (values[pos - 1] + values[pos]);
        if (cuts.empty() || cuts.back() < cut) cuts.push_back(cut);
    }
    return cuts;
}

}  // namespace

BinnedDataset bin_features(const RawTable& raw, const FeatureSchema& schema, int max_bins) {
    if (max_bins < 2) throw std::invalid_argument("bin_features: max_bins must be >= 2");
    for (size_t f = 0; f < schema.feature_count(); ++f) {
        if (schema.kinds[f] != FeatureKind::kContinuous) {
            throw std::invalid_argument("bin_features: feature '" + schema.feature_names[f] +
                                        "' is not numeric; one-hot encode first");
        }
    }

    BinnedDataset ds;
    ds.feature_count = schema.feature_count();
    ds.row_count = raw.row_count();
    ds.feature_names = schema.feature_names;
    ds.monotone_directions = schema.monotone_directions;
    ds.bins.resize(ds.feature_count);
    ds.bin_upper.resize(ds.feature_count);
    ds.bin_counts.resize(ds.feature_count);
    ds.unsplittable.resize(ds.feature_count);
    if (raw.has_column(schema.label_name)) {
        ds.labels = numeric_column(raw, schema.label_name);
    }

    for (size_t f = 0; f < ds.feature_count; ++f) {
        std::vector<double> values = numeric_column(raw, schema.feature_names[f]);
        ds.bin_upper[f] = choose_cuts(values, max_bins);
        const auto& cuts = ds.bin_upper[f];
        ds.bin_counts[f] = static_cast<uint16_t>(cuts.size() + 1);
        ds.unsplittable[f] = cuts.empty();
        auto& col = ds.bins[f];
        col.resize(ds.row_count);
        for (size_t i = 0; i < ds.row_count; ++i) {
            col[i] = static_cast<uint16_t>(
                std::lower_bound(cuts.begin(), cuts.end(), values[i]) - cuts.begin());
        }
    }
    return ds;
}

BinnedDataset subset_rows(const BinnedDataset& ds, const std::vector<size_t>& rows) {
    BinnedDataset out;
    out.feature_count = ds.feature_count;
    out.row_count = rows.size();
    out.feature_names = ds.feature_names;
    out.bin_upper = ds.bin_upper;
    out.bin_counts = ds.bin_counts;
    out.unsplittable = ds.unsplittable;
    out.monotone_directions = ds.monotone_directions;
    out.bins.resize(ds.feature_count);
    for (size_t f = 0; f < ds.feature_count; ++f) {
        out.bins[f].reserve(rows.size());
        for (size_t r : rows) out.bins[f].push_back(ds.bins[f][r]);
    }
    if (!ds.labels.empty()) {
        out.labels.reserve(rows.size());
        for (size_t r : rows) out.labels.push_back(ds.labels[r]);
    }
    return out;
}

SplitPlan mc_split(size_t rows, double train_ratio, uint64_t trial_seed) {
    if (rows == 0) throw std::invalid_argument("mc_split: no rows");
    if (!(train_ratio > 0.0 && train_ratio < 1.0)) {
        throw std::invalid_argument("mc_split: train_ratio must be in (0, 1)");
    }
    std::vector<size_t> perm(rows);
    std::iota(perm.begin(), perm.end(), size_t{0});
    Rng rng(trial_seed * 0x9e3779b97f4a7c15ull + 0x632be59bd9b4e019ull);
    for (size_t i = rows - 1; i > 0; --i) {
        const size_t j = static_cast<size_t>(rng.next_below(i + 1));
        std::swap(perm[i], perm[j]);
    }
    const size_t n_train = static_cast<size_t>(
        std::floor(train_ratio * static_cast<double>(rows)));
    SplitPlan plan;
    plan.trial_seed = trial_seed;
    plan.train_rows.assign(perm.begin(), perm.begin() + static_cast<ptrdiff_t>(n_train));
    plan.test_rows.assign(perm.begin() + static_cast<ptrdiff_t>(n_train), perm.end());
    return plan;
}

}  // namespace mgbt
