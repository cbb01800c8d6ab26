#pragma once

#include <span>
#include <vector>

#include "mgbt/dataset.hpp"
#include "mgbt/growth_types.hpp"
#include "mgbt/objective.hpp"

namespace mgbt {

/// Concatenated per-feature bin layout for one dataset.
class HistogramLayout {
public:
    explicit HistogramLayout(const BinnedDataset& ds) {
        offsets_.resize(ds.feature_count + 1, 0);
        for (size_t f = 0; f < ds.feature_count; ++f) {
            offsets_[f + 1] = offsets_[f] + ds.bin_counts[f];
        }
    }
    size_t offset(size_t feature) const { return offsets_[feature]; }
    size_t total_bins() const { return offsets_.back(); }

private:
    std::vector<size_t> offsets_;
};

/// Per-bin gradient/hessian/count sums over one leaf's rows.
struct Histogram {
    std::vector<GradStats> data;

    std::span<const GradStats> feature(const HistogramLayout& layout, size_t f,
                                       size_t bin_count) const {
        return {data.data() + layout.offset(f), bin_count};
    }
};

void build_histogram(const BinnedDataset& ds, const HistogramLayout& layout,
                     std::span<const size_t> rows, std::span<const GradHess> grad_hess,
                     Histogram* out);

/// Sibling subtraction: out = parent - child, bin by bin.
void subtract_histogram(const Histogram& parent, const Histogram& child, Histogram* out);

}  // namespace mgbt
