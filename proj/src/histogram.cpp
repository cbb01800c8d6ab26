#include "mgbt/histogram.hpp"

namespace mgbt {

void build_histogram(const BinnedDataset& ds, const HistogramLayout& layout,
                     std::span<const size_t> rows, std::span<const GradHess> grad_hess,
                     Histogram* out) {
    out->data.assign(layout.total_bins(), GradStats{});
    for (size_t f = 0; f < ds.feature_count; ++f) {
        GradStats* base = out->data.data() + layout.offset(f);
        const uint16_t* col = ds.bins[f].data();
        for (size_t r : rows) {
            GradStats& s = base[col[r]];
            s.grad += grad_hess[r].grad;
            s.hess += grad_hess[r].hess;
            s.count += 1;
        }
    }
}

void subtract_histogram(const Histogram& parent, const Histogram& child, Histogram* out) {
    out->data.resize(parent.data.size());
    for (size_t i = 0; i < parent.data.size(); ++i) {
        out->data[i] = parent.data[i] - child.data[i];
    }
}

}  // namespace mgbt
