#include "mgbt/cluster_demo.hpp"

#include <cstdio>
#include <numeric>
#include <sstream>

#include "mgbt/booster.hpp"
#include "mgbt/grower.hpp"

namespace mgbt {

namespace {

// Cluster weights chosen so the first split averages to 0.3 on the left
// (40 x 0.2, 10 x 0.7) and 0.6 on the right (20 x 0.5, 10 x 0.8).
struct Cluster {
    double x, y, target;
    int count;
};

constexpr Cluster kClusters[] = {
    {1.0, 3.0, 0.2, 40},  // left-top
    {1.0, 1.0, 0.7, 10},  // left-bottom
    {3.0, 3.0, 0.5, 20},  // right-top
    {3.0, 1.0, 0.8, 10},  // right-bottom
};

BinnedDataset demo_dataset() {
    RawTable table;
    table.column_names = {"x", "y", "label"};
    table.columns.resize(3);
    for (const Cluster& c : kClusters) {
        for (int i = 0; i < c.count; ++i) {
            table.columns[0].push_back(std::to_string(c.x));
            table.columns[1].push_back(std::to_string(c.y));
            table.columns[2].push_back(std::to_string(c.target));
        }
    }
    FeatureSchema schema;
    schema.feature_names = {"x", "y"};
    schema.kinds = {FeatureKind::kContinuous, FeatureKind::kContinuous};
    schema.monotone_directions = {+1, 0};
    schema.label_name = "label";
    return bin_features(table, schema, 255);
}

}  // namespace

ClusterDemoResult run_cluster_demo(ConstraintMode mode) {
    const BinnedDataset ds = demo_dataset();
    std::vector<size_t> rows(ds.row_count);
    std::iota(rows.begin(), rows.end(), size_t{0});

    const double base = base_margin_for(ObjectiveKind::kL2, ds.labels, rows);
    std::vector<GradHess> gh(ds.row_count);
    for (size_t r = 0; r < ds.row_count; ++r) {
        gh[r] = grad_hess(ObjectiveKind::kL2, base, ds.labels[r]);
    }

    TreeConfig cfg;
    cfg.num_leaves = 8;
    cfg.max_depth = 4;
    cfg.min_data_in_leaf = 1;
    cfg.lambda = 0.0;

    auto engine = make_engine(mode);
    TreeGrower grower(ds, cfg, engine.get());
    // Root x-split, then y on the right child, then y on the left child.
    const ForcedSplit script[] = {{0, 0, 0}, {2, 1, 0}, {1, 1, 0}};
    const Tree tree = grower.grow_forced(rows, gh, script);

    // Left-bottom cluster row: x bin 0, y bin 0 (learning rate 1).
    ClusterDemoResult result;
    result.mode = mode;
    result.left_bottom_value = base + tree.predict_bins({0, 0});
    switch (mode) {
        case ConstraintMode::kBasic: result.expected = 0.45; break;
        case ConstraintMode::kFast: result.expected = 0.5; break;
        case ConstraintMode::kSlow: result.expected = 0.7; break;
        case ConstraintMode::kNone: result.expected = 0.7; break;
    }
    return result;
}

std::vector<ClusterDemoResult> run_cluster_demo_all() {
    return {run_cluster_demo(ConstraintMode::kBasic), run_cluster_demo(ConstraintMode::kFast),
            run_cluster_demo(ConstraintMode::kSlow)};
}

std::string cluster_demo_report() {
    std::ostringstream out;
    out << "four-cluster demo, left-bottom leaf value per constraint mode\n";
    char line[128];
    for (const ClusterDemoResult& r : run_cluster_demo_all()) {
        std::snprintf(line, sizeof(line), "  %-6s %.9f (expected %.2f)\n",
                      to_string(r.mode).c_str(), r.left_bottom_value, r.expected);
        out << line;
    }
    return out.str();
}

}  // namespace mgbt
