#include <numeric>

#include "doctest.h"
#include "mgbt/constraints.hpp"
#include "mgbt/grower.hpp"
#include "mgbt/histogram.hpp"
#include "mgbt/rng.hpp"
#include "mgbt/tree.hpp"
#include "support/oracles.hpp"

using namespace mgbt;

namespace {

// Hand-assembled binned dataset: one vector of bin ordinals per feature.
BinnedDataset make_ds(std::vector<std::vector<uint16_t>> bins, std::vector<int> directions,
                      std::vector<double> labels = {}) {
    BinnedDataset ds;
    ds.feature_count = bins.size();
    ds.row_count = bins.front().size();
    ds.bins = std::move(bins);
    ds.monotone_directions = std::move(directions);
    ds.labels = std::move(labels);
    for (size_t f = 0; f < ds.feature_count; ++f) {
        uint16_t max_bin = 0;
        for (uint16_t b : ds.bins[f]) max_bin = std::max(max_bin, b);
        ds.bin_counts.push_back(static_cast<uint16_t>(max_bin + 1));
        ds.unsplittable.push_back(max_bin == 0);
        std::vector<double> cuts(max_bin);
        for (uint16_t c = 0; c < max_bin; ++c) cuts[c] = c + 0.5;
        ds.bin_upper.push_back(std::move(cuts));
        ds.feature_names.push_back("f" + std::to_string(f));
    }
    return ds;
}

std::vector<size_t> all_rows(const BinnedDataset& ds) {
    std::vector<size_t> rows(ds.row_count);
    std::iota(rows.begin(), rows.end(), size_t{0});
    return rows;
}

// Engine stub pinning the root leaf to fixed bounds; used to exercise the
// split finder's clamping without any propagation logic in play.
class FixedBoundsEngine final : public ConstraintEngine {
public:
    explicit FixedBoundsEngine(Bounds b) : bounds_(b) {}
    ConstraintMode mode() const override { return ConstraintMode::kFast; }
    void reset(const GrowthView&) override {}
    Bounds leaf_bounds(const GrowthView&, NodeId) const override { return bounds_; }
    void split_bounds(const GrowthView&, NodeId, int, std::span<Bounds> left,
                      std::span<Bounds> right) const override {
        std::fill(left.begin(), left.end(), bounds_);
        std::fill(right.begin(), right.end(), bounds_);
    }
    ConstraintUpdateReport on_split(const GrowthView&, NodeId, const SplitCandidate&) override {
        return {};
    }

private:
    Bounds bounds_;
};

const std::vector<GradHess> kFourRowGh = {{-1, 1}, {-1, 1}, {1, 1}, {1, 1}};

TreeConfig small_config() {
    TreeConfig cfg;
    cfg.num_leaves = 8;
    cfg.max_depth = 6;
    cfg.min_data_in_leaf = 1;
    cfg.min_hessian = 1e-9;
    return cfg;
}

}  // namespace

TEST_CASE("histogram holds single-row stats in the right bin") {
    const BinnedDataset ds = make_ds({{2}}, {0});
    const HistogramLayout layout(ds);
    Histogram hist;
    const std::vector<size_t> rows = {0};
    const std::vector<GradHess> gh = {{-1.0, 1.0}};
    build_histogram(ds, layout, rows, gh, &hist);
    for (size_t b = 0; b < 3; ++b) {
        CHECK(hist.data[b].grad == (b == 2 ? -1.0 : 0.0));
        CHECK(hist.data[b].hess == (b == 2 ? 1.0 : 0.0));
        CHECK(hist.data[b].count == (b == 2 ? 1 : 0));
    }
}

TEST_CASE("histogram bin sums equal leaf totals on a random instance") {
    Rng rng(5);
    std::vector<std::vector<uint16_t>> bins(3, std::vector<uint16_t>(64));
    std::vector<GradHess> gh(64);
    for (size_t r = 0; r < 64; ++r) {
        for (auto& col : bins) col[r] = static_cast<uint16_t>(rng.next_below(6));
        gh[r] = {rng.uniform(-2, 2), rng.uniform(0.1, 1.0)};
    }
    const BinnedDataset ds = make_ds(bins, {0, 0, 0});
    const HistogramLayout layout(ds);
    Histogram hist;
    const std::vector<size_t> rows = all_rows(ds);
    build_histogram(ds, layout, rows, gh, &hist);

    double g_direct = 0.0, h_direct = 0.0;
    for (size_t r : rows) {
        g_direct += gh[r].grad;
        h_direct += gh[r].hess;
    }
    for (size_t f = 0; f < 3; ++f) {
        double g = 0.0, h = 0.0;
        int64_t n = 0;
        for (const auto& s : hist.feature(layout, f, ds.bin_counts[f])) {
            g += s.grad;
            h += s.hess;
            n += s.count;
        }
        CHECK(g == doctest::Approx(g_direct).epsilon(1e-12));
        CHECK(h == doctest::Approx(h_direct).epsilon(1e-12));
        CHECK(n == 64);
    }
}

TEST_CASE("parent histogram minus one child equals the other child") {
    Rng rng(17);
    std::vector<std::vector<uint16_t>> bins(2, std::vector<uint16_t>(50));
    std::vector<GradHess> gh(50);
    for (size_t r = 0; r < 50; ++r) {
        for (auto& col : bins) col[r] = static_cast<uint16_t>(rng.next_below(5));
        gh[r] = {rng.uniform(-1, 1), rng.uniform(0.5, 1.5)};
    }
    const BinnedDataset ds = make_ds(bins, {0, 0});
    const HistogramLayout layout(ds);

    std::vector<size_t> left_rows, right_rows;
    for (size_t r = 0; r < 50; ++r) (ds.bin_of(0, r) <= 1 ? left_rows : right_rows).push_back(r);
    Histogram parent, left, right_direct, right_subtracted;
    const std::vector<size_t> rows = all_rows(ds);
    build_histogram(ds, layout, rows, gh, &parent);
    build_histogram(ds, layout, left_rows, gh, &left);
    build_histogram(ds, layout, right_rows, gh, &right_direct);
    subtract_histogram(parent, left, &right_subtracted);
    for (size_t i = 0; i < parent.data.size(); ++i) {
        CHECK(right_subtracted.data[i].grad ==
              doctest::Approx(right_direct.data[i].grad).epsilon(1e-12));
        CHECK(right_subtracted.data[i].count == right_direct.data[i].count);
    }
}

TEST_CASE("constrained_leaf_output clamps the Newton step") {
    CHECK(constrained_leaf_output(-2, 4, 0, Bounds{}) == 0.5);
    // Bounded case checked against numeric minimization.
    const double expected = oracle::scalar_minimize(-2, 4, 0, -1e300, 0.4);
    CHECK(expected == doctest::Approx(0.4).epsilon(1e-6));
    CHECK(constrained_leaf_output(-2, 4, 0, Bounds{kNegInf, 0.4}) == 0.4);
    CHECK(constrained_leaf_output(0, 1, 0, Bounds{-1, 1}) == 0.0);
    CHECK_THROWS_AS(constrained_leaf_output(1, 1, 0, Bounds{1.0, 0.5}), std::logic_error);
}

TEST_CASE("find_best_split agrees with the exhaustive oracle on the 4-row instance") {
    const BinnedDataset ds = make_ds({{0, 0, 1, 1}}, {0});
    auto engine = make_engine(ConstraintMode::kNone);
    TreeGrower grower(ds, small_config(), engine.get());
    const std::vector<size_t> rows = all_rows(ds);
    Tree tree = grower.grow(rows, kFourRowGh);

    const auto expected = oracle::exhaustive_best_split(ds, rows, kFourRowGh, 0.0, 1);
    REQUIRE(expected.has_value());
    CHECK(expected->threshold == 0);
    CHECK(expected->gain == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(expected->left_output == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(expected->right_output == doctest::Approx(-1.0).epsilon(1e-6));

    REQUIRE(tree.nodes.size() == 3);
    CHECK(tree.nodes[0].threshold == 0);
    CHECK(tree.nodes[0].split_gain == doctest::Approx(2.0));
    CHECK(tree.nodes[1].leaf_output == doctest::Approx(1.0));
    CHECK(tree.nodes[2].leaf_output == doctest::Approx(-1.0));
}

TEST_CASE("monotone ordering rejects the decreasing 4-row split") {
    const BinnedDataset ds = make_ds({{0, 0, 1, 1}}, {+1});
    auto engine = make_engine(ConstraintMode::kFast);
    TreeGrower grower(ds, small_config(), engine.get());
    const Tree tree = grower.grow(all_rows(ds), kFourRowGh);
    // Outputs would be (1, -1), violating left <= right: no split happens.
    CHECK(tree.nodes.size() == 1);
    CHECK(tree.nodes[0].is_leaf);
}

TEST_CASE("find_best_split under a leaf max bound matches the bounded oracle") {
    const BinnedDataset ds = make_ds({{0, 0, 1, 1}}, {0});
    FixedBoundsEngine engine(Bounds{kNegInf, 0.5});
    TreeGrower grower(ds, small_config(), &engine);
    const std::vector<size_t> rows = all_rows(ds);
    const Tree tree = grower.grow(rows, kFourRowGh);

    const auto expected = oracle::exhaustive_best_split(ds, rows, kFourRowGh, 0.0, 1, -1e300, 0.5,
                                                        -1e300, 0.5);
    REQUIRE(expected.has_value());
    CHECK(expected->left_output == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(expected->right_output == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(expected->gain == doctest::Approx(1.75).epsilon(1e-6));

    REQUIRE(tree.nodes.size() == 3);
    CHECK(tree.nodes[1].leaf_output == doctest::Approx(0.5));
    CHECK(tree.nodes[2].leaf_output == doctest::Approx(-1.0));
    CHECK(tree.nodes[0].split_gain == doctest::Approx(1.75));
}

TEST_CASE("find_best_split matches the oracle on random instances") {
    Rng rng(23);
    for (int trial = 0; trial < 25; ++trial) {
        const size_t n = 20 + rng.next_below(40);
        const size_t n_features = 1 + rng.next_below(3);
        std::vector<std::vector<uint16_t>> bins(n_features, std::vector<uint16_t>(n));
        std::vector<GradHess> gh(n);
        for (size_t r = 0; r < n; ++r) {
            for (auto& col : bins) col[r] = static_cast<uint16_t>(rng.next_below(5));
            gh[r] = {rng.uniform(-2, 2), rng.uniform(0.2, 1.5)};
        }
        const BinnedDataset ds = make_ds(bins, std::vector<int>(n_features, 0));
        auto engine = make_engine(ConstraintMode::kNone);
        TreeConfig cfg = small_config();
        cfg.num_leaves = 2;
        TreeGrower grower(ds, cfg, engine.get());
        const std::vector<size_t> rows = all_rows(ds);
        const Tree tree = grower.grow(rows, gh);

        const auto expected = oracle::exhaustive_best_split(ds, rows, gh, 0.0, 1);
        if (!expected) {
            CHECK(tree.nodes.size() == 1);
            continue;
        }
        REQUIRE(tree.nodes.size() == 3);
        CHECK(tree.nodes[0].split_gain == doctest::Approx(expected->gain).epsilon(1e-6));
        CHECK(tree.nodes[1].leaf_output ==
              doctest::Approx(expected->left_output).epsilon(1e-5));
        CHECK(tree.nodes[2].leaf_output ==
              doctest::Approx(expected->right_output).epsilon(1e-5));
    }
}

TEST_CASE("growth caps leaves and depth") {
    Rng rng(31);
    std::vector<std::vector<uint16_t>> bins(2, std::vector<uint16_t>(200));
    std::vector<GradHess> gh(200);
    for (size_t r = 0; r < 200; ++r) {
        for (auto& col : bins) col[r] = static_cast<uint16_t>(rng.next_below(16));
        gh[r] = {rng.uniform(-2, 2), 1.0};
    }
    const BinnedDataset ds = make_ds(bins, {0, 0});

    SUBCASE("single leaf outputs the root Newton value") {
        TreeConfig cfg = small_config();
        cfg.num_leaves = 1;
        auto engine = make_engine(ConstraintMode::kNone);
        TreeGrower grower(ds, cfg, engine.get());
        const Tree tree = grower.grow(all_rows(ds), gh);
        REQUIRE(tree.nodes.size() == 1);
        double g = 0.0, h = 0.0;
        for (const auto& x : gh) {
            g += x.grad;
            h += x.hess;
        }
        CHECK(tree.nodes[0].leaf_output == doctest::Approx(-g / h).epsilon(1e-12));
    }
    SUBCASE("depth cap dominates the leaf budget") {
        TreeConfig cfg = small_config();
        cfg.num_leaves = 32;
        cfg.max_depth = 1;
        auto engine = make_engine(ConstraintMode::kNone);
        TreeGrower grower(ds, cfg, engine.get());
        const Tree tree = grower.grow(all_rows(ds), gh);
        CHECK(tree.leaf_count() <= 2);
    }
    SUBCASE("randomized cap sweep") {
        for (int num_leaves : {2, 3, 5, 9}) {
            for (int max_depth : {1, 2, 4}) {
                TreeConfig cfg = small_config();
                cfg.num_leaves = num_leaves;
                cfg.max_depth = max_depth;
                auto engine = make_engine(ConstraintMode::kNone);
                TreeGrower grower(ds, cfg, engine.get());
                const Tree tree = grower.grow(all_rows(ds), gh);
                CHECK(tree.leaf_count() <= static_cast<size_t>(num_leaves));
                for (const auto& node : tree.nodes) {
                    CHECK(node.depth <= max_depth);
                    if (!node.is_leaf) CHECK(node.split_gain > 0.0);
                }
            }
        }
    }
}

TEST_CASE("every training row lands in exactly one leaf with matching totals") {
    Rng rng(41);
    std::vector<std::vector<uint16_t>> bins(2, std::vector<uint16_t>(300));
    std::vector<GradHess> gh(300);
    std::vector<double> labels(300);
    for (size_t r = 0; r < 300; ++r) {
        for (auto& col : bins) col[r] = static_cast<uint16_t>(rng.next_below(8));
        labels[r] = rng.uniform(0, 1);
        gh[r] = {rng.uniform(-1, 1), 1.0};
    }
    const BinnedDataset ds = make_ds(bins, {0, 0}, labels);
    TreeConfig cfg = small_config();
    cfg.num_leaves = 6;
    auto engine = make_engine(ConstraintMode::kNone);
    TreeGrower grower(ds, cfg, engine.get());
    const Tree tree = grower.grow(all_rows(ds), gh);

    std::vector<int> leaf_counts(tree.nodes.size(), 0);
    std::vector<double> leaf_grad(tree.nodes.size(), 0.0);
    for (size_t r = 0; r < 300; ++r) {
        const TreeNode* node = &tree.nodes[0];
        while (!node->is_leaf) {
            node = &tree.nodes[static_cast<size_t>(
                ds.bin_of(static_cast<size_t>(node->feature), r) <= node->threshold
                    ? node->left
                    : node->right)];
        }
        leaf_counts[static_cast<size_t>(node->id)] += 1;
        leaf_grad[static_cast<size_t>(node->id)] += gh[r].grad;
    }
    int total = 0;
    for (const auto& node : tree.nodes) {
        if (!node.is_leaf) continue;
        total += leaf_counts[static_cast<size_t>(node.id)];
        // l2-style leaf values: output = mean residual = -G/n.
        CHECK(node.leaf_output ==
              doctest::Approx(-leaf_grad[static_cast<size_t>(node.id)] /
                              leaf_counts[static_cast<size_t>(node.id)])
                  .epsilon(1e-9));
    }
    CHECK(total == 300);
}

TEST_CASE("predict_tree routes by bin thresholds") {
    const BinnedDataset ds = make_ds({{0, 0, 1, 1}}, {0});
    auto engine = make_engine(ConstraintMode::kNone);
    TreeGrower grower(ds, small_config(), engine.get());
    const Tree tree = grower.grow(all_rows(ds), kFourRowGh);
    CHECK(tree.predict_bins({0}) == doctest::Approx(1.0));
    CHECK(tree.predict_bins({1}) == doctest::Approx(-1.0));
}

TEST_CASE("export_dot output passes the grammar check for random trees") {
    Rng rng(59);
    for (int trial = 0; trial < 20; ++trial) {
        const size_t n = 50 + rng.next_below(100);
        std::vector<std::vector<uint16_t>> bins(2, std::vector<uint16_t>(n));
        std::vector<GradHess> gh(n);
        for (size_t r = 0; r < n; ++r) {
            for (auto& col : bins) col[r] = static_cast<uint16_t>(rng.next_below(7));
            gh[r] = {rng.uniform(-1, 1), 1.0};
        }
        BinnedDataset ds = make_ds(bins, {+1, 0});
        auto engine = make_engine(ConstraintMode::kFast);
        TreeConfig cfg = small_config();
        cfg.num_leaves = 5;
        TreeGrower grower(ds, cfg, engine.get());
        const Tree tree = grower.grow(all_rows(ds), gh);
        const std::string dot = export_dot(tree, ds.feature_names);
        CHECK(oracle::dot_parses(dot));
    }

    SUBCASE("single-leaf tree is one DOT node and monotone splits are styled") {
        const BinnedDataset ds = make_ds({{0, 1, 0, 1}}, {+1});
        auto engine = make_engine(ConstraintMode::kNone);
        TreeConfig cfg = small_config();
        cfg.num_leaves = 1;
        TreeGrower grower(ds, cfg, engine.get());
        const Tree tree = grower.grow(all_rows(ds), kFourRowGh);
        const std::string dot = export_dot(tree);
        CHECK(oracle::dot_parses(dot));
        CHECK(dot.find("leaf") != std::string::npos);
        CHECK(dot.find("->") == std::string::npos);

        const BinnedDataset ds2 = make_ds({{0, 0, 1, 1}}, {+1});
        const std::vector<GradHess> increasing = {{1, 1}, {1, 1}, {-1, 1}, {-1, 1}};
        auto engine2 = make_engine(ConstraintMode::kFast);
        TreeGrower grower2(ds2, small_config(), engine2.get());
        const Tree tree2 = grower2.grow(all_rows(ds2), increasing);
        REQUIRE(tree2.nodes.size() == 3);
        const std::string dot2 = export_dot(tree2);
        CHECK(dot2.find("palegreen") != std::string::npos);
    }
}

TEST_CASE("tree json round trip preserves structure") {
    const BinnedDataset ds = make_ds({{0, 0, 1, 1}}, {0});
    auto engine = make_engine(ConstraintMode::kNone);
    TreeGrower grower(ds, small_config(), engine.get());
    const Tree tree = grower.grow(all_rows(ds), kFourRowGh);
    const Tree back = tree_from_json(tree_to_json(tree));
    REQUIRE(back.nodes.size() == tree.nodes.size());
    for (size_t i = 0; i < tree.nodes.size(); ++i) {
        CHECK(back.nodes[i].is_leaf == tree.nodes[i].is_leaf);
        CHECK(back.nodes[i].leaf_output == tree.nodes[i].leaf_output);
        CHECK(back.nodes[i].threshold == tree.nodes[i].threshold);
        CHECK(back.nodes[i].split_order == tree.nodes[i].split_order);
    }
}
