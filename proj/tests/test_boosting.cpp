#include <numeric>

#include "doctest.h"
#include "mgbt/booster.hpp"
#include "mgbt/rng.hpp"
#include "support/census_synth.hpp"

using namespace mgbt;

namespace {

BinnedDataset tiny_regression() {
    BinnedDataset ds;
    ds.feature_count = 1;
    ds.row_count = 4;
    ds.bins = {{0, 0, 1, 1}};
    ds.bin_counts = {2};
    ds.unsplittable = {false};
    ds.bin_upper = {{0.5}};
    ds.feature_names = {"x"};
    ds.monotone_directions = {0};
    ds.labels = {2.0, 2.0, 4.0, 4.0};
    return ds;
}

BoosterConfig tiny_config() {
    BoosterConfig cfg;
    cfg.objective = ObjectiveKind::kL2;
    cfg.iterations = 1;
    cfg.learning_rate = 1.0;
    cfg.num_leaves = 4;
    cfg.max_depth = 4;
    cfg.min_data_in_leaf = 1;
    return cfg;
}

}  // namespace

TEST_CASE("zero iterations yields the base-rate predictor") {
    const RawTable raw = testsupport::synth_census_table({400, 5});
    const BinnedDataset ds = testsupport::prepared_census(raw, 32);
    BoosterConfig cfg;
    cfg.iterations = 0;
    const TrainResult result = train(ds, cfg);
    CHECK(result.model.trees.empty());
    double mean = 0.0;
    for (double y : ds.labels) mean += y;
    mean /= static_cast<double>(ds.labels.size());
    const std::vector<double> probs = result.model.predict_binned(ds);
    for (double p : probs) CHECK(p == doctest::Approx(mean).epsilon(1e-9));
}

TEST_CASE("single l2 tree with unit learning rate fits the residuals exactly") {
    const BinnedDataset ds = tiny_regression();
    const TrainResult result = train(ds, tiny_config());
    const std::vector<double> pred = result.model.predict_binned(ds);
    for (size_t r = 0; r < ds.row_count; ++r) {
        CHECK(pred[r] == doctest::Approx(ds.labels[r]).epsilon(1e-12));
    }
}

TEST_CASE("degenerate one-class labels refuse a base margin") {
    BinnedDataset ds = tiny_regression();
    ds.labels = {1, 1, 1, 1};
    BoosterConfig cfg;
    cfg.objective = ObjectiveKind::kBinaryLogloss;
    CHECK_THROWS_AS(train(ds, cfg), std::invalid_argument);
}

TEST_CASE("fast and none produce identical models when no directions are declared") {
    RawTable raw = testsupport::synth_census_table({900, 13});
    auto [table, schema] = preprocess_adult(raw);
    for (auto& d : schema.monotone_directions) d = 0;
    auto [encoded, encoded_schema] = one_hot_encode(table, schema);
    const BinnedDataset ds = bin_features(encoded, encoded_schema, 64);

    BoosterConfig cfg;
    cfg.iterations = 8;
    cfg.min_data_in_leaf = 20;
    cfg.monotone_method = ConstraintMode::kNone;
    const TrainResult none_result = train(ds, cfg);
    cfg.monotone_method = ConstraintMode::kFast;
    const TrainResult fast_result = train(ds, cfg);
    REQUIRE(none_result.model.trees.size() == fast_result.model.trees.size());
    for (size_t i = 0; i < none_result.model.trees.size(); ++i) {
        CHECK(tree_to_json(none_result.model.trees[i]) ==
              tree_to_json(fast_result.model.trees[i]));
    }
    CHECK(none_result.model.base_margin == fast_result.model.base_margin);
}

TEST_CASE("training is deterministic for a fixed config and data") {
    const RawTable raw = testsupport::synth_census_table({700, 29});
    const BinnedDataset ds = testsupport::prepared_census(raw, 64);
    BoosterConfig cfg;
    cfg.iterations = 5;
    cfg.min_data_in_leaf = 25;
    cfg.monotone_method = ConstraintMode::kFast;
    const TrainResult a = train(ds, cfg);
    const TrainResult b = train(ds, cfg);
    CHECK(serialize_model(a.model) == serialize_model(b.model));
}

TEST_CASE("re-predicting the training rows replays the final margins") {
    const RawTable raw = testsupport::synth_census_table({600, 37});
    const BinnedDataset ds = testsupport::prepared_census(raw, 64);
    std::vector<size_t> rows(ds.row_count);
    std::iota(rows.begin(), rows.end(), size_t{0});
    BoosterConfig cfg;
    cfg.iterations = 6;
    cfg.min_data_in_leaf = 20;
    cfg.monotone_method = ConstraintMode::kBasic;
    const TrainResult result = train(ds, rows, cfg);

    // Margin replay: accumulate learning-rate-scaled tree outputs from
    // scratch and compare against predict.
    std::vector<double> margins(ds.row_count, result.model.base_margin);
    for (const Tree& tree : result.model.trees) {
        for (size_t r = 0; r < ds.row_count; ++r) {
            margins[r] += cfg.learning_rate * tree.predict_row(ds, r);
        }
    }
    const std::vector<double> direct = result.model.margins(ds);
    for (size_t r = 0; r < ds.row_count; ++r) {
        CHECK(margins[r] == doctest::Approx(direct[r]).epsilon(1e-12));
    }

    const std::vector<double> probs = result.model.predict_binned(ds);
    for (double p : probs) {
        CHECK(p > 0.0);
        CHECK(p < 1.0);
    }
}

TEST_CASE("staged metric table covers every iteration, metric and split") {
    const RawTable raw = testsupport::synth_census_table({800, 41});
    const BinnedDataset ds = testsupport::prepared_census(raw, 64);
    const SplitPlan plan = mc_split(ds.row_count, 0.65, 3);
    BoosterConfig cfg;
    cfg.iterations = 4;
    cfg.min_data_in_leaf = 20;

    BinnedDataset eval_ds;
    eval_ds.feature_count = ds.feature_count;
    eval_ds.row_count = plan.test_rows.size();
    eval_ds.bin_counts = ds.bin_counts;
    eval_ds.bin_upper = ds.bin_upper;
    eval_ds.unsplittable = ds.unsplittable;
    eval_ds.feature_names = ds.feature_names;
    eval_ds.monotone_directions = ds.monotone_directions;
    eval_ds.bins.resize(ds.feature_count);
    for (size_t f = 0; f < ds.feature_count; ++f) {
        for (size_t r : plan.test_rows) eval_ds.bins[f].push_back(ds.bin_of(f, r));
    }
    for (size_t r : plan.test_rows) eval_ds.labels.push_back(ds.labels[r]);

    EvalSpec eval;
    eval.dataset = &eval_ds;
    eval.metrics = {"logloss", "accuracy", "auc"};
    const TrainResult result = train(ds, plan.train_rows, cfg, eval);
    CHECK(result.staged.size() == 4u * 3u * 2u);
    for (const StagedMetric& m : result.staged) {
        CHECK(m.iteration >= 1);
        CHECK(m.iteration <= 4);
        CHECK((m.split == "train" || m.split == "test"));
    }
}

TEST_CASE("model serialization round trip predicts identically") {
    const RawTable raw = testsupport::synth_census_table({500, 43});
    const BinnedDataset ds = testsupport::prepared_census(raw, 32);
    BoosterConfig cfg;
    cfg.iterations = 10;
    cfg.min_data_in_leaf = 10;
    cfg.monotone_method = ConstraintMode::kFast;
    const TrainResult result = train(ds, cfg);

    const std::string text = serialize_model(result.model);
    const BoosterModel back = deserialize_model(text);
    const std::vector<double> a = result.model.predict_binned(ds);
    const std::vector<double> b = back.predict_binned(ds);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);

    SUBCASE("empty model survives the round trip") {
        BoosterConfig cfg0 = cfg;
        cfg0.iterations = 0;
        const TrainResult empty = train(ds, cfg0);
        const BoosterModel restored = deserialize_model(serialize_model(empty.model));
        CHECK(restored.trees.empty());
    }
    SUBCASE("truncated documents fail to parse") {
        CHECK_THROWS_AS(deserialize_model(text.substr(0, text.size() / 2)), std::runtime_error);
        CHECK_THROWS_AS(deserialize_model("{\"format\": \"other\"}"), std::runtime_error);
    }
}

TEST_CASE("predict_table bins raw rows with stored boundaries") {
    const BinnedDataset ds = tiny_regression();
    const TrainResult result = train(ds, tiny_config());
    RawTable rows;
    rows.column_names = {"x"};
    rows.columns = {{"0", "1"}};
    const std::vector<double> pred = result.model.predict_table(rows);
    CHECK(pred[0] == doctest::Approx(2.0));
    CHECK(pred[1] == doctest::Approx(4.0));

    RawTable bad;
    bad.column_names = {"y"};
    bad.columns = {{"0"}};
    CHECK_THROWS_AS(result.model.predict_table(bad), std::invalid_argument);
}

TEST_CASE("train logloss is mostly non-increasing at small learning rates") {
    const RawTable raw = testsupport::synth_census_table({3000, 47});
    const BinnedDataset ds = testsupport::prepared_census(raw, 64);
    BoosterConfig cfg;
    cfg.iterations = 30;
    cfg.learning_rate = 0.1;
    cfg.min_data_in_leaf = 50;
    const TrainResult result = train(ds, cfg);
    std::vector<double> losses;
    for (const StagedMetric& m : result.staged) {
        if (m.metric == "logloss" && m.split == "train") losses.push_back(m.value);
    }
    REQUIRE(losses.size() == 30);
    int non_increasing = 0;
    for (size_t i = 1; i < losses.size(); ++i) {
        if (losses[i] <= losses[i - 1] + 1e-12) ++non_increasing;
    }
    CHECK(non_increasing >= static_cast<int>(0.95 * (losses.size() - 1)));
}
