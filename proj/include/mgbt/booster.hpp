#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mgbt/constraints.hpp"
#include "mgbt/dataset.hpp"
#include "mgbt/grower.hpp"
#include "mgbt/objective.hpp"
#include "mgbt/tree.hpp"

namespace mgbt {

struct BoosterConfig {
    ObjectiveKind objective = ObjectiveKind::kBinaryLogloss;
    int iterations = 100;
    double learning_rate = 0.1;
    int num_leaves = 32;
    int max_depth = 5;
    int min_data_in_leaf = 100;
    double lambda = 0.0;
    int max_bins = 255;
    ConstraintMode monotone_method = ConstraintMode::kNone;
    double monotone_penalty = 0.0;   // gamma
    double penalty_epsilon = 1e-10;
    uint64_t seed = 42;

    TreeConfig tree_config() const {
        TreeConfig cfg;
        cfg.num_leaves = num_leaves;
        cfg.max_depth = max_depth;
        cfg.min_data_in_leaf = min_data_in_leaf;
        cfg.lambda = lambda;
        cfg.penalty = {monotone_penalty, penalty_epsilon};
        return cfg;
    }
};

/// One staged metric observation: value of `metric` on `split` after
/// `iteration` trees.
struct StagedMetric {
    int iteration = 0;
    std::string metric;
    std::string split;
    double value = 0.0;
};

struct BoosterModel {
    int format_version = 1;
    BoosterConfig config;
    double base_margin = 0.0;
    std::vector<Tree> trees;
    std::vector<std::string> feature_names;
    std::vector<int> monotone_directions;
    std::vector<std::vector<double>> bin_upper;  // training cut points

    /// Margin (raw score) per row of a compatible binned dataset.
    std::vector<double> margins(const BinnedDataset& ds) const;

    /// Probability (binary) or margin (l2) per row of a raw numeric table;
    /// rows are binned with the stored cut points. Throws when a model
    /// feature is missing from the table.
    std::vector<double> predict_table(const RawTable& table) const;

    std::vector<double> predict_binned(const BinnedDataset& ds) const;
};

struct TrainResult {
    BoosterModel model;
    std::vector<StagedMetric> staged;
};

struct EvalSpec {
    const BinnedDataset* dataset = nullptr;  // binned with the training cuts
    std::vector<std::string> metrics;        // e.g. {"logloss", "accuracy", "auc"}
};

/// Gradient-boosting rounds: boost from the average, then one tree per
/// iteration on the current gradients, margins updated by learning_rate
/// times the tree outputs. Staged metrics are recorded on the training rows
/// and on the optional eval set after every iteration.
TrainResult train(const BinnedDataset& ds, std::span<const size_t> train_rows,
                  const BoosterConfig& config, const std::optional<EvalSpec>& eval = std::nullopt);

/// Convenience: train on every row.
TrainResult train(const BinnedDataset& ds, const BoosterConfig& config);

std::string serialize_model(const BoosterModel& model);
BoosterModel deserialize_model(const std::string& text);

double base_margin_for(ObjectiveKind kind, std::span<const double> labels,
                       std::span<const size_t> rows);

}  // namespace mgbt
