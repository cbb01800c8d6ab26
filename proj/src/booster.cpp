#include "mgbt/booster.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

#include "mgbt/metrics.hpp"

namespace mgbt {

namespace {

std::string objective_name(ObjectiveKind kind) {
    return kind == ObjectiveKind::kBinaryLogloss ? "binary_logloss" : "l2";
}

ObjectiveKind objective_from_name(const std::string& name) {
    if (name == "binary_logloss") return ObjectiveKind::kBinaryLogloss;
    if (name == "l2") return ObjectiveKind::kL2;
    throw std::runtime_error("unknown objective '" + name + "'");
}

double eval_metric(const std::string& metric, ObjectiveKind objective,
                   std::span<const double> margins, std::span<const double> labels) {
    if (metric == "mse") return mse(margins, labels);
    std::vector<double> probs(margins.size());
    for (size_t i = 0; i < margins.size(); ++i) probs[i] = sigmoid(margins[i]);
    if (metric == "logloss") return logloss(probs, labels);
    if (metric == "accuracy") return accuracy(probs, labels);
    if (metric == "auc") return auc(probs, labels);
    (void)objective;
    throw std::invalid_argument("unknown metric '" + metric + "'");
}

}  // namespace

double base_margin_for(ObjectiveKind kind, std::span<const double> labels,
                       std::span<const size_t> rows) {
    if (rows.empty()) throw std::invalid_argument("train: empty dataset");
    double mean = 0.0;
    for (size_t r : rows) mean += labels[r];
    mean /= static_cast<double>(rows.size());
    if (kind == ObjectiveKind::kL2) return mean;
    if (mean <= 0.0 || mean >= 1.0) {
        throw std::invalid_argument("train: all labels in one class, base margin degenerate");
    }
    return std::log(mean / (1.0 - mean));
}

std::vector<double> BoosterModel::margins(const BinnedDataset& ds) const {
    std::vector<double> out(ds.row_count, base_margin);
    for (const Tree& tree : trees) {
        for (size_t r = 0; r < ds.row_count; ++r) {
            out[r] += config.learning_rate * tree.predict_row(ds, r);
        }
    }
    return out;
}

std::vector<double> BoosterModel::predict_binned(const BinnedDataset& ds) const {
    std::vector<double> out = margins(ds);
    if (config.objective == ObjectiveKind::kBinaryLogloss) {
        for (double& v : out) v = sigmoid(v);
    }
    return out;
}

std::vector<double> BoosterModel::predict_table(const RawTable& table) const {
    const size_t n_features = feature_names.size();
    std::vector<std::vector<double>> cols(n_features);
    for (size_t f = 0; f < n_features; ++f) {
        cols[f] = numeric_column(table, feature_names[f]);  // throws on unknown column
    }
    const size_t n = table.row_count();
    std::vector<double> margins(n, base_margin);
    std::vector<uint16_t> row_bins(n_features);
    for (size_t r = 0; r < n; ++r) {
        for (size_t f = 0; f < n_features; ++f) {
            const auto& cuts = bin_upper[f];
            row_bins[f] = static_cast<uint16_t>(
                std::lower_bound(cuts.begin(), cuts.end(), cols[f][r]) - cuts.begin());
        }
        for (const Tree& tree : trees) {
            margins[r] += config.learning_rate * tree.predict_bins(row_bins);
        }
    }
    if (config.objective == ObjectiveKind::kBinaryLogloss) {
        for (double& v : margins) v = sigmoid(v);
    }
    return margins;
}

TrainResult train(const BinnedDataset& ds, std::span<const size_t> train_rows,
                  const BoosterConfig& config, const std::optional<EvalSpec>& eval) {
    if (ds.row_count == 0) throw std::invalid_argument("train: empty dataset");
    if (config.iterations < 0) throw std::invalid_argument("train: negative iterations");
    if (config.learning_rate <= 0.0) throw std::invalid_argument("train: learning rate <= 0");

    TrainResult result;
    BoosterModel& model = result.model;
    model.config = config;
    model.feature_names = ds.feature_names;
    model.monotone_directions = ds.monotone_directions;
    model.bin_upper = ds.bin_upper;
    model.base_margin = base_margin_for(config.objective, ds.labels, train_rows);

    std::vector<double> margins(ds.row_count, model.base_margin);
    std::vector<double> train_labels(train_rows.size());
    for (size_t i = 0; i < train_rows.size(); ++i) train_labels[i] = ds.labels[train_rows[i]];

    std::vector<double> eval_margins;
    std::vector<double> eval_labels;
    if (eval && eval->dataset != nullptr) {
        eval_margins.assign(eval->dataset->row_count, model.base_margin);
        eval_labels = eval->dataset->labels;
    }

    const std::vector<std::string> default_metrics =
        config.objective == ObjectiveKind::kBinaryLogloss
            ? std::vector<std::string>{"logloss", "accuracy", "auc"}
            : std::vector<std::string>{"mse"};
    const std::vector<std::string>& metric_names =
        (eval && !eval->metrics.empty()) ? eval->metrics : default_metrics;

    auto engine = make_engine(config.monotone_method);
    std::vector<GradHess> gh(ds.row_count);
    std::vector<double> train_margins(train_rows.size());

    for (int it = 1; it <= config.iterations; ++it) {
        for (size_t r : train_rows) {
            gh[r] = grad_hess(config.objective, margins[r], ds.labels[r]);
        }
        TreeGrower grower(ds, config.tree_config(), engine.get());
        Tree tree = grower.grow(train_rows, gh);
        for (size_t r : train_rows) {
            margins[r] += config.learning_rate * tree.predict_row(ds, r);
        }
        if (!eval_margins.empty()) {
            for (size_t r = 0; r < eval_margins.size(); ++r) {
                eval_margins[r] += config.learning_rate * tree.predict_row(*eval->dataset, r);
            }
        }
        model.trees.push_back(std::move(tree));

        for (size_t i = 0; i < train_rows.size(); ++i) train_margins[i] = margins[train_rows[i]];
        for (const std::string& metric : metric_names) {
            result.staged.push_back(
                {it, metric, "train",
                 eval_metric(metric, config.objective, train_margins, train_labels)});
            if (!eval_margins.empty()) {
                result.staged.push_back(
                    {it, metric, "test",
                     eval_metric(metric, config.objective, eval_margins, eval_labels)});
            }
        }
    }
    return result;
}

TrainResult train(const BinnedDataset& ds, const BoosterConfig& config) {
    std::vector<size_t> rows(ds.row_count);
    std::iota(rows.begin(), rows.end(), size_t{0});
    return train(ds, rows, config);
}

std::string serialize_model(const BoosterModel& model) {
    nlohmann::json j;
    j["format"] = "mgbt-model";
    j["version"] = model.format_version;
    j["objective"] = objective_name(model.config.objective);
    j["learning_rate"] = model.config.learning_rate;
    j["base_margin"] = model.base_margin;
    j["monotone_method"] = to_string(model.config.monotone_method);
    j["monotone_penalty"] = model.config.monotone_penalty;
    j["iterations"] = model.config.iterations;
    j["num_leaves"] = model.config.num_leaves;
    j["max_depth"] = model.config.max_depth;
    j["min_data_in_leaf"] = model.config.min_data_in_leaf;
    j["lambda"] = model.config.lambda;
    j["max_bins"] = model.config.max_bins;
    j["seed"] = model.config.seed;
    j["feature_names"] = model.feature_names;
    j["monotone_directions"] = model.monotone_directions;
    j["bin_upper"] = model.bin_upper;
    nlohmann::json trees = nlohmann::json::array();
    for (const Tree& t : model.trees) trees.push_back(nlohmann::json::parse(tree_to_json(t)));
    j["trees"] = std::move(trees);
    return j.dump();
}

BoosterModel deserialize_model(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("model parse error: ") + e.what());
    }
    if (!j.is_object() || j.value("format", "") != "mgbt-model") {
        throw std::runtime_error("model parse error: not a model document");
    }
    BoosterModel model;
    model.format_version = j.at("version").get<int>();
    model.config.objective = objective_from_name(j.at("objective").get<std::string>());
    model.config.learning_rate = j.at("learning_rate").get<double>();
    model.base_margin = j.at("base_margin").get<double>();
    model.config.monotone_method = constraint_mode_from_string(j.at("monotone_method"));
    model.config.monotone_penalty = j.at("monotone_penalty").get<double>();
    model.config.iterations = j.at("iterations").get<int>();
    model.config.num_leaves = j.at("num_leaves").get<int>();
    model.config.max_depth = j.at("max_depth").get<int>();
    model.config.min_data_in_leaf = j.at("min_data_in_leaf").get<int>();
    model.config.lambda = j.at("lambda").get<double>();
    model.config.max_bins = j.at("max_bins").get<int>();
    model.config.seed = j.at("seed").get<uint64_t>();
    model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    model.monotone_directions = j.at("monotone_directions").get<std::vector<int>>();
    model.bin_upper = j.at("bin_upper").get<std::vector<std::vector<double>>>();
    for (const auto& t : j.at("trees")) {
        model.trees.push_back(tree_from_json(t.dump()));
    }
    return model;
}

}  // namespace mgbt
