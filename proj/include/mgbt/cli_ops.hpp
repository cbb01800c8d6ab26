#pragma once

#include <string>
#include <vector>

#include "mgbt/booster.hpp"
#include "mgbt/constraints.hpp"
#include "mgbt/dataset.hpp"

namespace mgbt {

/// Options shared by the command-line operations; flags override any values
/// loaded from a JSON config document with the same (kebab-case) keys.
struct RunOptions {
    std::vector<std::string> data_paths;
    std::string out_dir = "out";
    std::string model_path;
    std::string label_column = "label";
    std::string schema_file;
    std::vector<std::string> methods;     // default per command
    std::vector<double> gammas;           // default per command
    double epsilon = 1e-10;
    int trials = 5;
    int iterations = 100;
    double learning_rate = 0.1;
    int num_leaves = 32;
    int max_depth = 5;
    int min_data_in_leaf = 100;
    double lambda = 0.0;
    int max_bins = 255;
    uint64_t seed = 42;
    double train_ratio = 0.65;
    std::vector<size_t> sizes = {2000, 10000, 0};  // 0 means all rows
    int reps = 100;
    int first_k_trees = 2;
    int jobs = 1;

    BoosterConfig booster_config(ConstraintMode mode, double gamma) const;
};

/// Applies config-file values for keys the command line did not set.
/// `explicit_keys` holds the kebab-case names of flags the user passed.
void apply_config_json(RunOptions* opts, const std::string& json_text,
                       const std::vector<std::string>& explicit_keys);

struct PreparedData {
    RawTable encoded;       // numeric columns + label
    FeatureSchema schema;   // post-encoding schema
};

/// Loads one or more delimiter-separated files (concatenated), applies the
/// census recipe when the census columns are present (generic inference
/// otherwise), applies the optional schema override, then one-hot encodes.
PreparedData load_and_prepare(const RunOptions& opts);

// Command implementations. Each returns its primary text output (also
// written under opts.out_dir where files are produced).
std::string run_prep_adult(const RunOptions& opts);
std::string run_train(const RunOptions& opts);
std::string run_evaluate(const RunOptions& opts);
std::string run_mc_benchmark(const RunOptions& opts);
std::string run_gamma_sweep(const RunOptions& opts);
std::string run_time_benchmark(const RunOptions& opts);
std::string run_penalty_table(const RunOptions& opts);
std::string run_figure_example(const RunOptions& opts);
std::string run_export_trees(const RunOptions& opts);

}  // namespace mgbt
