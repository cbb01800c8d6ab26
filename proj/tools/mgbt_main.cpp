// mgbt: gradient-boosted trees with monotone-constraint modes and a
// benchmark harness around them.

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "mgbt/cli_ops.hpp"

namespace {

struct FlagTracker {
    std::vector<std::pair<std::string, CLI::Option*>> options;

    std::vector<std::string> explicit_keys() const {
        std::vector<std::string> keys;
        for (const auto& [key, opt] : options) {
            if (opt->count() > 0) keys.push_back(key);
        }
        return keys;
    }
};

void add_common_options(CLI::App* cmd, mgbt::RunOptions* opts, FlagTracker* tracker) {
    auto track = [&](const std::string& key, CLI::Option* opt) {
        tracker->options.emplace_back(key, opt);
    };
    track("data", cmd->add_option("--data", opts->data_paths, "input data file(s)"));
    track("out", cmd->add_option("--out", opts->out_dir, "output directory"));
    track("label", cmd->add_option("--label", opts->label_column,
                                   "label column for generic (non-census) data"));
    track("schema", cmd->add_option("--schema", opts->schema_file,
                                    "JSON schema override: feature -> kind/monotone_direction"));
    track("method", cmd->add_option("--method", opts->methods,
                                    "constraint method(s): none|basic|fast|slow"));
    track("gamma", cmd->add_option("--gamma", opts->gammas, "monotone split penalty gamma(s)"));
    track("epsilon", cmd->add_option("--epsilon", opts->epsilon, "penalty epsilon"));
    track("trials", cmd->add_option("--trials", opts->trials, "Monte-Carlo trial count"));
    track("iterations", cmd->add_option("--iterations", opts->iterations, "boosting rounds"));
    track("learning-rate",
          cmd->add_option("--learning-rate", opts->learning_rate, "shrinkage per tree"));
    track("num-leaves", cmd->add_option("--num-leaves", opts->num_leaves, "leaves per tree"));
    track("max-depth", cmd->add_option("--max-depth", opts->max_depth, "depth cap, root = 0"));
    track("min-data-in-leaf",
          cmd->add_option("--min-data-in-leaf", opts->min_data_in_leaf, "rows per leaf floor"));
    track("lambda", cmd->add_option("--lambda", opts->lambda, "L2 regularization"));
    track("max-bins", cmd->add_option("--max-bins", opts->max_bins, "histogram bins per feature"));
    track("seed", cmd->add_option("--seed", opts->seed, "base seed / trial seed"));
    track("train-ratio",
          cmd->add_option("--train-ratio", opts->train_ratio, "training fraction per trial"));
    track("sizes", cmd->add_option("--sizes", opts->sizes, "row counts for timing (0 = all)"));
    track("reps", cmd->add_option("--reps", opts->reps, "timing repetitions"));
    track("first-k-trees",
          cmd->add_option("--first-k-trees", opts->first_k_trees, "trees to export"));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gradient-boosted trees with monotone constraint modes"};
    app.require_subcommand(1);

    mgbt::RunOptions opts;
    std::string config_path;
    FlagTracker tracker;

    using Runner = std::function<std::string(const mgbt::RunOptions&)>;
    struct Command {
        const char* name;
        const char* help;
        Runner run;
        bool takes_model;
    };
    const Command commands[] = {
        {"prep-adult", "preprocess census data: drop education, one-hot encode, write schema",
         mgbt::run_prep_adult, false},
        {"train", "train one model on a seeded train/test split", mgbt::run_train, false},
        {"evaluate", "evaluate a saved model on a dataset", mgbt::run_evaluate, true},
        {"mc-benchmark", "Monte-Carlo benchmark over methods and gammas", mgbt::run_mc_benchmark,
         false},
        {"gamma-sweep", "relative train-loss table over penalty gammas", mgbt::run_gamma_sweep,
         false},
        {"time-benchmark", "wall-time one boosting iteration per method and size",
         mgbt::run_time_benchmark, false},
        {"penalty-table", "print the penalty factor per gamma and depth", mgbt::run_penalty_table,
         false},
        {"figure-example", "four-cluster demonstration of the constraint modes",
         mgbt::run_figure_example, false},
        {"export-trees", "write the first K trees of a model as Graphviz DOT",
         mgbt::run_export_trees, true},
    };

    Runner selected;
    for (const Command& command : commands) {
        CLI::App* sub = app.add_subcommand(command.name, command.help);
        add_common_options(sub, &opts, &tracker);
        sub->add_option("--config", config_path, "JSON config file; flags win over file values");
        if (command.takes_model) {
            sub->add_option("model", opts.model_path, "model JSON file")->required();
        }
        sub->callback([&selected, &command]() { selected = command.run; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw std::runtime_error("cannot read config file: " + config_path);
            std::stringstream buf;
            buf << in.rdbuf();
            mgbt::apply_config_json(&opts, buf.str(), tracker.explicit_keys());
        }
        std::cout << selected(opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
