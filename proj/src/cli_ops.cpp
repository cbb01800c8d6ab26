#include "mgbt/cli_ops.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "mgbt/cluster_demo.hpp"
#include "mgbt/metrics.hpp"
#include "mgbt/penalty.hpp"
#include "mgbt/rng.hpp"
#include "mgbt/tree.hpp"

namespace mgbt {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

std::string out_path(const RunOptions& opts, const std::string& name) {
    std::filesystem::create_directories(opts.out_dir);
    return (std::filesystem::path(opts.out_dir) / name).string();
}

std::vector<ConstraintMode> parse_methods(const RunOptions& opts,
                                          std::vector<std::string> fallback) {
    const std::vector<std::string>& names = opts.methods.empty() ? fallback : opts.methods;
    std::vector<ConstraintMode> modes;
    for (const auto& name : names) modes.push_back(constraint_mode_from_string(name));
    return modes;
}

std::vector<double> gammas_or(const RunOptions& opts, std::vector<double> fallback) {
    return opts.gammas.empty() ? std::move(fallback) : opts.gammas;
}

// One Monte-Carlo training run, keyed for deterministic merging.
struct BenchmarkRun {
    uint64_t trial_seed = 0;
    ConstraintMode mode = ConstraintMode::kNone;
    double gamma = 0.0;
    std::vector<StagedMetric> staged;
};

void execute_runs(std::vector<BenchmarkRun>* runs, const BinnedDataset& ds,
                  const RunOptions& opts) {
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const size_t i = next.fetch_add(1);
            if (i >= runs->size()) return;
            BenchmarkRun& run = (*runs)[i];
            const SplitPlan plan = mc_split(ds.row_count, opts.train_ratio, run.trial_seed);
            const BinnedDataset test_ds = subset_rows(ds, plan.test_rows);
            EvalSpec eval;
            eval.dataset = &test_ds;
            eval.metrics = {"logloss", "accuracy", "auc"};
            const BoosterConfig cfg = opts.booster_config(run.mode, run.gamma);
            run.staged = train(ds, plan.train_rows, cfg, eval).staged;
        }
    };
    const int jobs = std::max(1, std::min<int>(opts.jobs, static_cast<int>(runs->size())));
    if (jobs == 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

}  // namespace

BoosterConfig RunOptions::booster_config(ConstraintMode mode, double gamma) const {
    BoosterConfig cfg;
    cfg.iterations = iterations;
    cfg.learning_rate = learning_rate;
    cfg.num_leaves = num_leaves;
    cfg.max_depth = max_depth;
    cfg.min_data_in_leaf = min_data_in_leaf;
    cfg.lambda = lambda;
    cfg.max_bins = max_bins;
    cfg.monotone_method = mode;
    cfg.monotone_penalty = gamma;
    cfg.penalty_epsilon = epsilon;
    cfg.seed = seed;
    return cfg;
}

void apply_config_json(RunOptions* opts, const std::string& json_text,
                       const std::vector<std::string>& explicit_keys) {
    nlohmann::json doc = nlohmann::json::parse(json_text);
    if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");
    auto overridden = [&](const std::string& key) {
        return std::find(explicit_keys.begin(), explicit_keys.end(), key) != explicit_keys.end();
    };
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string& key = it.key();
        const auto& v = it.value();
        if (overridden(key)) continue;
        if (key == "data") {
            opts->data_paths = v.is_array() ? v.get<std::vector<std::string>>()
                                            : std::vector<std::string>{v.get<std::string>()};
        } else if (key == "out") {
            opts->out_dir = v.get<std::string>();
        } else if (key == "label") {
            opts->label_column = v.get<std::string>();
        } else if (key == "schema") {
            opts->schema_file = v.get<std::string>();
        } else if (key == "method") {
            opts->methods = v.is_array() ? v.get<std::vector<std::string>>()
                                         : std::vector<std::string>{v.get<std::string>()};
        } else if (key == "gamma") {
            opts->gammas = v.is_array() ? v.get<std::vector<double>>()
                                        : std::vector<double>{v.get<double>()};
        } else if (key == "epsilon") {
            opts->epsilon = v.get<double>();
        } else if (key == "trials") {
            opts->trials = v.get<int>();
        } else if (key == "iterations") {
            opts->iterations = v.get<int>();
        } else if (key == "learning-rate") {
            opts->learning_rate = v.get<double>();
        } else if (key == "num-leaves") {
            opts->num_leaves = v.get<int>();
        } else if (key == "max-depth") {
            opts->max_depth = v.get<int>();
        } else if (key == "min-data-in-leaf") {
            opts->min_data_in_leaf = v.get<int>();
        } else if (key == "lambda") {
            opts->lambda = v.get<double>();
        } else if (key == "max-bins") {
            opts->max_bins = v.get<int>();
        } else if (key == "seed") {
            opts->seed = v.get<uint64_t>();
        } else if (key == "train-ratio") {
            opts->train_ratio = v.get<double>();
        } else if (key == "sizes") {
            opts->sizes = v.get<std::vector<size_t>>();
        } else if (key == "reps") {
            opts->reps = v.get<int>();
        } else if (key == "first-k-trees") {
            opts->first_k_trees = v.get<int>();
        } else if (key == "jobs") {
            opts->jobs = v.get<int>();
        } else {
            throw std::invalid_argument("unknown config key '" + key + "'");
        }
    }
}

PreparedData load_and_prepare(const RunOptions& opts) {
    if (opts.data_paths.empty()) throw std::invalid_argument("no --data file given");
    RawTable merged;
    for (const std::string& path : opts.data_paths) {
        RawTable t = load_csv(path);
        if (merged.column_names.empty()) {
            merged = std::move(t);
        } else {
            if (t.column_names != merged.column_names) {
                throw std::runtime_error("data files have mismatching columns: " + path);
            }
            for (size_t c = 0; c < merged.columns.size(); ++c) {
                merged.columns[c].insert(merged.columns[c].end(), t.columns[c].begin(),
                                         t.columns[c].end());
            }
        }
    }

    RawTable table;
    FeatureSchema schema;
    if (looks_like_adult(merged)) {
        std::tie(table, schema) = preprocess_adult(merged);
    } else {
        table = std::move(merged);
        schema = infer_schema(table, opts.label_column);
    }
    if (!opts.schema_file.empty()) {
        std::ifstream in(opts.schema_file);
        if (!in) throw std::runtime_error("cannot read schema file: " + opts.schema_file);
        std::stringstream buf;
        buf << in.rdbuf();
        apply_schema_override(&schema, buf.str());
    }
    PreparedData out;
    std::tie(out.encoded, out.schema) = one_hot_encode(table, schema);
    out.schema.label_name = schema.label_name;
    return out;
}

std::string run_prep_adult(const RunOptions& opts) {
    const PreparedData data = load_and_prepare(opts);

    std::ostringstream csv;
    for (size_t c = 0; c < data.encoded.column_names.size(); ++c) {
        csv << (c ? "," : "") << data.encoded.column_names[c];
    }
    csv << "\n";
    for (size_t r = 0; r < data.encoded.row_count(); ++r) {
        for (size_t c = 0; c < data.encoded.columns.size(); ++c) {
            csv << (c ? "," : "") << data.encoded.columns[c][r];
        }
        csv << "\n";
    }
    write_file(out_path(opts, "prepared.csv"), csv.str());

    nlohmann::json schema_doc;
    for (size_t f = 0; f < data.schema.feature_count(); ++f) {
        schema_doc[data.schema.feature_names[f]] = {
            {"kind", "continuous"},
            {"monotone_direction", data.schema.monotone_directions[f]}};
    }
    write_file(out_path(opts, "schema.json"), schema_doc.dump(2) + "\n");

    std::ostringstream report;
    report << "prepared " << data.encoded.row_count() << " rows, "
           << data.schema.feature_count() << " encoded features -> " << opts.out_dir << "\n";
    return report.str();
}

std::string run_train(const RunOptions& opts) {
    const PreparedData data = load_and_prepare(opts);
    const BinnedDataset ds = bin_features(data.encoded, data.schema, opts.max_bins);
    const SplitPlan plan = mc_split(ds.row_count, opts.train_ratio, opts.seed);
    const BinnedDataset test_ds = subset_rows(ds, plan.test_rows);

    const std::vector<ConstraintMode> modes = parse_methods(opts, {"fast"});
    const double gamma = gammas_or(opts, {0.0}).front();
    EvalSpec eval;
    eval.dataset = &test_ds;
    const TrainResult result = train(ds, plan.train_rows, opts.booster_config(modes.front(), gamma),
                                     eval);

    write_file(out_path(opts, "model.json"), serialize_model(result.model));
    std::ostringstream staged;
    staged << "iteration,metric,split,value\n";
    for (const StagedMetric& m : result.staged) {
        staged << m.iteration << "," << m.metric << "," << m.split << "," << fmt(m.value) << "\n";
    }
    write_file(out_path(opts, "staged.csv"), staged.str());

    std::ostringstream report;
    report << "trained " << result.model.trees.size() << " trees ("
           << to_string(modes.front()) << ", gamma " << fmt6(gamma) << ") on "
           << plan.train_rows.size() << " rows; model and staged metrics in " << opts.out_dir
           << "\n";
    return report.str();
}

std::string run_evaluate(const RunOptions& opts) {
    if (opts.model_path.empty()) throw std::invalid_argument("evaluate needs a model file");
    std::ifstream in(opts.model_path);
    if (!in) throw std::runtime_error("cannot read model file: " + opts.model_path);
    std::stringstream buf;
    buf << in.rdbuf();
    const BoosterModel model = deserialize_model(buf.str());

    const PreparedData data = load_and_prepare(opts);
    const std::vector<double> scores = model.predict_table(data.encoded);
    const std::vector<double> labels = numeric_column(data.encoded, data.schema.label_name);

    std::ostringstream report;
    report << "rows," << scores.size() << "\n";
    if (model.config.objective == ObjectiveKind::kBinaryLogloss) {
        report << "logloss," << fmt(logloss(scores, labels)) << "\n";
        report << "accuracy," << fmt(accuracy(scores, labels)) << "\n";
        report << "auc," << fmt(auc(scores, labels)) << "\n";
    } else {
        report << "mse," << fmt(mse(scores, labels)) << "\n";
    }
    write_file(out_path(opts, "evaluation.csv"), report.str());
    return report.str();
}

std::string run_mc_benchmark(const RunOptions& opts) {
    if (opts.trials < 1) throw std::invalid_argument("mc-benchmark: trials must be >= 1");
    const PreparedData data = load_and_prepare(opts);
    const BinnedDataset ds = bin_features(data.encoded, data.schema, opts.max_bins);

    const std::vector<ConstraintMode> modes =
        parse_methods(opts, {"none", "basic", "fast", "slow"});
    const std::vector<double> gammas = gammas_or(opts, {0.0});

    std::vector<BenchmarkRun> runs;
    for (int trial = 1; trial <= opts.trials; ++trial) {
        for (const ConstraintMode mode : modes) {
            for (const double gamma : gammas) {
                runs.push_back({static_cast<uint64_t>(trial), mode, gamma, {}});
            }
        }
    }
    execute_runs(&runs, ds, opts);

    std::ostringstream per_trial;
    per_trial << "trial,method,gamma,iteration,split,metric,value\n";
    for (const BenchmarkRun& run : runs) {
        for (const StagedMetric& m : run.staged) {
            per_trial << run.trial_seed << "," << to_string(run.mode) << "," << fmt6(run.gamma)
                      << "," << m.iteration << "," << m.split << "," << m.metric << ","
                      << fmt(m.value) << "\n";
        }
    }
    write_file(out_path(opts, "mc_trials.csv"), per_trial.str());

    // Trial means per (method, gamma, iteration, split, metric), in the
    // deterministic order of the first run's staged table.
    struct Key {
        std::string method;
        double gamma;
        int iteration;
        std::string split;
        std::string metric;
        bool operator<(const Key& o) const {
            return std::tie(method, gamma, iteration, split, metric) <
                   std::tie(o.method, o.gamma, o.iteration, o.split, o.metric);
        }
    };
    std::map<Key, double> sums;
    for (const BenchmarkRun& run : runs) {
        for (const StagedMetric& m : run.staged) {
            sums[{to_string(run.mode), run.gamma, m.iteration, m.split, m.metric}] += m.value;
        }
    }
    const double n_trials = static_cast<double>(opts.trials);

    std::ostringstream averaged;
    averaged << "method,gamma,iteration,split,metric,mean,diff_vs_basic,ratio_vs_basic\n";
    for (const auto& [key, sum] : sums) {
        const double mean = sum / n_trials;
        averaged << key.method << "," << fmt6(key.gamma) << "," << key.iteration << ","
                 << key.split << "," << key.metric << "," << fmt(mean);
        const auto basic = sums.find({"basic", 0.0, key.iteration, key.split, key.metric});
        if (basic != sums.end()) {
            const double basic_mean = basic->second / n_trials;
            averaged << "," << fmt(mean - basic_mean) << "," << fmt(mean / basic_mean - 1.0);
        } else {
            averaged << ",,";
        }
        averaged << "\n";
    }
    write_file(out_path(opts, "mc_averaged.csv"), averaged.str());

    std::ostringstream report;
    report << "ran " << runs.size() << " trainings (" << opts.trials << " trials x "
           << modes.size() << " methods x " << gammas.size() << " gammas); results in "
           << opts.out_dir << "\n";
    return report.str();
}

std::string run_gamma_sweep(const RunOptions& opts) {
    const std::vector<double> gammas = gammas_or(opts, {0.0, 0.5, 1.0, 1.5, 2.0});
    if (gammas.empty()) throw std::invalid_argument("gamma-sweep: empty gamma list");
    const PreparedData data = load_and_prepare(opts);
    const BinnedDataset ds = bin_features(data.encoded, data.schema, opts.max_bins);
    const ConstraintMode mode = parse_methods(opts, {"fast"}).front();

    // The unpenalized baseline is always trained, even when 0 was not in
    // the requested list.
    std::vector<double> train_gammas = gammas;
    if (std::find(train_gammas.begin(), train_gammas.end(), 0.0) == train_gammas.end()) {
        train_gammas.insert(train_gammas.begin(), 0.0);
    }
    std::vector<BenchmarkRun> runs;
    for (int trial = 1; trial <= opts.trials; ++trial) {
        for (const double gamma : train_gammas) {
            runs.push_back({static_cast<uint64_t>(trial), mode, gamma, {}});
        }
    }
    execute_runs(&runs, ds, opts);

    // Mean train logloss per (gamma, iteration); cells compare against the
    // gamma = 0 baseline.
    std::map<std::pair<double, int>, double> sums;
    for (const BenchmarkRun& run : runs) {
        for (const StagedMetric& m : run.staged) {
            if (m.metric != "logloss" || m.split != "train") continue;
            sums[{run.gamma, m.iteration}] += m.value;
        }
    }
    std::ostringstream csv;
    csv << "gamma,iteration,relative_change\n";
    for (const double gamma : gammas) {
        for (int it = 1; it <= opts.iterations; ++it) {
            const double mean = sums[{gamma, it}] / static_cast<double>(opts.trials);
            const double base = sums[{0.0, it}] / static_cast<double>(opts.trials);
            csv << fmt6(gamma) << "," << it << "," << fmt(mean / base - 1.0) << "\n";
        }
    }
    write_file(out_path(opts, "gamma_sweep.csv"), csv.str());
    std::ostringstream report;
    report << "gamma sweep (" << to_string(mode) << ") over " << gammas.size() << " gammas x "
           << opts.iterations << " iterations; results in " << opts.out_dir << "\n";
    return report.str();
}

std::string run_time_benchmark(const RunOptions& opts) {
    if (opts.reps < 1) throw std::invalid_argument("time-benchmark: reps must be >= 1");
    const PreparedData data = load_and_prepare(opts);
    const BinnedDataset full = bin_features(data.encoded, data.schema, opts.max_bins);
    const std::vector<ConstraintMode> modes =
        parse_methods(opts, {"none", "basic", "fast", "slow"});
    const double gamma = gammas_or(opts, {0.0}).front();

    // One boosting iteration at depth 10 / 40 leaves, trees filled as far
    // as the data allows.
    TreeConfig tree_cfg;
    tree_cfg.num_leaves = 40;
    tree_cfg.max_depth = 10;
    tree_cfg.min_data_in_leaf = 20;
    tree_cfg.lambda = opts.lambda;
    tree_cfg.penalty = {gamma, opts.epsilon};

    std::ostringstream csv;
    csv << "size,method,mean_ms,std_ms\n";
    std::ostringstream report;
    for (const size_t requested : opts.sizes) {
        const size_t size = requested == 0 ? full.row_count : std::min(requested, full.row_count);
        std::vector<size_t> shuffled(full.row_count);
        std::iota(shuffled.begin(), shuffled.end(), size_t{0});
        Rng rng(opts.seed);
        for (size_t i = shuffled.size() - 1; i > 0; --i) {
            std::swap(shuffled[i], shuffled[rng.next_below(i + 1)]);
        }
        const std::vector<size_t> rows(shuffled.begin(),
                                       shuffled.begin() + static_cast<ptrdiff_t>(size));
        const double base = base_margin_for(ObjectiveKind::kBinaryLogloss, full.labels, rows);
        std::vector<GradHess> gh(full.row_count);
        for (size_t r : rows) gh[r] = grad_hess(ObjectiveKind::kBinaryLogloss, base, full.labels[r]);

        for (const ConstraintMode mode : modes) {
            std::vector<double> times_ms;
            times_ms.reserve(static_cast<size_t>(opts.reps));
            for (int rep = 0; rep < opts.reps; ++rep) {
                auto engine = make_engine(mode);
                TreeGrower grower(full, tree_cfg, engine.get());
                const auto t0 = std::chrono::steady_clock::now();
                const Tree tree = grower.grow(rows, gh);
                const auto t1 = std::chrono::steady_clock::now();
                (void)tree;
                times_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
            }
            double mean = 0.0;
            for (double t : times_ms) mean += t;
            mean /= static_cast<double>(times_ms.size());
            double var = 0.0;
            for (double t : times_ms) var += (t - mean) * (t - mean);
            const double stddev =
                times_ms.size() > 1 ? std::sqrt(var / static_cast<double>(times_ms.size() - 1))
                                    : 0.0;
            csv << size << "," << to_string(mode) << "," << fmt(mean) << "," << fmt(stddev)
                << "\n";
            report << "size " << size << " " << to_string(mode) << ": mean " << fmt6(mean)
                   << " ms, std " << fmt6(stddev) << " ms\n";
        }
    }
    write_file(out_path(opts, "timings.csv"), csv.str());
    return report.str();
}

std::string run_penalty_table(const RunOptions& opts) {
    const std::vector<double> gammas = gammas_or(opts, {0.0, 0.5, 1.0, 1.5, 2.0, 3.0});
    std::ostringstream out;
    out << "gamma";
    for (int d = 0; d <= opts.max_depth; ++d) out << ",depth_" << d;
    out << "\n";
    for (const double gamma : gammas) {
        out << fmt6(gamma);
        for (int d = 0; d <= opts.max_depth; ++d) out << "," << fmt(penalty(gamma, d));
        out << "\n";
    }
    return out.str();
}

std::string run_figure_example(const RunOptions&) { return cluster_demo_report(); }

std::string run_export_trees(const RunOptions& opts) {
    if (opts.model_path.empty()) throw std::invalid_argument("export-trees needs a model file");
    std::ifstream in(opts.model_path);
    if (!in) throw std::runtime_error("cannot read model file: " + opts.model_path);
    std::stringstream buf;
    buf << in.rdbuf();
    const BoosterModel model = deserialize_model(buf.str());

    const size_t k = std::min<size_t>(static_cast<size_t>(std::max(0, opts.first_k_trees)),
                                      model.trees.size());
    for (size_t i = 0; i < k; ++i) {
        write_file(out_path(opts, "tree_" + std::to_string(i) + ".dot"),
                   export_dot(model.trees[i], model.feature_names));
    }
    std::ostringstream report;
    report << "wrote " << k << " DOT files to " << opts.out_dir << "\n";
    return report.str();
}

}  // namespace mgbt
