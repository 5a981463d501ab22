#include "odem/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "odem/errors.hpp"
#include "odem/mlp.hpp"
#include "odem/rng.hpp"
#include "odem/train.hpp"

namespace odem {

using nlohmann::json;

std::string to_string(UtilityMode m) {
    return m == UtilityMode::uniform ? "uniform" : "random";
}

UtilityMode utility_mode_from_string(const std::string& s) {
    if (s == "uniform") return UtilityMode::uniform;
    if (s == "random" || s == "random_draw") return UtilityMode::random_draw;
    throw ArgumentError("unknown utility mode: " + s);
}

ArchDescriptor StreamConfig::arch() const {
    return ArchDescriptor::mlp(2, hidden, class_count, activation);
}

void StreamConfig::validate() const {
    if (n_tasks < 1) {
        throw ArgumentError("StreamConfig: n_tasks must be at least 1");
    }
    if (calibration_capacity < 1) {
        throw ArgumentError("StreamConfig: calibration_capacity must be at least 1");
    }
    if (calibration_capacity < n_tasks) {
        throw ArgumentError("StreamConfig: calibration_capacity must cover one sample per task");
    }
    if (class_count < 2) {
        throw ArgumentError("StreamConfig: class_count must be at least 2");
    }
    if (clusters_per_class < 1) {
        throw ArgumentError("StreamConfig: clusters_per_class must be at least 1");
    }
    if (!(separation > 0.0)) {
        throw ArgumentError("StreamConfig: separation must be positive");
    }
    if (train.steps < 1) {
        throw ArgumentError("StreamConfig: train.steps must be at least 1");
    }
    if (!(train.lr >= 0.0) || !std::isfinite(train.lr)) {
        throw ArgumentError("StreamConfig: train.lr must be finite and non-negative");
    }
    integration.validate();
    method_params.validate();
}

namespace {

void require_known_keys(const json& j, std::initializer_list<const char*> known, const char* where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known) {
            if (it.key() == k) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            throw FormatError(std::string("config: unknown key '") + it.key() + "' in " + where);
        }
    }
}

json method_params_to_json(const MethodParams& p) {
    json j;
    j["lambda_ta"] = p.lambda_ta;
    j["ties_keep_fraction"] = p.ties_keep_fraction;
    j["lambda_ties"] = p.lambda_ties;
    j["opcm_scale_rule"] = p.opcm_scale.rule == OpcmScale::Rule::sqrt_k ? "sqrt_k" : "constant";
    j["opcm_scale_constant"] = p.opcm_scale.constant;
    if (p.gamma_override) {
        j["gamma_override"] = *p.gamma_override;
    } else {
        j["gamma_override"] = nullptr;
    }
    return j;
}

MethodParams method_params_from_json(const json& j) {
    require_known_keys(j,
                       {"lambda_ta", "ties_keep_fraction", "lambda_ties", "opcm_scale_rule",
                        "opcm_scale_constant", "gamma_override"},
                       "method_params");
    MethodParams p;
    p.lambda_ta = j.value("lambda_ta", p.lambda_ta);
    p.ties_keep_fraction = j.value("ties_keep_fraction", p.ties_keep_fraction);
    p.lambda_ties = j.value("lambda_ties", p.lambda_ties);
    if (j.contains("opcm_scale_rule")) {
        const std::string rule = j.at("opcm_scale_rule").get<std::string>();
        if (rule == "sqrt_k") {
            p.opcm_scale.rule = OpcmScale::Rule::sqrt_k;
        } else if (rule == "constant") {
            p.opcm_scale.rule = OpcmScale::Rule::constant;
        } else {
            throw FormatError("config: unknown opcm_scale_rule '" + rule + "'");
        }
    }
    p.opcm_scale.constant = j.value("opcm_scale_constant", p.opcm_scale.constant);
    if (j.contains("gamma_override") && !j.at("gamma_override").is_null()) {
        p.gamma_override = j.at("gamma_override").get<double>();
    }
    return p;
}

}  // namespace

StreamConfig stream_config_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw FormatError(std::string("config: invalid JSON: ") + e.what());
    }
    require_known_keys(j,
                       {"n_tasks", "method", "method_params", "integration", "calibration_capacity",
                        "calibration_include_incoming", "utility_mode", "utility_seed",
                        "permutation_seed", "task_seed", "init_seed", "calibration_seed",
                        "class_count", "clusters_per_class", "separation", "hidden", "activation",
                        "train"},
                       "top level");
    StreamConfig cfg;
    try {
        cfg.n_tasks = j.value("n_tasks", cfg.n_tasks);
        if (j.contains("method")) {
            cfg.method = merge_method_from_string(j.at("method").get<std::string>());
        }
        if (j.contains("method_params")) {
            cfg.method_params = method_params_from_json(j.at("method_params"));
        }
        if (j.contains("integration")) {
            const json& ji = j.at("integration");
            require_known_keys(ji, {"step_size"}, "integration");
            cfg.integration.step_size = ji.value("step_size", cfg.integration.step_size);
        }
        cfg.calibration_capacity = j.value("calibration_capacity", cfg.calibration_capacity);
        cfg.calibration_include_incoming =
            j.value("calibration_include_incoming", cfg.calibration_include_incoming);
        if (j.contains("utility_mode")) {
            cfg.utility_mode = utility_mode_from_string(j.at("utility_mode").get<std::string>());
        }
        cfg.utility_seed = j.value("utility_seed", cfg.utility_seed);
        cfg.permutation_seed = j.value("permutation_seed", cfg.permutation_seed);
        cfg.task_seed = j.value("task_seed", cfg.task_seed);
        cfg.init_seed = j.value("init_seed", cfg.init_seed);
        cfg.calibration_seed = j.value("calibration_seed", cfg.calibration_seed);
        cfg.class_count = j.value("class_count", cfg.class_count);
        cfg.clusters_per_class = j.value("clusters_per_class", cfg.clusters_per_class);
        cfg.separation = j.value("separation", cfg.separation);
        if (j.contains("hidden")) {
            cfg.hidden = j.at("hidden").get<std::vector<std::size_t>>();
        }
        if (j.contains("activation")) {
            cfg.activation = activation_from_string(j.at("activation").get<std::string>());
        }
        if (j.contains("train")) {
            const json& jt = j.at("train");
            require_known_keys(jt, {"steps", "lr"}, "train");
            cfg.train.steps = jt.value("steps", cfg.train.steps);
            cfg.train.lr = jt.value("lr", cfg.train.lr);
        }
    } catch (const json::exception& e) {
        throw FormatError(std::string("config: bad field type: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

std::string stream_config_to_json_text(const StreamConfig& cfg) {
    json j;
    j["n_tasks"] = cfg.n_tasks;
    j["method"] = to_string(cfg.method);
    j["method_params"] = method_params_to_json(cfg.method_params);
    j["integration"] = json{{"step_size", cfg.integration.step_size}};
    j["calibration_capacity"] = cfg.calibration_capacity;
    j["calibration_include_incoming"] = cfg.calibration_include_incoming;
    j["utility_mode"] = to_string(cfg.utility_mode);
    j["utility_seed"] = cfg.utility_seed;
    j["permutation_seed"] = cfg.permutation_seed;
    j["task_seed"] = cfg.task_seed;
    j["init_seed"] = cfg.init_seed;
    j["calibration_seed"] = cfg.calibration_seed;
    j["class_count"] = cfg.class_count;
    j["clusters_per_class"] = cfg.clusters_per_class;
    j["separation"] = cfg.separation;
    j["hidden"] = cfg.hidden;
    j["activation"] = to_string(cfg.activation);
    j["train"] = json{{"steps", cfg.train.steps}, {"lr", cfg.train.lr}};
    return j.dump(2);
}

StreamConfig load_stream_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError("config: cannot open " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return stream_config_from_json_text(buf.str());
}

std::string TaskModelCache::key_for(const SyntheticTask& task, const ArchDescriptor& arch,
                                    const TrainParams& train, std::uint64_t init_seed) {
    std::ostringstream os;
    os << "task:" << task.generator_seed << ":" << task.class_count << ":" << task.clusters_per_class
       << ":" << task.separation << "|arch:";
    for (const Shape& s : arch.shapes()) {
        os << s.rows << "x" << s.cols << ",";
    }
    os << static_cast<int>(arch.activation()) << ":" << arch.class_count();
    os << "|train:" << train.steps << ":" << train.lr << "|init:" << init_seed;
    return os.str();
}

const Checkpoint* TaskModelCache::find(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

void TaskModelCache::put(std::string key, Checkpoint value) {
    entries_.insert_or_assign(std::move(key), std::move(value));
}

std::vector<SyntheticTask> make_stream_tasks(const StreamConfig& cfg) {
    std::vector<SyntheticTask> tasks;
    tasks.reserve(cfg.n_tasks);
    for (std::size_t i = 0; i < cfg.n_tasks; ++i) {
        tasks.push_back(generate_task(cfg.task_seed + i, cfg.class_count, cfg.clusters_per_class,
                                      cfg.separation, static_cast<int>(i)));
    }
    return tasks;
}

Checkpoint make_init_checkpoint(const StreamConfig& cfg) {
    return init_checkpoint(cfg.arch(), cfg.init_seed, "init");
}

std::vector<Checkpoint> train_stream_models(const StreamConfig& cfg,
                                            const std::vector<SyntheticTask>& tasks,
                                            TaskModelCache* cache) {
    const ArchDescriptor arch = cfg.arch();
    const Checkpoint init = make_init_checkpoint(cfg);
    std::vector<Checkpoint> models;
    models.reserve(tasks.size());
    for (const SyntheticTask& task : tasks) {
        const std::string key = TaskModelCache::key_for(task, arch, cfg.train, cfg.init_seed);
        if (cache != nullptr) {
            if (const Checkpoint* hit = cache->find(key)) {
                models.push_back(*hit);
                continue;
            }
        }
        Checkpoint trained = train_task_model(task, arch, init, cfg.train.steps, cfg.train.lr);
        if (cache != nullptr) {
            cache->put(key, trained);
        }
        models.push_back(std::move(trained));
    }
    return models;
}

std::vector<double> draw_task_utilities(const StreamConfig& cfg) {
    std::vector<double> w(cfg.n_tasks, 1.0);
    if (cfg.utility_mode == UtilityMode::random_draw) {
        Rng rng(cfg.utility_seed);
        double total = 0.0;
        for (double& x : w) {
            x = rng.uniform(0.1, 1.0);
        }
        for (double x : w) {
            total += x;
        }
        for (double& x : w) {
            x /= total;
        }
    }
    return w;
}

std::vector<int> make_permutation(const StreamConfig& cfg) {
    std::vector<int> perm(cfg.n_tasks);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(cfg.permutation_seed);
    rng.shuffle(perm);
    return perm;
}

namespace {

constexpr std::size_t kHistogramTimeBins = 20;
constexpr std::size_t kHistogramValueBins = 20;

std::vector<SyntheticTask> seen_tasks_for_step(const StreamConfig& cfg,
                                               const std::vector<SyntheticTask>& tasks,
                                               const std::vector<int>& perm, std::size_t k) {
    const std::size_t upto = cfg.calibration_include_incoming ? k : k - 1;
    std::vector<SyntheticTask> seen;
    seen.reserve(upto);
    for (std::size_t i = 0; i < upto; ++i) {
        seen.push_back(tasks[static_cast<std::size_t>(perm[i])]);
    }
    return seen;
}

[[noreturn]] void rethrow_with_step(std::size_t k) {
    const std::string prefix = "merge step " + std::to_string(k) + ": ";
    try {
        throw;
    } catch (const DimensionError& e) {
        throw DimensionError(prefix + e.what());
    } catch (const NumericError& e) {
        throw NumericError(prefix + e.what());
    } catch (const DomainError& e) {
        throw DomainError(prefix + e.what());
    } catch (const ArgumentError& e) {
        throw ArgumentError(prefix + e.what());
    } catch (const TrainingError& e) {
        throw TrainingError(prefix + e.what(), e.step());
    } catch (const Error& e) {
        throw Error(prefix + e.what());
    }
}

}  // namespace

RunResult run_stream(const StreamConfig& cfg, TaskModelCache* cache) {
    cfg.validate();
    const ArchDescriptor arch = cfg.arch();
    const std::vector<SyntheticTask> tasks = make_stream_tasks(cfg);
    const std::vector<Checkpoint> models = train_stream_models(cfg, tasks, cache);
    const std::vector<int> perm = make_permutation(cfg);
    const std::vector<double> task_utils = draw_task_utilities(cfg);

    RunResult res;
    res.config = cfg;
    res.permutation = perm;
    res.weights_by_arrival.reserve(cfg.n_tasks);
    for (int id : perm) {
        res.weights_by_arrival.push_back(task_utils[static_cast<std::size_t>(id)]);
    }
    const UtilityWeights weights(res.weights_by_arrival);
    const std::vector<std::size_t> blocks = arch.block_sizes();
    const ParamVector psi0 = make_init_checkpoint(cfg).params;

    auto score_row = [&](const ParamVector& psi, std::size_t k) {
        std::vector<double> row;
        row.reserve(k);
        for (std::size_t i = 0; i < k; ++i) {
            row.push_back(accuracy(psi, arch, tasks[static_cast<std::size_t>(perm[i])]));
        }
        return row;
    };

    MergeState state =
        init_merge(cfg.method, models[static_cast<std::size_t>(perm[0])].params, psi0, weights.weight(1));
    res.accuracy_matrix.append_row(score_row(state.psi, 1));
    res.acc_w_per_step.push_back(acc_w(res.accuracy_matrix, 1, weights));

    for (std::size_t k = 2; k <= cfg.n_tasks; ++k) {
        const ParamVector& psi_k = models[static_cast<std::size_t>(perm[k - 1])].params;
        Trajectory traj;
        const auto t_begin = std::chrono::steady_clock::now();
        try {
            switch (cfg.method) {
                case MergeMethod::odem: {
                    const CalibrationSet calib =
                        build_calibration(seen_tasks_for_step(cfg, tasks, perm, k),
                                          cfg.calibration_capacity, derive_seed(cfg.calibration_seed, k));
                    const LossOracle oracle = LossOracle::mlp(arch, calib);
                    state = odem_step(state, psi_k, oracle, weights, cfg.integration,
                                      cfg.method_params, &traj);
                    break;
                }
                case MergeMethod::swa:
                    state = swa_step(state, psi_k, weights);
                    break;
                case MergeMethod::task_arithmetic:
                    state = task_arith_step(state, psi_k, weights, cfg.method_params);
                    break;
                case MergeMethod::ties:
                    state = ties_step(state, psi_k, weights, cfg.method_params);
                    break;
                case MergeMethod::opcm_lite:
                    state = opcm_lite_step(state, psi_k, weights, cfg.method_params, blocks);
                    break;
            }
        } catch (const Error&) {
            rethrow_with_step(k);
        }
        const auto t_end = std::chrono::steady_clock::now();
        res.merge_wall_seconds.push_back(std::chrono::duration<double>(t_end - t_begin).count());

        for (const StepDiagnostics& d : traj.diagnostics) {
            res.diagnostics.push_back(MergeStepDiagnostics{k, d});
        }
        res.accuracy_matrix.append_row(score_row(state.psi, k));
        res.acc_w_per_step.push_back(acc_w(res.accuracy_matrix, k, weights));
        res.bwt_w_per_step.push_back(bwt_w(res.accuracy_matrix, k, weights));
    }

    std::vector<StepDiagnostics> flat;
    flat.reserve(res.diagnostics.size());
    for (const MergeStepDiagnostics& d : res.diagnostics) {
        flat.push_back(d.diag);
    }
    res.gamma_hist = gamma_histogram(flat, kHistogramTimeBins, kHistogramValueBins);
    res.alignment_hist = alignment_histogram(flat, kHistogramTimeBins, kHistogramValueBins);
    res.rho_hat = 0.0;
    for (const StepDiagnostics& d : flat) {
        res.rho_hat = std::max(res.rho_hat, d.align_ratio);
    }
    return res;
}

namespace {

json histogram_to_json(const Histogram2D& h) {
    json j;
    j["t_bins"] = h.t_bins;
    j["value_bins"] = h.value_bins;
    j["counts"] = h.counts;
    j["total"] = h.total;
    return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw FormatError("cannot open " + path.string() + " for writing");
    }
    out << text;
}

}  // namespace

void write_accuracy_matrix_csv(const AccuracyMatrix& m, const std::filesystem::path& path) {
    std::ostringstream os;
    os << "k,i,accuracy\n";
    char buf[64];
    for (std::size_t k = 1; k <= m.steps(); ++k) {
        for (std::size_t i = 1; i <= k; ++i) {
            std::snprintf(buf, sizeof(buf), "%zu,%zu,%.17g\n", k, i, m.at(k, i));
            os << buf;
        }
    }
    write_text_file(path, os.str());
}

void write_run_diagnostics_csv(const std::vector<MergeStepDiagnostics>& diags,
                               const std::filesystem::path& path) {
    std::ostringstream os;
    os << "merge_step,t,loss,gamma,dot_gu,align_ratio\n";
    char buf[512];
    for (const MergeStepDiagnostics& d : diags) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.17g,%.17g\n", d.merge_step, d.diag.t,
                      d.diag.loss, d.diag.gamma, d.diag.dot_gu, d.diag.align_ratio);
        os << buf;
    }
    write_text_file(path, os.str());
}

void write_run_result(const RunResult& result, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);

    json j;
    j["config"] = json::parse(stream_config_to_json_text(result.config));
    j["permutation"] = result.permutation;
    j["weights_by_arrival"] = result.weights_by_arrival;
    j["accuracy_matrix"] = result.accuracy_matrix.rows();
    j["acc_w"] = result.acc_w_per_step;
    j["bwt_w"] = result.bwt_w_per_step;
    j["rho_hat"] = result.rho_hat;
    j["gamma_histogram"] = histogram_to_json(result.gamma_hist);
    j["alignment_histogram"] = histogram_to_json(result.alignment_hist);
    write_text_file(out_dir / "run.json", j.dump(2) + "\n");

    write_accuracy_matrix_csv(result.accuracy_matrix, out_dir / "accuracy_matrix.csv");
    write_run_diagnostics_csv(result.diagnostics, out_dir / "diagnostics.csv");

    // Wall-clock timings are environment noise; they live in a separate file
    // so the files above stay byte-identical across repeated runs.
    json jt;
    jt["merge_wall_seconds"] = result.merge_wall_seconds;
    write_text_file(out_dir / "timing.json", jt.dump(2) + "\n");
}

SuiteResult run_suite(const StreamConfig& base, std::size_t n_permutations,
                      std::size_t n_utility_draws, TaskModelCache* cache) {
    if (n_permutations < 1) {
        throw ArgumentError("run_suite: n_permutations must be at least 1");
    }
    if (n_utility_draws < 1) {
        throw ArgumentError("run_suite: n_utility_draws must be at least 1");
    }
    TaskModelCache local_cache;
    if (cache == nullptr) {
        cache = &local_cache;
    }
    SuiteResult suite;
    suite.base = base;
    suite.n_permutations = n_permutations;
    suite.n_utility_draws = n_utility_draws;

    for (std::size_t p = 0; p < n_permutations; ++p) {
        for (std::size_t d = 0; d < n_utility_draws; ++d) {
            StreamConfig cfg = base;
            cfg.permutation_seed = base.permutation_seed + p;
            cfg.utility_seed = base.utility_seed + d;
            RunResult run;
            try {
                run = run_stream(cfg, cache);
            } catch (const Error& e) {
                throw Error("suite run failed (permutation_seed=" +
                            std::to_string(cfg.permutation_seed) +
                            ", utility_seed=" + std::to_string(cfg.utility_seed) + "): " + e.what());
            }
            SuiteRun row;
            row.permutation_seed = cfg.permutation_seed;
            row.utility_seed = cfg.utility_seed;
            row.final_acc_w = run.acc_w_per_step.back();
            row.final_bwt_w = run.bwt_w_per_step.empty() ? 0.0 : run.bwt_w_per_step.back();
            suite.runs.push_back(row);
        }
    }

    auto mean_std = [](const std::vector<double>& xs) {
        const double n = static_cast<double>(xs.size());
        double mean = 0.0;
        for (double x : xs) {
            mean += x;
        }
        mean /= n;
        double var = 0.0;
        if (xs.size() > 1) {
            for (double x : xs) {
                var += (x - mean) * (x - mean);
            }
            var /= (n - 1.0);
        }
        return std::pair<double, double>(mean, std::sqrt(var));
    };
    std::vector<double> accs;
    std::vector<double> bwts;
    for (const SuiteRun& r : suite.runs) {
        accs.push_back(r.final_acc_w);
        bwts.push_back(r.final_bwt_w);
    }
    std::tie(suite.acc_mean, suite.acc_std) = mean_std(accs);
    std::tie(suite.bwt_mean, suite.bwt_std) = mean_std(bwts);
    return suite;
}

void write_suite_result(const SuiteResult& result, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    json j;
    j["config"] = json::parse(stream_config_to_json_text(result.base));
    j["n_permutations"] = result.n_permutations;
    j["n_utility_draws"] = result.n_utility_draws;
    j["final_acc_w"] = json{{"mean", result.acc_mean}, {"std", result.acc_std}};
    j["final_bwt_w"] = json{{"mean", result.bwt_mean}, {"std", result.bwt_std}};
    json runs = json::array();
    for (const SuiteRun& r : result.runs) {
        runs.push_back(json{{"permutation_seed", r.permutation_seed},
                            {"utility_seed", r.utility_seed},
                            {"final_acc_w", r.final_acc_w},
                            {"final_bwt_w", r.final_bwt_w}});
    }
    j["runs"] = runs;
    write_text_file(out_dir / "aggregate.json", j.dump(2) + "\n");
}

SweepTable sweep_pair(const StreamConfig& cfg, int task_a, int task_b, TaskModelCache* cache) {
    cfg.validate();
    if (task_a < 0 || task_b < 0 || static_cast<std::size_t>(task_a) >= cfg.n_tasks ||
        static_cast<std::size_t>(task_b) >= cfg.n_tasks) {
        throw ArgumentError("sweep_pair: task indices out of range");
    }
    const ArchDescriptor arch = cfg.arch();
    const std::vector<SyntheticTask> tasks = make_stream_tasks(cfg);
    const std::vector<Checkpoint> models = train_stream_models(cfg, tasks, cache);

    std::vector<SyntheticTask> seen{tasks[static_cast<std::size_t>(task_a)]};
    if (task_b != task_a) {
        seen.push_back(tasks[static_cast<std::size_t>(task_b)]);
    }
    const CalibrationSet calib =
        build_calibration(seen, cfg.calibration_capacity,
                          derive_seed(cfg.calibration_seed,
                                      1000 + static_cast<std::uint64_t>(task_a) * cfg.n_tasks +
                                          static_cast<std::uint64_t>(task_b)));
    const LossOracle oracle = LossOracle::mlp(arch, calib);
    FieldContext ctx(models[static_cast<std::size_t>(task_a)].params,
                     models[static_cast<std::size_t>(task_b)].params, oracle);

    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) {
        grid.push_back(static_cast<double>(i) / 10.0);
    }
    std::vector<const SyntheticTask*> eval{&tasks[static_cast<std::size_t>(task_a)]};
    if (task_b != task_a) {
        eval.push_back(&tasks[static_cast<std::size_t>(task_b)]);
    }
    return trajectory_sweep(ctx, arch, cfg.integration, grid, eval);
}

ScheduleValidationReport validate_schedule(const StreamConfig& cfg, double candidate_interval,
                                           TaskModelCache* cache) {
    cfg.validate();
    if (cfg.n_tasks < 3) {
        throw ArgumentError("validate_schedule: stream must have at least 3 tasks");
    }
    if (!(candidate_interval > 0.0) || candidate_interval > 0.5) {
        throw ArgumentError("validate_schedule: candidate interval must lie in (0, 0.5]");
    }
    const ArchDescriptor arch = cfg.arch();
    const std::vector<SyntheticTask> tasks = make_stream_tasks(cfg);
    const std::vector<Checkpoint> models = train_stream_models(cfg, tasks, cache);
    const std::vector<int> perm = make_permutation(cfg);
    const std::vector<double> task_utils = draw_task_utilities(cfg);
    std::vector<double> weights_by_arrival;
    for (int id : perm) {
        weights_by_arrival.push_back(task_utils[static_cast<std::size_t>(id)]);
    }

    const auto n_candidates = static_cast<std::size_t>(std::llround(1.0 / candidate_interval)) + 1;
    const std::vector<double> candidates = uniform_grid(n_candidates);

    ParamVector psi = models[static_cast<std::size_t>(perm[0])].params;
    std::vector<ScheduleStep> steps;
    for (std::size_t k = 2; k <= cfg.n_tasks; ++k) {
        const CalibrationSet calib =
            build_calibration(seen_tasks_for_step(cfg, tasks, perm, k), cfg.calibration_capacity,
                              derive_seed(cfg.calibration_seed, k));
        const LossOracle oracle = LossOracle::mlp(arch, calib);
        FieldContext ctx(psi, models[static_cast<std::size_t>(perm[k - 1])].params, oracle);
        IntegrationConfig sweep_cfg = cfg.integration;
        sweep_cfg.record_grid = candidates;
        const Trajectory traj = integrate(ctx, 1.0, sweep_cfg);

        double weight_total = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            weight_total += weights_by_arrival[i];
        }
        std::vector<double> times;
        std::vector<double> scores;
        for (const TrajectorySnapshot& snap : traj.snapshots) {
            double score = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                score += weights_by_arrival[i] *
                         accuracy(snap.theta, arch, tasks[static_cast<std::size_t>(perm[i])]);
            }
            times.push_back(snap.t);
            scores.push_back(score / weight_total);
        }
        const double t_star = pick_best_time(times, scores);
        double best_score = scores.front();
        for (std::size_t i = 0; i < times.size(); ++i) {
            if (times[i] == t_star) {
                best_score = scores[i];
                break;
            }
        }
        for (const TrajectorySnapshot& snap : traj.snapshots) {
            if (snap.t == t_star) {
                psi = snap.theta;
                break;
            }
        }
        steps.push_back(ScheduleStep{k, t_star, best_score});
    }
    return make_schedule_report(steps);
}

void write_schedule_report(const ScheduleValidationReport& report, const std::filesystem::path& path) {
    json j;
    json steps = json::array();
    for (const ScheduleStep& s : report.steps) {
        steps.push_back(json{{"k", s.k}, {"t_star", s.t_star}, {"best_score", s.best_score}});
    }
    j["steps"] = steps;
    j["retained"] = report.retained;
    j["reference"] = report.reference;
    j["spearman"] = report.correlation;
    j["degenerate"] = report.degenerate;
    write_text_file(path, j.dump(2) + "\n");
}

}  // namespace odem
