#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "odem/analysis.hpp"
#include "odem/checkpoint.hpp"
#include "odem/mergers.hpp"
#include "odem/metrics.hpp"
#include "odem/task.hpp"

namespace odem {

enum class UtilityMode { uniform, random_draw };

std::string to_string(UtilityMode m);
UtilityMode utility_mode_from_string(const std::string& s);

struct TrainParams {
    std::size_t steps = 400;
    double lr = 0.1;
};

/// Everything needed to reproduce one continual-merging run. All stochastic
/// choices are pinned by explicit seeds; identical configs produce
/// byte-identical result files.
struct StreamConfig {
    std::size_t n_tasks = 8;
    MergeMethod method = MergeMethod::odem;
    MethodParams method_params;
    IntegrationConfig integration;
    std::size_t calibration_capacity = 1024;
    bool calibration_include_incoming = true;
    UtilityMode utility_mode = UtilityMode::uniform;
    std::uint64_t utility_seed = 29;
    std::uint64_t permutation_seed = 13;
    std::uint64_t task_seed = 101;
    std::uint64_t init_seed = 7;
    std::uint64_t calibration_seed = 53;
    std::uint32_t class_count = 4;
    int clusters_per_class = 2;
    double separation = 4.0;
    std::vector<std::size_t> hidden = {16, 16};
    Activation activation = Activation::tanh;
    TrainParams train;

    ArchDescriptor arch() const;
    void validate() const;
};

StreamConfig load_stream_config(const std::filesystem::path& path);
StreamConfig stream_config_from_json_text(const std::string& text);
std::string stream_config_to_json_text(const StreamConfig& cfg);

/// Trained task models keyed by everything that determines them, so suites
/// and method comparisons reuse identical checkpoints instead of retraining.
class TaskModelCache {
public:
    static std::string key_for(const SyntheticTask& task, const ArchDescriptor& arch,
                               const TrainParams& train, std::uint64_t init_seed);
    const Checkpoint* find(const std::string& key) const;
    void put(std::string key, Checkpoint value);
    std::size_t size() const noexcept { return entries_.size(); }

private:
    std::map<std::string, Checkpoint> entries_;
};

struct MergeStepDiagnostics {
    std::size_t merge_step = 0;
    StepDiagnostics diag;
};

struct RunResult {
    StreamConfig config;
    std::vector<int> permutation;            // task ids in arrival order
    std::vector<double> weights_by_arrival;  // w_k for arrival position k
    AccuracyMatrix accuracy_matrix;
    std::vector<double> acc_w_per_step;  // index k-1
    std::vector<double> bwt_w_per_step;  // index k-2, steps 2..n
    std::vector<MergeStepDiagnostics> diagnostics;
    Histogram2D gamma_hist;
    Histogram2D alignment_hist;
    double rho_hat = 0.0;                    // max recorded alignment ratio
    std::vector<double> merge_wall_seconds;  // per merge step 2..n; not deterministic
};

/// Tasks for the stream in task-id order (before permutation).
std::vector<SyntheticTask> make_stream_tasks(const StreamConfig& cfg);

/// Shared starting checkpoint for every task model.
Checkpoint make_init_checkpoint(const StreamConfig& cfg);

/// One trained checkpoint per task, in task-id order.
std::vector<Checkpoint> train_stream_models(const StreamConfig& cfg,
                                            const std::vector<SyntheticTask>& tasks,
                                            TaskModelCache* cache = nullptr);

/// Utility weight per task id (normalized to sum 1 for random draws).
std::vector<double> draw_task_utilities(const StreamConfig& cfg);

/// Arrival order of task ids under the config's permutation seed.
std::vector<int> make_permutation(const StreamConfig& cfg);

/// Run one full stream: train task models, permute arrivals, merge
/// sequentially, score every seen task after each step.
RunResult run_stream(const StreamConfig& cfg, TaskModelCache* cache = nullptr);

/// Writes run.json, accuracy_matrix.csv, diagnostics.csv (deterministic)
/// plus timing.json (wall clock, excluded from determinism guarantees).
void write_run_result(const RunResult& result, const std::filesystem::path& out_dir);

struct SuiteRun {
    std::uint64_t permutation_seed = 0;
    std::uint64_t utility_seed = 0;
    double final_acc_w = 0.0;
    double final_bwt_w = 0.0;
};

struct SuiteResult {
    StreamConfig base;
    std::size_t n_permutations = 0;
    std::size_t n_utility_draws = 0;
    std::vector<SuiteRun> runs;
    double acc_mean = 0.0;
    double acc_std = 0.0;
    double bwt_mean = 0.0;
    double bwt_std = 0.0;
};

/// Grid of (permutation, utility draw) runs; seeds offset from the base
/// config. Reports mean and sample standard deviation of the final-step
/// weighted metrics.
SuiteResult run_suite(const StreamConfig& base, std::size_t n_permutations,
                      std::size_t n_utility_draws, TaskModelCache* cache = nullptr);

void write_suite_result(const SuiteResult& result, const std::filesystem::path& out_dir);

/// Sweep the merge trajectory between two trained task models over
/// t in {0, 0.1, ..., 1} and score both tasks at every snapshot.
SweepTable sweep_pair(const StreamConfig& cfg, int task_a, int task_b, TaskModelCache* cache = nullptr);

/// Run a stream where each merge step scans candidate operating times at
/// the given interval, deploys the best-scoring point (weighted validation
/// accuracy over seen tasks, ties to the smaller time) and records it; then
/// correlates retained contribution 1 - t* against (k-1)/k. Needs >= 3 tasks.
ScheduleValidationReport validate_schedule(const StreamConfig& cfg, double candidate_interval = 0.05,
                                           TaskModelCache* cache = nullptr);

void write_schedule_report(const ScheduleValidationReport& report, const std::filesystem::path& path);

void write_accuracy_matrix_csv(const AccuracyMatrix& m, const std::filesystem::path& path);
void write_run_diagnostics_csv(const std::vector<MergeStepDiagnostics>& diags,
                               const std::filesystem::path& path);

}  // namespace odem
