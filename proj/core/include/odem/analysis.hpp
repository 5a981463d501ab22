#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "odem/dynamics.hpp"
#include "odem/integrator.hpp"
#include "odem/metrics.hpp"
#include "odem/task.hpp"

namespace odem {

struct SweepRow {
    double t = 0.0;
    std::vector<double> per_task;
    double mean = 0.0;
};

struct SweepTable {
    std::vector<int> task_ids;
    std::vector<SweepRow> rows;
    double best_t = 0.0;
    double best_mean = 0.0;
};

/// Integrate once to t = 1 with the given grid as snapshot times and score
/// every snapshot on every task's test split. best_t is the grid time with
/// the highest mean accuracy (ties go to the smaller time).
SweepTable trajectory_sweep(const FieldContext& ctx, const ArchDescriptor& arch,
                            const IntegrationConfig& cfg, const std::vector<double>& grid,
                            const std::vector<const SyntheticTask*>& eval_tasks);

struct Histogram2D {
    std::size_t t_bins = 0;
    std::size_t value_bins = 0;
    std::vector<std::vector<std::uint64_t>> counts;  // [t_bin][value_bin]
    std::uint64_t total = 0;
};

/// 2-D counts of (t, gamma) pairs over [0,1] x [0,1]; values at the upper
/// edge land in the last bin.
Histogram2D gamma_histogram(const std::vector<StepDiagnostics>& diags, std::size_t t_bins,
                            std::size_t gamma_bins);

/// Same for the alignment ratio (clamped into [0, 1]; the projection is a
/// contraction so only rounding can push it above 1).
Histogram2D alignment_histogram(const std::vector<StepDiagnostics>& diags, std::size_t t_bins,
                                std::size_t ratio_bins);

/// Smallest candidate time with the maximal score.
double pick_best_time(const std::vector<double>& times, const std::vector<double>& scores);

struct ScheduleStep {
    std::size_t k = 0;
    double t_star = 0.0;
    double best_score = 0.0;
};

struct ScheduleValidationReport {
    std::vector<ScheduleStep> steps;
    std::vector<double> retained;   // 1 - t_star per step
    std::vector<double> reference;  // (k-1)/k per step
    double correlation = 0.0;
    bool degenerate = false;  // either rank series constant
};

/// Correlate the retained contribution implied by empirically chosen
/// operating times with the equal-utility retention ratio.
ScheduleValidationReport make_schedule_report(const std::vector<ScheduleStep>& steps);

void write_sweep_csv(const SweepTable& table, const std::filesystem::path& path);
void write_histogram_csv(const Histogram2D& hist, const std::filesystem::path& path);

}  // namespace odem
