#include "odem/analysis.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "odem/errors.hpp"
#include "odem/mlp.hpp"

namespace odem {

SweepTable trajectory_sweep(const FieldContext& ctx, const ArchDescriptor& arch,
                            const IntegrationConfig& cfg, const std::vector<double>& grid,
                            const std::vector<const SyntheticTask*>& eval_tasks) {
    if (eval_tasks.empty()) {
        throw ArgumentError("trajectory_sweep: no evaluation tasks");
    }
    if (grid.empty()) {
        throw ArgumentError("trajectory_sweep: empty time grid");
    }
    IntegrationConfig sweep_cfg = cfg;
    sweep_cfg.record_grid = grid;
    Trajectory traj = integrate(ctx, 1.0, sweep_cfg);

    SweepTable table;
    for (const SyntheticTask* t : eval_tasks) {
        table.task_ids.push_back(t->id);
    }
    for (const TrajectorySnapshot& snap : traj.snapshots) {
        SweepRow row;
        row.t = snap.t;
        double sum = 0.0;
        for (const SyntheticTask* t : eval_tasks) {
            double a = accuracy(snap.theta, arch, *t);
            row.per_task.push_back(a);
            sum += a;
        }
        row.mean = sum / static_cast<double>(eval_tasks.size());
        table.rows.push_back(std::move(row));
    }
    table.best_t = table.rows.front().t;
    table.best_mean = table.rows.front().mean;
    for (const SweepRow& row : table.rows) {
        if (row.mean > table.best_mean) {
            table.best_mean = row.mean;
            table.best_t = row.t;
        }
    }
    return table;
}

namespace {

Histogram2D histogram_impl(const std::vector<StepDiagnostics>& diags, std::size_t t_bins,
                           std::size_t value_bins, double StepDiagnostics::* field) {
    if (t_bins < 1 || value_bins < 1) {
        throw ArgumentError("histogram: bin counts must be at least 1");
    }
    Histogram2D h;
    h.t_bins = t_bins;
    h.value_bins = value_bins;
    h.counts.assign(t_bins, std::vector<std::uint64_t>(value_bins, 0));
    auto bin_of = [](double v, std::size_t bins) {
        double clamped = std::clamp(v, 0.0, 1.0);
        auto b = static_cast<std::size_t>(clamped * static_cast<double>(bins));
        return std::min(b, bins - 1);
    };
    for (const StepDiagnostics& d : diags) {
        ++h.counts[bin_of(d.t, t_bins)][bin_of(d.*field, value_bins)];
        ++h.total;
    }
    return h;
}

}  // namespace

Histogram2D gamma_histogram(const std::vector<StepDiagnostics>& diags, std::size_t t_bins,
                            std::size_t gamma_bins) {
    return histogram_impl(diags, t_bins, gamma_bins, &StepDiagnostics::gamma);
}

Histogram2D alignment_histogram(const std::vector<StepDiagnostics>& diags, std::size_t t_bins,
                                std::size_t ratio_bins) {
    return histogram_impl(diags, t_bins, ratio_bins, &StepDiagnostics::align_ratio);
}

double pick_best_time(const std::vector<double>& times, const std::vector<double>& scores) {
    if (times.empty() || times.size() != scores.size()) {
        throw ArgumentError("pick_best_time: times and scores must be non-empty and equal length");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (scores[i] > scores[best]) {
            best = i;
        }
    }
    return times[best];
}

ScheduleValidationReport make_schedule_report(const std::vector<ScheduleStep>& steps) {
    if (steps.size() < 2) {
        throw ArgumentError("make_schedule_report: need at least 2 merge steps");
    }
    ScheduleValidationReport report;
    report.steps = steps;
    for (const ScheduleStep& s : steps) {
        report.retained.push_back(1.0 - s.t_star);
        report.reference.push_back(static_cast<double>(s.k - 1) / static_cast<double>(s.k));
    }
    auto constant = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
    };
    report.degenerate = constant(report.retained) || constant(report.reference);
    report.correlation = spearman(report.retained, report.reference);
    return report;
}

void write_sweep_csv(const SweepTable& table, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw FormatError("write_sweep_csv: cannot open " + path.string());
    }
    out << "t";
    for (int id : table.task_ids) {
        out << ",acc_task_" << id;
    }
    out << ",mean\n";
    char buf[64];
    for (const SweepRow& row : table.rows) {
        std::snprintf(buf, sizeof(buf), "%.17g", row.t);
        out << buf;
        for (double a : row.per_task) {
            std::snprintf(buf, sizeof(buf), ",%.17g", a);
            out << buf;
        }
        std::snprintf(buf, sizeof(buf), ",%.17g\n", row.mean);
        out << buf;
    }
}

void write_histogram_csv(const Histogram2D& hist, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw FormatError("write_histogram_csv: cannot open " + path.string());
    }
    out << "t_bin,value_bin,count\n";
    for (std::size_t ti = 0; ti < hist.t_bins; ++ti) {
        for (std::size_t vi = 0; vi < hist.value_bins; ++vi) {
            out << ti << "," << vi << "," << hist.counts[ti][vi] << "\n";
        }
    }
}

}  // namespace odem
