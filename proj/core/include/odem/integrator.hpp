#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "odem/dynamics.hpp"

namespace odem {

struct IntegrationConfig {
    /// Euler step size; must satisfy 0 < h <= 0.5.
    double step_size = 0.05;
    /// Times in [0, 1] at which to snapshot the state, strictly ascending.
    /// Times beyond the requested target are skipped.
    std::vector<double> record_grid;

    void validate() const;
};

struct TrajectorySnapshot {
    double t = 0.0;
    ParamVector theta;
};

struct Trajectory {
    std::vector<TrajectorySnapshot> snapshots;
    std::vector<StepDiagnostics> diagnostics;
    ParamVector final;
    double final_t = 0.0;

    /// Largest recorded alignment ratio; 0 when no steps were taken.
    double max_alignment_ratio() const;
};

/// Integrate the rectified field from theta0 toward theta1 with explicit
/// Euler steps of size h; a shorter final step lands exactly on t_target.
///
/// A request for t_target = 1 integrates to t = 1 - h and then assigns the
/// target endpoint exactly (on the base field that closing step reproduces
/// the assignment, and the scheduler is singular at t = 1).
///
/// Snapshots are deep copies, linearly interpolated between the two states
/// bracketing each grid time.
Trajectory integrate(const FieldContext& ctx, double t_target, const IntegrationConfig& cfg);

/// Same, with the damping factor pinned to gamma_fixed. Isolates the base
/// transport from rectification; gamma_fixed = 1 reproduces straight-line
/// interpolation up to rounding.
Trajectory integrate_with_gamma_override(const FieldContext& ctx, double t_target,
                                         const IntegrationConfig& cfg, double gamma_fixed);

/// Per-step CSV: t,loss,gamma,dot_gu,align_ratio.
void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path);

/// n uniform times spanning [0, 1] inclusive; n >= 2.
std::vector<double> uniform_grid(std::size_t n);

}  // namespace odem
