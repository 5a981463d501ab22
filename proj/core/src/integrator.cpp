#include "odem/integrator.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "odem/errors.hpp"

namespace odem {

namespace {

constexpr double kTimeEps = 1e-9;

void capture_segment(Trajectory& traj, const std::vector<double>& grid, std::size_t& gi, double t_lo,
                     double t_hi, const ParamVector& theta_lo, const ParamVector& theta_hi) {
    while (gi < grid.size() && grid[gi] <= t_hi + 1e-12) {
        const double s = grid[gi];
        const double span = t_hi - t_lo;
        const double mu = span > 0.0 ? (s - t_lo) / span : 1.0;
        if (mu >= 1.0 - kTimeEps) {
            traj.snapshots.push_back({s, theta_hi});
        } else if (mu <= kTimeEps) {
            traj.snapshots.push_back({s, theta_lo});
        } else {
            traj.snapshots.push_back({s, lerp(theta_lo, theta_hi, mu)});
        }
        ++gi;
    }
}

Trajectory integrate_impl(const FieldContext& ctx, double t_target, const IntegrationConfig& cfg,
                          std::optional<double> gamma_override) {
    cfg.validate();
    if (!(t_target > 0.0) || t_target > 1.0) {
        throw ArgumentError("integrate: t_target must lie in (0, 1]");
    }
    const double h = cfg.step_size;
    const bool to_endpoint = (t_target == 1.0);
    const double t_stop = to_endpoint ? 1.0 - h : t_target;

    Trajectory traj;
    ParamVector theta = ctx.theta0();
    std::size_t gi = 0;
    while (gi < cfg.record_grid.size() && cfg.record_grid[gi] <= 0.0) {
        traj.snapshots.push_back({0.0, theta});
        ++gi;
    }

    const std::size_t n_full = static_cast<std::size_t>(std::floor(t_stop / h + kTimeEps));
    const double remainder = t_stop - static_cast<double>(n_full) * h;
    const bool has_partial = remainder > kTimeEps;
    const std::size_t n_steps = n_full + (has_partial ? 1 : 0);

    for (std::size_t i = 0; i < n_steps; ++i) {
        const bool partial = (i == n_full);
        const double t_i = static_cast<double>(i) * h;
        const double step = partial ? remainder : h;
        // The last segment ends exactly at t_stop regardless of rounding in i*h.
        const double t_next = (i + 1 == n_steps) ? t_stop : static_cast<double>(i + 1) * h;
        if (t_i >= 1.0) {
            throw DomainError("integrate: step would evaluate the scheduler at t >= 1");
        }
        VelocityResult vr = rectified_velocity(ctx, theta, t_i, gamma_override);
        traj.diagnostics.push_back(vr.diag);
        ParamVector theta_next;
        try {
            theta_next = axpy(step, vr.v, theta);
        } catch (const NumericError& e) {
            throw NumericError("integrate: non-finite state after step " + std::to_string(i) + " (" +
                               e.what() + ")");
        }
        capture_segment(traj, cfg.record_grid, gi, t_i, t_next, theta, theta_next);
        theta = std::move(theta_next);
    }

    if (to_endpoint) {
        // Terminal segment [1-h, 1]: the endpoint is assigned exactly.
        capture_segment(traj, cfg.record_grid, gi, t_stop, 1.0, theta, ctx.theta1());
        traj.final = ctx.theta1();
        traj.final_t = 1.0;
    } else {
        traj.final = std::move(theta);
        traj.final_t = t_target;
    }
    return traj;
}

}  // namespace

void IntegrationConfig::validate() const {
    if (!(step_size > 0.0) || step_size > 0.5) {
        throw ArgumentError("IntegrationConfig: step_size must lie in (0, 0.5]");
    }
    double prev = -1.0;
    for (double t : record_grid) {
        if (!(t >= 0.0) || t > 1.0) {
            throw ArgumentError("IntegrationConfig: record_grid times must lie in [0, 1]");
        }
        if (t <= prev) {
            throw ArgumentError("IntegrationConfig: record_grid must be strictly ascending");
        }
        prev = t;
    }
}

double Trajectory::max_alignment_ratio() const {
    double m = 0.0;
    for (const StepDiagnostics& d : diagnostics) {
        m = std::max(m, d.align_ratio);
    }
    return m;
}

Trajectory integrate(const FieldContext& ctx, double t_target, const IntegrationConfig& cfg) {
    return integrate_impl(ctx, t_target, cfg, std::nullopt);
}

Trajectory integrate_with_gamma_override(const FieldContext& ctx, double t_target,
                                         const IntegrationConfig& cfg, double gamma_fixed) {
    if (!(gamma_fixed >= 0.0) || gamma_fixed > 1.0) {
        throw ArgumentError("integrate_with_gamma_override: gamma must lie in [0, 1]");
    }
    return integrate_impl(ctx, t_target, cfg, gamma_fixed);
}

void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw FormatError("write_trajectory_csv: cannot open " + path.string());
    }
    out << "t,loss,gamma,dot_gu,align_ratio\n";
    char buf[512];
    for (const StepDiagnostics& d : traj.diagnostics) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", d.t, d.loss, d.gamma,
                      d.dot_gu, d.align_ratio);
        out << buf;
    }
}

std::vector<double> uniform_grid(std::size_t n) {
    if (n < 2) {
        throw ArgumentError("uniform_grid: need at least 2 points");
    }
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return g;
}

}  // namespace odem
