#pragma once

#include <optional>

#include "odem/oracle.hpp"
#include "odem/param_vector.hpp"

namespace odem {

/// Per-step record of the rectification state: time, damping factor, the
/// gradient/velocity inner product, the fraction of the base velocity that
/// lies along the gradient, and the loss at the evaluation point.
struct StepDiagnostics {
    double t = 0.0;
    double gamma = 1.0;
    double dot_gu = 0.0;
    double align_ratio = 0.0;
    double loss = 0.0;
};

/// Endpoints of one merge transition plus the objective used to steer it.
/// The endpoint loss gap is computed once at construction; both endpoints
/// and the objective are fixed for the lifetime of the context, so the gap
/// is constant and reused at every step.
class FieldContext {
public:
    FieldContext(ParamVector theta0, ParamVector theta1, const LossOracle& oracle);

    const ParamVector& theta0() const noexcept { return theta0_; }
    const ParamVector& theta1() const noexcept { return theta1_; }
    const LossOracle& oracle() const noexcept { return *oracle_; }

    /// loss(theta1) - loss(theta0).
    double loss_gap() const noexcept { return loss_gap_; }
    double loss_at_start() const noexcept { return loss0_; }
    double loss_at_target() const noexcept { return loss1_; }

    std::size_t dim() const noexcept { return theta0_.size(); }

private:
    ParamVector theta0_;
    ParamVector theta1_;
    const LossOracle* oracle_;
    double loss0_;
    double loss1_;
    double loss_gap_;
};

/// Velocity scheduler 1/(1-t); keeps the transport speed constant on the
/// straight-line trajectory. Defined on [0, 1) only.
double alpha(double t);

/// Base transport field alpha(t) * (theta1 - theta).
ParamVector base_field(const FieldContext& ctx, const ParamVector& theta, double t);

/// Adaptive damping factor for the gradient-aligned velocity component:
/// 1 when <g,u> <= 0 (moving toward the target does not increase the loss),
/// clip(loss_gap / <g,u>, 0, 1) otherwise. Always in [0, 1].
double gamma(const FieldContext& ctx, const ParamVector& g, const ParamVector& u);

struct VelocityResult {
    ParamVector v;
    StepDiagnostics diag;
};

/// Rectified velocity v = u_perp + gamma * u_par, where (u_par, u_perp) is
/// the decomposition of the base field against the loss gradient at theta.
/// When gamma_override is set the damping factor is held at that value.
VelocityResult rectified_velocity(const FieldContext& ctx, const ParamVector& theta, double t,
                                  std::optional<double> gamma_override = std::nullopt);

}  // namespace odem
