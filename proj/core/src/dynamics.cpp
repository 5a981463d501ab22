#include "odem/dynamics.hpp"

#include <algorithm>
#include <string>

#include "odem/errors.hpp"

namespace odem {

FieldContext::FieldContext(ParamVector theta0, ParamVector theta1, const LossOracle& oracle)
    : theta0_(std::move(theta0)), theta1_(std::move(theta1)), oracle_(&oracle) {
    detail::require_same_size(theta0_, theta1_, "FieldContext");
    loss0_ = oracle_->loss(theta0_);
    loss1_ = oracle_->loss(theta1_);
    loss_gap_ = loss1_ - loss0_;
}

double alpha(double t) {
    if (!(t >= 0.0) || t >= 1.0) {
        throw DomainError("alpha: t = " + std::to_string(t) + " outside [0, 1)");
    }
    return 1.0 / (1.0 - t);
}

ParamVector base_field(const FieldContext& ctx, const ParamVector& theta, double t) {
    double a = alpha(t);
    detail::require_same_size(theta, ctx.theta1(), "base_field");
    ParamVector u(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        u[i] = a * (ctx.theta1()[i] - theta[i]);
    }
    detail::require_finite(u, "base_field");
    return u;
}

double gamma(const FieldContext& ctx, const ParamVector& g, const ParamVector& u) {
    double d = dot(g, u);
    if (d <= 0.0) {
        return 1.0;
    }
    return std::clamp(ctx.loss_gap() / d, 0.0, 1.0);
}

VelocityResult rectified_velocity(const FieldContext& ctx, const ParamVector& theta, double t,
                                  std::optional<double> gamma_override) {
    LossGrad lg = ctx.oracle().loss_and_grad(theta);
    ParamVector u = base_field(ctx, theta, t);
    Projection p = project_onto(u, lg.grad);
    double dot_gu = dot(lg.grad, u);
    double gam = gamma_override ? *gamma_override : gamma(ctx, lg.grad, u);

    // v = u_perp + gamma * u_par
    ParamVector v = axpy(gam, p.parallel, p.orthogonal);

    double u_norm = norm(u);
    StepDiagnostics diag;
    diag.t = t;
    diag.gamma = gam;
    diag.dot_gu = dot_gu;
    diag.align_ratio = u_norm > 0.0 ? norm(p.parallel) / u_norm : 0.0;
    diag.loss = lg.loss;
    return VelocityResult{std::move(v), diag};
}

}  // namespace odem
