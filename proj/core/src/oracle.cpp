#include "odem/oracle.hpp"

#include <cmath>

#include "odem/errors.hpp"

namespace odem {

QuadraticLoss::QuadraticLoss(ParamVector center_, std::vector<double> curvature_)
    : center(std::move(center_)), curvature(std::move(curvature_)) {
    if (center.size() != curvature.size()) {
        throw DimensionError("QuadraticLoss: center and curvature lengths differ");
    }
    for (double c : curvature) {
        if (!(c > 0.0) || !std::isfinite(c)) {
            throw ArgumentError("QuadraticLoss: curvature entries must be positive and finite");
        }
    }
}

QuadraticLoss QuadraticLoss::isotropic(ParamVector center_, double c) {
    std::vector<double> curv(center_.size(), c);
    return QuadraticLoss(std::move(center_), std::move(curv));
}

LossOracle LossOracle::mlp(ArchDescriptor arch, CalibrationSet calibration) {
    if (calibration.size() == 0) {
        throw ArgumentError("LossOracle::mlp: empty calibration set");
    }
    return LossOracle(MlpMode{std::move(arch), std::move(calibration)});
}

LossOracle LossOracle::quadratic(QuadraticLoss q) { return LossOracle(std::move(q)); }

std::size_t LossOracle::dim() const {
    if (const auto* m = std::get_if<MlpMode>(&mode_)) {
        return m->arch.param_count();
    }
    return std::get<QuadraticLoss>(mode_).center.size();
}

bool LossOracle::is_mlp() const noexcept { return std::holds_alternative<MlpMode>(mode_); }

double LossOracle::loss(const ParamVector& theta) const {
    if (const auto* m = std::get_if<MlpMode>(&mode_)) {
        return mlp_loss(m->arch, theta, std::span<const Sample>(m->calibration.samples()));
    }
    const auto& q = std::get<QuadraticLoss>(mode_);
    detail::require_same_size(theta, q.center, "quadratic loss");
    double s = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        double d = theta[i] - q.center[i];
        s += q.curvature[i] * d * d;
    }
    double value = 0.5 * s;
    if (!std::isfinite(value)) {
        throw NumericError("quadratic loss: non-finite value");
    }
    return value;
}

ParamVector LossOracle::grad(const ParamVector& theta) const {
    if (const auto* m = std::get_if<MlpMode>(&mode_)) {
        return mlp_loss_and_grad(m->arch, theta, std::span<const Sample>(m->calibration.samples())).grad;
    }
    const auto& q = std::get<QuadraticLoss>(mode_);
    detail::require_same_size(theta, q.center, "quadratic grad");
    ParamVector g(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        g[i] = q.curvature[i] * (theta[i] - q.center[i]);
    }
    detail::require_finite(g, "quadratic grad");
    return g;
}

LossGrad LossOracle::loss_and_grad(const ParamVector& theta) const {
    if (const auto* m = std::get_if<MlpMode>(&mode_)) {
        return mlp_loss_and_grad(m->arch, theta, std::span<const Sample>(m->calibration.samples()));
    }
    return LossGrad{loss(theta), grad(theta)};
}

const CalibrationSet& LossOracle::calibration() const {
    if (const auto* m = std::get_if<MlpMode>(&mode_)) {
        return m->calibration;
    }
    throw ArgumentError("LossOracle: quadratic mode has no calibration set");
}

const ArchDescriptor& LossOracle::arch() const {
    if (const auto* m = std::get_if<MlpMode>(&mode_)) {
        return m->arch;
    }
    throw ArgumentError("LossOracle: quadratic mode has no architecture");
}

ParamVector finite_diff_grad(const LossOracle& oracle, const ParamVector& theta, double eps) {
    if (!(eps > 0.0)) {
        throw ArgumentError("finite_diff_grad: eps must be positive");
    }
    ParamVector probe = theta;
    ParamVector g(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double original = probe[i];
        probe[i] = original + eps;
        double hi = oracle.loss(probe);
        probe[i] = original - eps;
        double lo = oracle.loss(probe);
        probe[i] = original;
        g[i] = (hi - lo) / (2.0 * eps);
    }
    detail::require_finite(g, "finite_diff_grad");
    return g;
}

}  // namespace odem
