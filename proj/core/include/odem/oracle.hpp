#pragma once

#include <variant>
#include <vector>

#include "odem/arch.hpp"
#include "odem/calibration.hpp"
#include "odem/mlp.hpp"
#include "odem/param_vector.hpp"

namespace odem {

/// Closed-form quadratic objective 1/2 (theta - center)' A (theta - center)
/// with A a positive diagonal. Exact loss, gradient and barrier values make
/// it the reference landscape for bound checks.
struct QuadraticLoss {
    ParamVector center;
    std::vector<double> curvature;

    QuadraticLoss(ParamVector center_, std::vector<double> curvature_);

    /// Isotropic special case A = c * I.
    static QuadraticLoss isotropic(ParamVector center_, double c = 1.0);
};

/// Evaluatable objective over the parameter space. Either a classifier loss
/// over a calibration set or a quadratic testbed. Evaluation is a pure
/// function of (mode, theta): repeated calls return identical values.
class LossOracle {
public:
    static LossOracle mlp(ArchDescriptor arch, CalibrationSet calibration);
    static LossOracle quadratic(QuadraticLoss q);

    std::size_t dim() const;
    bool is_mlp() const noexcept;

    double loss(const ParamVector& theta) const;
    ParamVector grad(const ParamVector& theta) const;
    LossGrad loss_and_grad(const ParamVector& theta) const;

    const CalibrationSet& calibration() const;
    const ArchDescriptor& arch() const;

private:
    struct MlpMode {
        ArchDescriptor arch;
        CalibrationSet calibration;
    };
    explicit LossOracle(std::variant<MlpMode, QuadraticLoss> mode) : mode_(std::move(mode)) {}
    std::variant<MlpMode, QuadraticLoss> mode_;
};

/// Central-difference gradient, one coordinate pair of loss calls each.
/// Verification oracle for LossOracle::grad.
ParamVector finite_diff_grad(const LossOracle& oracle, const ParamVector& theta, double eps);

}  // namespace odem
