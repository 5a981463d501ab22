#pragma once

#include <cstddef>
#include <vector>

#include "odem/integrator.hpp"
#include "odem/mergers.hpp"
#include "odem/oracle.hpp"

namespace odem {

/// Lower-triangular record a[k][i] (1-based, i <= k) of per-task performance
/// after each merge step. Row k is appended at step k, so the diagonal entry
/// a[i][i] is measured before any later merge.
class AccuracyMatrix {
public:
    /// Row for step k must have exactly k entries, all within [0, 1].
    void append_row(std::vector<double> row);

    double at(std::size_t k, std::size_t i) const;
    std::size_t steps() const noexcept { return rows_.size(); }
    const std::vector<std::vector<double>>& rows() const noexcept { return rows_; }

private:
    std::vector<std::vector<double>> rows_;
};

/// Utility-weighted average performance over the first k tasks.
double acc_w(const AccuracyMatrix& m, std::size_t k, const UtilityWeights& weights);

/// Utility-weighted backward transfer over the first k-1 tasks; k >= 2.
double bwt_w(const AccuracyMatrix& m, std::size_t k, const UtilityWeights& weights);

/// Maximum excess of the loss along the straight line between the endpoints
/// over the linear interpolation of the endpoint losses, on a uniform grid
/// of grid_n points including both endpoints (grid_n >= 3).
double loss_barrier_linear(const LossOracle& oracle, const ParamVector& theta0,
                           const ParamVector& theta1, std::size_t grid_n);

/// Same excess measured on a recorded trajectory. The trajectory must span
/// [0, 1]: snapshots at t = 0 and t = 1 are required and at least one
/// interior snapshot must exist.
double loss_barrier(const LossOracle& oracle, const Trajectory& traj);

/// Spearman rank correlation with average ranks for ties. Series of equal
/// length n >= 2; a series with zero rank variance yields 0 (the correlation
/// is undefined there; callers that care flag it separately).
double spearman(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace odem
