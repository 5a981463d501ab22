#include "odem/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "odem/errors.hpp"

namespace odem {

void AccuracyMatrix::append_row(std::vector<double> row) {
    if (row.size() != rows_.size() + 1) {
        throw DimensionError("AccuracyMatrix: row for step " + std::to_string(rows_.size() + 1) +
                             " must have " + std::to_string(rows_.size() + 1) + " entries");
    }
    for (double v : row) {
        if (!(v >= 0.0) || v > 1.0) {
            throw ArgumentError("AccuracyMatrix: entries must lie in [0, 1]");
        }
    }
    rows_.push_back(std::move(row));
}

double AccuracyMatrix::at(std::size_t k, std::size_t i) const {
    if (k < 1 || k > rows_.size() || i < 1 || i > k) {
        throw ArgumentError("AccuracyMatrix: index (" + std::to_string(k) + ", " + std::to_string(i) +
                            ") outside the lower triangle");
    }
    return rows_[k - 1][i - 1];
}

double acc_w(const AccuracyMatrix& m, std::size_t k, const UtilityWeights& weights) {
    if (k < 1 || k > m.steps()) {
        throw ArgumentError("acc_w: step " + std::to_string(k) + " out of range");
    }
    double total = 0.0;
    double acc = 0.0;
    for (std::size_t i = 1; i <= k; ++i) {
        total += weights.weight(i);
        acc += weights.weight(i) * m.at(k, i);
    }
    if (!(total > 0.0)) {
        throw ArgumentError("acc_w: weight sum over seen tasks is zero");
    }
    return acc / total;
}

double bwt_w(const AccuracyMatrix& m, std::size_t k, const UtilityWeights& weights) {
    if (k < 2) {
        throw ArgumentError("bwt_w: needs at least one prior task (k >= 2)");
    }
    if (k > m.steps()) {
        throw ArgumentError("bwt_w: step " + std::to_string(k) + " out of range");
    }
    double total = 0.0;
    double acc = 0.0;
    for (std::size_t i = 1; i <= k - 1; ++i) {
        total += weights.weight(i);
        acc += weights.weight(i) * (m.at(k, i) - m.at(i, i));
    }
    if (!(total > 0.0)) {
        throw ArgumentError("bwt_w: weight sum over prior tasks is zero");
    }
    return acc / total;
}

double loss_barrier_linear(const LossOracle& oracle, const ParamVector& theta0,
                           const ParamVector& theta1, std::size_t grid_n) {
    if (grid_n < 3) {
        throw ArgumentError("loss_barrier_linear: grid_n must be at least 3");
    }
    detail::require_same_size(theta0, theta1, "loss_barrier_linear");
    const double l0 = oracle.loss(theta0);
    const double l1 = oracle.loss(theta1);
    double barrier = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid_n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(grid_n - 1);
        const double excess = oracle.loss(lerp(theta0, theta1, t)) - (t * l1 + (1.0 - t) * l0);
        barrier = std::max(barrier, excess);
    }
    return barrier;
}

double loss_barrier(const LossOracle& oracle, const Trajectory& traj) {
    if (traj.snapshots.size() < 3) {
        throw ArgumentError("loss_barrier: trajectory needs at least 3 snapshots");
    }
    if (traj.snapshots.front().t != 0.0 || traj.snapshots.back().t != 1.0) {
        throw ArgumentError("loss_barrier: trajectory snapshots must span [0, 1]");
    }
    const double l0 = oracle.loss(traj.snapshots.front().theta);
    const double l1 = oracle.loss(traj.snapshots.back().theta);
    double barrier = -std::numeric_limits<double>::infinity();
    for (const TrajectorySnapshot& s : traj.snapshots) {
        const double excess = oracle.loss(s.theta) - (s.t * l1 + (1.0 - s.t) * l0);
        barrier = std::max(barrier, excess);
    }
    return barrier;
}

namespace {

// Ranks with average values for ties.
std::vector<double> ranks_of(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return x[i] < x[j]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[order[j + 1]] == x[order[i]]) {
            ++j;
        }
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t m = i; m <= j; ++m) {
            ranks[order[m]] = avg;
        }
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) {
        throw ArgumentError("spearman: series lengths differ");
    }
    if (x.size() < 2) {
        throw ArgumentError("spearman: need at least 2 observations");
    }
    const std::vector<double> rx = ranks_of(x);
    const std::vector<double> ry = ranks_of(y);
    const double n = static_cast<double>(x.size());
    const double mean = (n + 1.0) / 2.0;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = rx[i] - mean;
        const double dy = ry[i] - mean;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        return 0.0;  // constant ranks: correlation undefined
    }
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace odem
