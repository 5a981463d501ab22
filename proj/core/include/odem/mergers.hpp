#pragma once

#include <optional>
#include <string>
#include <vector>

#include "odem/integrator.hpp"
#include "odem/oracle.hpp"
#include "odem/param_vector.hpp"

namespace odem {

enum class MergeMethod { odem, swa, task_arithmetic, ties, opcm_lite };

std::string to_string(MergeMethod m);
MergeMethod merge_method_from_string(const std::string& s);

/// Non-negative per-task utility weights, indexed by arrival position
/// (1-based). Prefix totals are plain left-to-right sums so that repeated
/// evaluation is bit-identical.
class UtilityWeights {
public:
    explicit UtilityWeights(std::vector<double> w);

    std::size_t count() const noexcept { return w_.size(); }
    double weight(std::size_t k) const;        // w_k, 1-based
    double prefix_total(std::size_t k) const;  // W_k = sum_{i<=k} w_i

private:
    std::vector<double> w_;
};

/// Incoming-task utility ratio eta_k = w_k / W_k; k >= 1.
double utility_ratio(const UtilityWeights& weights, std::size_t k);

/// Operating time t_k = w_k / W_k for merge step k >= 2. Equal weights give
/// t_k = 1/k. Identical to utility_ratio by construction.
double schedule_time(const UtilityWeights& weights, std::size_t k);

struct OpcmScale {
    enum class Rule { constant, sqrt_k };
    Rule rule = Rule::sqrt_k;
    double constant = 1.0;

    double value(std::size_t k) const;
};

struct MethodParams {
    double lambda_ta = 1.0;
    double ties_keep_fraction = 0.2;
    double lambda_ties = 1.0;
    OpcmScale opcm_scale;
    std::optional<double> gamma_override;

    void validate() const;
};

/// Deployed model plus the method-specific accumulator state after k merges.
struct MergeState {
    MergeMethod method = MergeMethod::odem;
    ParamVector psi;           // deployed model Psi_k
    std::size_t k = 0;         // number of merged tasks
    double utility_total = 0;  // W_k
    ParamVector acc_update;    // task-vector / projected-update accumulator
    ParamVector psi0;          // shared pre-trained weights
};

/// Step k = 1 for every method: the deployed model is the first task model.
MergeState init_merge(MergeMethod method, const ParamVector& psi1, const ParamVector& psi0, double w1);

/// ODE merge: integrate the rectified field from Psi_{k-1} toward psi_k up
/// to the scheduled operating time and deploy the truncation point. The
/// oracle must be built from the current calibration set. When trajectory_out
/// is non-null the full trajectory (diagnostics included) is stored there.
MergeState odem_step(const MergeState& state, const ParamVector& psi_k, const LossOracle& oracle,
                     const UtilityWeights& weights, const IntegrationConfig& cfg,
                     const MethodParams& params, Trajectory* trajectory_out = nullptr);

/// Recursive weighted average Psi_k = (W_{k-1}/W_k) Psi_{k-1} + (w_k/W_k) psi_k.
MergeState swa_step(const MergeState& state, const ParamVector& psi_k, const UtilityWeights& weights);

/// Task-vector recursion relative to psi0, scaled by lambda_ta. With
/// lambda_ta = 1 this coincides with swa_step on any stream.
MergeState task_arith_step(const MergeState& state, const ParamVector& psi_k,
                           const UtilityWeights& weights, const MethodParams& params);

/// Pairwise trim / sign-elect / disjoint-mean merge. Trim keeps the
/// round(keep_fraction * d) largest-magnitude entries of each input (at
/// least one); ties at the cut go to the lower index. A zero coordinate sum
/// elects sign 0 and the coordinate output is 0.
ParamVector ties_merge_pair(const ParamVector& a, const ParamVector& b, double keep_fraction);

/// Sign-consistent merge of the accumulated update with the incoming task
/// vector, both utility-weighted, applied on top of psi0.
MergeState ties_step(const MergeState& state, const ParamVector& psi_k, const UtilityWeights& weights,
                     const MethodParams& params);

/// Projection-based update: the incoming task vector is rejected against
/// the accumulated update blockwise (whole vector when blocks is empty; a
/// zero accumulator block passes the task vector through), folded into the
/// accumulator by utility ratio, and deployed as psi0 + A_k / lambda_k.
MergeState opcm_lite_step(const MergeState& state, const ParamVector& psi_k,
                          const UtilityWeights& weights, const MethodParams& params,
                          const std::vector<std::size_t>& blocks = {});

}  // namespace odem
