#include "odem/mergers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "odem/errors.hpp"

namespace odem {

std::string to_string(MergeMethod m) {
    switch (m) {
        case MergeMethod::odem: return "odem";
        case MergeMethod::swa: return "swa";
        case MergeMethod::task_arithmetic: return "ta";
        case MergeMethod::ties: return "ties";
        case MergeMethod::opcm_lite: return "opcm-lite";
    }
    throw ArgumentError("unknown merge method");
}

MergeMethod merge_method_from_string(const std::string& s) {
    if (s == "odem") return MergeMethod::odem;
    if (s == "swa") return MergeMethod::swa;
    if (s == "ta" || s == "task-arithmetic") return MergeMethod::task_arithmetic;
    if (s == "ties") return MergeMethod::ties;
    if (s == "opcm-lite" || s == "opcm") return MergeMethod::opcm_lite;
    throw ArgumentError("unknown merge method: " + s);
}

UtilityWeights::UtilityWeights(std::vector<double> w) : w_(std::move(w)) {
    if (w_.empty()) {
        throw ArgumentError("UtilityWeights: empty weight list");
    }
    for (double x : w_) {
        if (!(x >= 0.0) || !std::isfinite(x)) {
            throw ArgumentError("UtilityWeights: weights must be finite and non-negative");
        }
    }
}

double UtilityWeights::weight(std::size_t k) const {
    if (k < 1 || k > w_.size()) {
        throw ArgumentError("UtilityWeights: index " + std::to_string(k) + " out of range");
    }
    return w_[k - 1];
}

double UtilityWeights::prefix_total(std::size_t k) const {
    if (k < 1 || k > w_.size()) {
        throw ArgumentError("UtilityWeights: prefix index " + std::to_string(k) + " out of range");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        s += w_[i];
    }
    return s;
}

double utility_ratio(const UtilityWeights& weights, std::size_t k) {
    double total = weights.prefix_total(k);
    if (!(total > 0.0)) {
        throw ArgumentError("utility_ratio: accumulated utility is zero at step " + std::to_string(k));
    }
    return weights.weight(k) / total;
}

double schedule_time(const UtilityWeights& weights, std::size_t k) {
    if (k < 2) {
        throw ArgumentError("schedule_time: defined for merge steps k >= 2");
    }
    return utility_ratio(weights, k);
}

double OpcmScale::value(std::size_t k) const {
    switch (rule) {
        case Rule::constant: return constant;
        case Rule::sqrt_k: return std::sqrt(static_cast<double>(k));
    }
    throw ArgumentError("unknown opcm scale rule");
}

void MethodParams::validate() const {
    if (!(lambda_ta > 0.0) || !std::isfinite(lambda_ta)) {
        throw ArgumentError("MethodParams: lambda_ta must be positive and finite");
    }
    if (!(ties_keep_fraction > 0.0) || ties_keep_fraction > 1.0) {
        throw ArgumentError("MethodParams: ties_keep_fraction must lie in (0, 1]");
    }
    if (!(lambda_ties > 0.0) || !std::isfinite(lambda_ties)) {
        throw ArgumentError("MethodParams: lambda_ties must be positive and finite");
    }
    if (!(opcm_scale.constant > 0.0) || !std::isfinite(opcm_scale.constant)) {
        throw ArgumentError("MethodParams: opcm scale constant must be positive and finite");
    }
    if (gamma_override && (!(*gamma_override >= 0.0) || *gamma_override > 1.0)) {
        throw ArgumentError("MethodParams: gamma_override must lie in [0, 1]");
    }
}

namespace {

struct StepRatios {
    double retained;  // W_{k-1} / W_k
    double incoming;  // w_k / W_k
    double w_new;
    double total_new;  // W_k
};

StepRatios advance(const MergeState& state, const UtilityWeights& weights) {
    const std::size_t k_new = state.k + 1;
    const double w_new = weights.weight(k_new);
    const double total_new = state.utility_total + w_new;
    if (!(total_new > 0.0)) {
        throw ArgumentError("merge step: accumulated utility is zero at step " + std::to_string(k_new));
    }
    return StepRatios{state.utility_total / total_new, w_new / total_new, w_new, total_new};
}

}  // namespace

MergeState init_merge(MergeMethod method, const ParamVector& psi1, const ParamVector& psi0, double w1) {
    detail::require_same_size(psi1, psi0, "init_merge");
    if (!(w1 >= 0.0) || !std::isfinite(w1)) {
        throw ArgumentError("init_merge: w1 must be finite and non-negative");
    }
    MergeState s;
    s.method = method;
    s.psi = psi1;
    s.k = 1;
    s.utility_total = w1;
    s.psi0 = psi0;
    // Accumulators that live in task-vector space start at delta_1.
    if (method == MergeMethod::task_arithmetic || method == MergeMethod::ties ||
        method == MergeMethod::opcm_lite) {
        s.acc_update = sub(psi1, psi0);
    }
    return s;
}

MergeState odem_step(const MergeState& state, const ParamVector& psi_k, const LossOracle& oracle,
                     const UtilityWeights& weights, const IntegrationConfig& cfg,
                     const MethodParams& params, Trajectory* trajectory_out) {
    if (state.k < 1) {
        throw ArgumentError("odem_step: state is uninitialized");
    }
    params.validate();
    const std::size_t k_new = state.k + 1;
    const double t_k = schedule_time(weights, k_new);

    FieldContext ctx(state.psi, psi_k, oracle);
    Trajectory traj = params.gamma_override
                          ? integrate_with_gamma_override(ctx, t_k, cfg, *params.gamma_override)
                          : integrate(ctx, t_k, cfg);

    MergeState next = state;
    next.psi = traj.final;
    next.k = k_new;
    next.utility_total = state.utility_total + weights.weight(k_new);
    if (trajectory_out != nullptr) {
        *trajectory_out = std::move(traj);
    }
    return next;
}

MergeState swa_step(const MergeState& state, const ParamVector& psi_k, const UtilityWeights& weights) {
    detail::require_same_size(state.psi, psi_k, "swa_step");
    const StepRatios r = advance(state, weights);
    MergeState next = state;
    next.psi = ParamVector(state.psi.size());
    for (std::size_t i = 0; i < state.psi.size(); ++i) {
        next.psi[i] = r.retained * state.psi[i] + r.incoming * psi_k[i];
    }
    detail::require_finite(next.psi, "swa_step");
    next.k = state.k + 1;
    next.utility_total = r.total_new;
    return next;
}

MergeState task_arith_step(const MergeState& state, const ParamVector& psi_k,
                           const UtilityWeights& weights, const MethodParams& params) {
    detail::require_same_size(state.psi, psi_k, "task_arith_step");
    params.validate();
    const StepRatios r = advance(state, weights);
    const ParamVector delta = sub(psi_k, state.psi0);
    MergeState next = state;
    next.acc_update = ParamVector(delta.size());
    for (std::size_t i = 0; i < delta.size(); ++i) {
        next.acc_update[i] = r.retained * state.acc_update[i] + r.incoming * delta[i];
    }
    next.psi = axpy(params.lambda_ta, next.acc_update, state.psi0);
    next.k = state.k + 1;
    next.utility_total = r.total_new;
    return next;
}

ParamVector ties_merge_pair(const ParamVector& a, const ParamVector& b, double keep_fraction) {
    detail::require_same_size(a, b, "ties_merge_pair");
    if (!(keep_fraction > 0.0) || keep_fraction > 1.0) {
        throw ArgumentError("ties_merge_pair: keep_fraction must lie in (0, 1]");
    }
    const std::size_t d = a.size();
    if (d == 0) {
        return ParamVector();
    }
    const auto keep = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(keep_fraction * static_cast<double>(d))), 1, d);

    auto trim = [&](const ParamVector& v) {
        std::vector<std::size_t> order(d);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
            return std::abs(v[i]) > std::abs(v[j]);
        });
        ParamVector t(d, 0.0);
        for (std::size_t i = 0; i < keep; ++i) {
            t[order[i]] = v[order[i]];
        }
        return t;
    };

    const ParamVector ta = trim(a);
    const ParamVector tb = trim(b);
    ParamVector out(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        const double s = ta[i] + tb[i];
        if (s == 0.0) {
            continue;  // zero-sum election
        }
        const double sign = s > 0.0 ? 1.0 : -1.0;
        double acc = 0.0;
        int n = 0;
        if (ta[i] * sign > 0.0) {
            acc += ta[i];
            ++n;
        }
        if (tb[i] * sign > 0.0) {
            acc += tb[i];
            ++n;
        }
        out[i] = n > 0 ? acc / n : 0.0;
    }
    return out;
}

MergeState ties_step(const MergeState& state, const ParamVector& psi_k, const UtilityWeights& weights,
                     const MethodParams& params) {
    detail::require_same_size(state.psi, psi_k, "ties_step");
    params.validate();
    const StepRatios r = advance(state, weights);
    const ParamVector acc_prev = sub(state.psi, state.psi0);
    const ParamVector delta = sub(psi_k, state.psi0);
    const ParamVector merged =
        ties_merge_pair(scale(r.retained, acc_prev), scale(r.incoming, delta), params.ties_keep_fraction);
    MergeState next = state;
    next.psi = axpy(params.lambda_ties, merged, state.psi0);
    next.acc_update = sub(next.psi, state.psi0);
    next.k = state.k + 1;
    next.utility_total = r.total_new;
    return next;
}

MergeState opcm_lite_step(const MergeState& state, const ParamVector& psi_k,
                          const UtilityWeights& weights, const MethodParams& params,
                          const std::vector<std::size_t>& blocks) {
    detail::require_same_size(state.psi, psi_k, "opcm_lite_step");
    params.validate();
    const StepRatios r = advance(state, weights);
    const std::size_t k_new = state.k + 1;
    const ParamVector delta = sub(psi_k, state.psi0);

    std::vector<std::size_t> spans = blocks;
    if (spans.empty()) {
        spans.push_back(delta.size());
    }
    std::size_t total = std::accumulate(spans.begin(), spans.end(), std::size_t{0});
    if (total != delta.size()) {
        throw DimensionError("opcm_lite_step: block sizes do not sum to the parameter count");
    }

    // Blockwise rejection of the incoming task vector against the
    // accumulated update; blocks with a zero accumulator pass through.
    ParamVector projected = delta;
    std::size_t off = 0;
    for (std::size_t span : spans) {
        double da = 0.0;
        double aa = 0.0;
        for (std::size_t i = off; i < off + span; ++i) {
            da += delta[i] * state.acc_update[i];
            aa += state.acc_update[i] * state.acc_update[i];
        }
        if (aa > 0.0) {
            const double coef = da / aa;
            for (std::size_t i = off; i < off + span; ++i) {
                projected[i] = delta[i] - coef * state.acc_update[i];
            }
        }
        off += span;
    }
    detail::require_finite(projected, "opcm_lite_step");

    MergeState next = state;
    next.acc_update = ParamVector(delta.size());
    for (std::size_t i = 0; i < delta.size(); ++i) {
        next.acc_update[i] = r.retained * state.acc_update[i] + r.incoming * projected[i];
    }
    next.psi = axpy(1.0 / params.opcm_scale.value(k_new), next.acc_update, state.psi0);
    next.k = k_new;
    next.utility_total = r.total_new;
    return next;
}

}  // namespace odem
