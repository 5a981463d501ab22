#include "odem/mlp.hpp"

#include <cmath>
#include <vector>

#include "odem/errors.hpp"
#include "odem/rng.hpp"

namespace odem {

namespace {

struct Layout {
    std::vector<std::size_t> dims;        // [input, hidden..., classes]
    std::vector<std::size_t> w_offsets;   // per layer
    std::vector<std::size_t> b_offsets;
    std::size_t param_count = 0;

    explicit Layout(const ArchDescriptor& arch) {
        dims = arch.layer_dims();
        std::size_t off = 0;
        for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
            w_offsets.push_back(off);
            off += dims[l + 1] * dims[l];
            b_offsets.push_back(off);
            off += dims[l + 1];
        }
        param_count = off;
    }

    std::size_t layers() const noexcept { return dims.size() - 1; }
};

void require_param_size(const Layout& lo, const ParamVector& params) {
    if (params.size() != lo.param_count) {
        throw DimensionError("mlp: parameter vector length " + std::to_string(params.size()) +
                             " does not match architecture (" + std::to_string(lo.param_count) + ")");
    }
}

double activate(Activation act, double z) {
    return act == Activation::tanh ? std::tanh(z) : (z > 0.0 ? z : 0.0);
}

// Derivative expressed through the activation output.
double activate_grad(Activation act, double a) {
    return act == Activation::tanh ? 1.0 - a * a : (a > 0.0 ? 1.0 : 0.0);
}

// Forward pass; fills acts[l] with the output of layer l (acts[0] = input).
void forward(const Layout& lo, Activation act, const ParamVector& params, const double* input,
             std::vector<std::vector<double>>& acts) {
    acts[0].assign(input, input + lo.dims[0]);
    for (std::size_t l = 0; l < lo.layers(); ++l) {
        const std::size_t in = lo.dims[l];
        const std::size_t out = lo.dims[l + 1];
        const double* w = params.data() + lo.w_offsets[l];
        const double* b = params.data() + lo.b_offsets[l];
        const bool last = (l + 1 == lo.layers());
        acts[l + 1].resize(out);
        for (std::size_t r = 0; r < out; ++r) {
            double z = b[r];
            const double* wr = w + r * in;
            for (std::size_t c = 0; c < in; ++c) {
                z += wr[c] * acts[l][c];
            }
            acts[l + 1][r] = last ? z : activate(act, z);
        }
    }
}

// Cross-entropy of the logits against the label; optionally overwrites the
// logits buffer with softmax probabilities for the backward pass.
double cross_entropy(std::vector<double>& logits, int label, bool to_probs) {
    double m = logits[0];
    for (double z : logits) {
        m = std::max(m, z);
    }
    double sum = 0.0;
    for (double z : logits) {
        sum += std::exp(z - m);
    }
    double lse = m + std::log(sum);
    double loss = lse - logits[static_cast<std::size_t>(label)];
    if (to_probs) {
        for (double& z : logits) {
            z = std::exp(z - lse);
        }
    }
    return loss;
}

void check_label(int label, std::size_t class_count) {
    if (label < 0 || static_cast<std::size_t>(label) >= class_count) {
        throw ArgumentError("mlp: label " + std::to_string(label) + " outside [0, " +
                            std::to_string(class_count) + ")");
    }
}

}  // namespace

ParamVector init_mlp_params(const ArchDescriptor& arch, std::uint64_t seed) {
    Layout lo(arch);
    Rng rng(seed);
    ParamVector params(lo.param_count, 0.0);
    for (std::size_t l = 0; l < lo.layers(); ++l) {
        const std::size_t in = lo.dims[l];
        const std::size_t out = lo.dims[l + 1];
        double r = std::sqrt(6.0 / static_cast<double>(in + out));
        double* w = params.data() + lo.w_offsets[l];
        for (std::size_t i = 0; i < out * in; ++i) {
            w[i] = rng.uniform(-r, r);
        }
        // biases stay zero
    }
    return params;
}

Checkpoint init_checkpoint(const ArchDescriptor& arch, std::uint64_t seed, std::string label) {
    return Checkpoint{arch, init_mlp_params(arch, seed), std::move(label), seed};
}

double mlp_loss(const ArchDescriptor& arch, const ParamVector& params, std::span<const Sample> samples) {
    Layout lo(arch);
    require_param_size(lo, params);
    if (samples.empty()) {
        throw ArgumentError("mlp_loss: empty sample set");
    }
    std::vector<std::vector<double>> acts(lo.dims.size());
    double total = 0.0;
    for (const Sample& s : samples) {
        check_label(s.label, lo.dims.back());
        forward(lo, arch.activation(), params, s.x.data(), acts);
        total += cross_entropy(acts.back(), s.label, false);
    }
    double mean = total / static_cast<double>(samples.size());
    if (!std::isfinite(mean)) {
        throw NumericError("mlp_loss: non-finite loss");
    }
    return mean;
}

LossGrad mlp_loss_and_grad(const ArchDescriptor& arch, const ParamVector& params,
                           std::span<const Sample> samples) {
    Layout lo(arch);
    require_param_size(lo, params);
    if (samples.empty()) {
        throw ArgumentError("mlp_loss_and_grad: empty sample set");
    }
    const Activation act = arch.activation();
    std::vector<std::vector<double>> acts(lo.dims.size());
    std::vector<double> delta;
    std::vector<double> delta_prev;
    ParamVector grad(lo.param_count, 0.0);
    double total = 0.0;

    for (const Sample& s : samples) {
        check_label(s.label, lo.dims.back());
        forward(lo, act, params, s.x.data(), acts);
        total += cross_entropy(acts.back(), s.label, true);

        // acts.back() now holds softmax probabilities.
        delta = acts.back();
        delta[static_cast<std::size_t>(s.label)] -= 1.0;

        for (std::size_t l = lo.layers(); l-- > 0;) {
            const std::size_t in = lo.dims[l];
            const std::size_t out = lo.dims[l + 1];
            const double* w = params.data() + lo.w_offsets[l];
            double* gw = grad.data() + lo.w_offsets[l];
            double* gb = grad.data() + lo.b_offsets[l];
            for (std::size_t r = 0; r < out; ++r) {
                const double d = delta[r];
                gb[r] += d;
                double* gwr = gw + r * in;
                for (std::size_t c = 0; c < in; ++c) {
                    gwr[c] += d * acts[l][c];
                }
            }
            if (l > 0) {
                delta_prev.assign(in, 0.0);
                for (std::size_t r = 0; r < out; ++r) {
                    const double d = delta[r];
                    const double* wr = w + r * in;
                    for (std::size_t c = 0; c < in; ++c) {
                        delta_prev[c] += wr[c] * d;
                    }
                }
                for (std::size_t c = 0; c < in; ++c) {
                    delta_prev[c] *= activate_grad(act, acts[l][c]);
                }
                std::swap(delta, delta_prev);
            }
        }
    }

    const double inv_n = 1.0 / static_cast<double>(samples.size());
    for (std::size_t i = 0; i < grad.size(); ++i) {
        grad[i] *= inv_n;
    }
    double mean = total * inv_n;
    if (!std::isfinite(mean)) {
        throw NumericError("mlp_loss_and_grad: non-finite loss");
    }
    detail::require_finite(grad, "mlp_loss_and_grad");
    return LossGrad{mean, std::move(grad)};
}

int mlp_predict(const ArchDescriptor& arch, const ParamVector& params, const double* input) {
    Layout lo(arch);
    require_param_size(lo, params);
    std::vector<std::vector<double>> acts(lo.dims.size());
    forward(lo, arch.activation(), params, input, acts);
    const auto& logits = acts.back();
    int best = 0;
    for (std::size_t c = 1; c < logits.size(); ++c) {
        if (logits[c] > logits[static_cast<std::size_t>(best)]) {
            best = static_cast<int>(c);
        }
    }
    return best;
}

double accuracy_on(const ParamVector& params, const ArchDescriptor& arch, std::span<const Sample> samples) {
    if (samples.empty()) {
        return 0.0;
    }
    Layout lo(arch);
    require_param_size(lo, params);
    std::vector<std::vector<double>> acts(lo.dims.size());
    std::size_t correct = 0;
    for (const Sample& s : samples) {
        forward(lo, arch.activation(), params, s.x.data(), acts);
        const auto& logits = acts.back();
        std::size_t best = 0;
        for (std::size_t c = 1; c < logits.size(); ++c) {
            if (logits[c] > logits[best]) {
                best = c;
            }
        }
        if (static_cast<int>(best) == s.label) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(samples.size());
}

double accuracy(const ParamVector& params, const ArchDescriptor& arch, const SyntheticTask& task) {
    return accuracy_on(params, arch, std::span<const Sample>(task.test));
}

}  // namespace odem
