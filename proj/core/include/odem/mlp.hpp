#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "odem/arch.hpp"
#include "odem/checkpoint.hpp"
#include "odem/param_vector.hpp"
#include "odem/task.hpp"

namespace odem {

struct LossGrad {
    double loss = 0.0;
    ParamVector grad;
};

/// Xavier-uniform weights, zero biases; deterministic in seed.
ParamVector init_mlp_params(const ArchDescriptor& arch, std::uint64_t seed);

Checkpoint init_checkpoint(const ArchDescriptor& arch, std::uint64_t seed, std::string label);

/// Mean softmax cross-entropy over the samples. Summation is sequential in
/// sample order so results are bit-deterministic.
double mlp_loss(const ArchDescriptor& arch, const ParamVector& params, std::span<const Sample> samples);

/// Mean cross-entropy and its exact gradient (reverse-mode, hand-written).
LossGrad mlp_loss_and_grad(const ArchDescriptor& arch, const ParamVector& params,
                           std::span<const Sample> samples);

/// Argmax class prediction for one input; ties resolve to the lowest index.
int mlp_predict(const ArchDescriptor& arch, const ParamVector& params, const double* input);

/// Fraction of correct predictions over the given samples.
double accuracy_on(const ParamVector& params, const ArchDescriptor& arch, std::span<const Sample> samples);

/// Fraction of correct predictions on the task's test split.
double accuracy(const ParamVector& params, const ArchDescriptor& arch, const SyntheticTask& task);

}  // namespace odem
