#include "odem/train.hpp"

#include <cmath>
#include <string>

#include "odem/errors.hpp"
#include "odem/mlp.hpp"

namespace odem {

Checkpoint train_task_model(const SyntheticTask& task, const ArchDescriptor& arch,
                            const Checkpoint& init, std::size_t steps, double lr) {
    if (steps < 1) {
        throw ArgumentError("train_task_model: steps must be at least 1");
    }
    if (!(arch == init.arch)) {
        throw DimensionError("train_task_model: init checkpoint does not match arch");
    }
    if (init.params.size() != arch.param_count()) {
        throw DimensionError("train_task_model: init params length does not match arch");
    }
    ParamVector theta = init.params;
    std::span<const Sample> train(task.train);
    for (std::size_t s = 0; s < steps; ++s) {
        LossGrad lg;
        try {
            lg = mlp_loss_and_grad(arch, theta, train);
        } catch (const NumericError&) {
            throw TrainingError("train_task_model: loss diverged at step " + std::to_string(s),
                                static_cast<long>(s));
        }
        if (!std::isfinite(lg.loss)) {
            throw TrainingError("train_task_model: loss diverged at step " + std::to_string(s),
                                static_cast<long>(s));
        }
        theta = axpy(-lr, lg.grad, theta);
    }
    return Checkpoint{arch, std::move(theta), "task-" + std::to_string(task.id), task.generator_seed};
}

}  // namespace odem
