#pragma once

#include <cstddef>

#include "odem/checkpoint.hpp"
#include "odem/task.hpp"

namespace odem {

/// Full-batch gradient descent on the task's train split, starting from
/// init. Deterministic in (task, init, steps, lr). Throws TrainingError with
/// the step index if the loss becomes non-finite.
Checkpoint train_task_model(const SyntheticTask& task, const ArchDescriptor& arch,
                            const Checkpoint& init, std::size_t steps, double lr);

}  // namespace odem
