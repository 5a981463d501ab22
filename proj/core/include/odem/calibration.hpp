#pragma once

#include <cstdint>
#include <vector>

#include "odem/task.hpp"

namespace odem {

/// A fixed pool of labeled examples drawn from the tasks presented so far,
/// used to evaluate the loss and its gradient during a merge.
class CalibrationSet {
public:
    CalibrationSet(std::vector<Sample> samples, std::vector<int> source_task_ids, std::size_t capacity);

    const std::vector<Sample>& samples() const noexcept { return samples_; }
    const std::vector<int>& source_task_ids() const noexcept { return source_task_ids_; }
    std::size_t size() const noexcept { return samples_.size(); }
    std::size_t capacity() const noexcept { return capacity_; }

private:
    std::vector<Sample> samples_;
    std::vector<int> source_task_ids_;
    std::size_t capacity_;
};

/// Assemble a calibration set with an equal share floor(capacity / n) per
/// task, remainder going to the earliest tasks. Shares are drawn without
/// replacement from each task's train split (whole split when smaller).
CalibrationSet build_calibration(const std::vector<SyntheticTask>& tasks_seen, std::size_t capacity,
                                 std::uint64_t seed);

}  // namespace odem
