#include "odem/calibration.hpp"

#include <numeric>

#include "odem/errors.hpp"
#include "odem/rng.hpp"

namespace odem {

CalibrationSet::CalibrationSet(std::vector<Sample> samples, std::vector<int> source_task_ids,
                               std::size_t capacity)
    : samples_(std::move(samples)), source_task_ids_(std::move(source_task_ids)), capacity_(capacity) {
    if (samples_.size() != source_task_ids_.size()) {
        throw DimensionError("CalibrationSet: samples and source ids differ in length");
    }
    if (samples_.size() > capacity_) {
        throw ArgumentError("CalibrationSet: size exceeds capacity");
    }
}

CalibrationSet build_calibration(const std::vector<SyntheticTask>& tasks_seen, std::size_t capacity,
                                 std::uint64_t seed) {
    if (tasks_seen.empty()) {
        throw ArgumentError("build_calibration: no tasks presented");
    }
    if (capacity < tasks_seen.size()) {
        throw ArgumentError("build_calibration: capacity smaller than task count");
    }
    const std::size_t n = tasks_seen.size();
    const std::size_t base = capacity / n;
    const std::size_t rem = capacity % n;

    Rng rng(seed);
    std::vector<Sample> samples;
    std::vector<int> ids;
    samples.reserve(capacity);
    ids.reserve(capacity);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t share = base + (i < rem ? 1 : 0);
        const auto& train = tasks_seen[i].train;
        share = std::min(share, train.size());
        std::vector<std::size_t> idx(train.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        rng.shuffle(idx);
        for (std::size_t j = 0; j < share; ++j) {
            samples.push_back(train[idx[j]]);
            ids.push_back(tasks_seen[i].id);
        }
    }
    return CalibrationSet(std::move(samples), std::move(ids), capacity);
}

}  // namespace odem
