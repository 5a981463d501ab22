#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace odem {

struct Sample {
    std::array<double, 2> x{0.0, 0.0};
    int label = 0;
};

/// A 2-D Gaussian-mixture classification task with disjoint train/test
/// splits. Samples are fully determined by the generator parameters, so
/// task files store only those (samples are regenerated on load).
struct SyntheticTask {
    int id = 0;
    std::uint64_t generator_seed = 0;
    std::uint32_t class_count = 0;
    int clusters_per_class = 0;
    double separation = 0.0;
    std::vector<Sample> train;
    std::vector<Sample> test;
};

constexpr std::size_t kTrainSamplesPerTask = 600;
constexpr std::size_t kTestSamplesPerTask = 200;

/// Generate a task: clusters_per_class Gaussian blobs per class, cluster
/// centers scaled by separation, unit within-cluster noise. Both splits are
/// class-balanced (remainders go to the lowest class indices).
SyntheticTask generate_task(std::uint64_t seed, std::uint32_t class_count, int clusters_per_class,
                            double separation, int id = 0);

/// Write/read the generator parameters as JSON; load regenerates samples.
void save_task(const SyntheticTask& task, const std::filesystem::path& path);
SyntheticTask load_task(const std::filesystem::path& path);

}  // namespace odem
