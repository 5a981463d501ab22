#include "odem/task.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "odem/errors.hpp"
#include "odem/rng.hpp"

namespace odem {

namespace {

std::vector<Sample> draw_split(Rng& rng, std::size_t n, std::uint32_t class_count,
                               int clusters_per_class,
                               const std::vector<std::array<double, 2>>& centers) {
    std::vector<Sample> out;
    out.reserve(n);
    std::size_t base = n / class_count;
    std::size_t rem = n % class_count;
    for (std::uint32_t c = 0; c < class_count; ++c) {
        std::size_t count = base + (c < rem ? 1 : 0);
        for (std::size_t i = 0; i < count; ++i) {
            std::size_t cluster = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(clusters_per_class)));
            const auto& mu = centers[c * static_cast<std::size_t>(clusters_per_class) + cluster];
            Sample s;
            s.x = {mu[0] + rng.normal(), mu[1] + rng.normal()};
            s.label = static_cast<int>(c);
            out.push_back(s);
        }
    }
    return out;
}

}  // namespace

SyntheticTask generate_task(std::uint64_t seed, std::uint32_t class_count, int clusters_per_class,
                            double separation, int id) {
    if (class_count < 2) {
        throw ArgumentError("generate_task: class_count must be at least 2");
    }
    if (clusters_per_class < 1) {
        throw ArgumentError("generate_task: clusters_per_class must be at least 1");
    }
    if (!(separation > 0.0)) {
        throw ArgumentError("generate_task: separation must be positive");
    }
    Rng rng(seed);
    std::vector<std::array<double, 2>> centers;
    centers.reserve(static_cast<std::size_t>(class_count) * static_cast<std::size_t>(clusters_per_class));
    for (std::uint32_t c = 0; c < class_count; ++c) {
        for (int j = 0; j < clusters_per_class; ++j) {
            centers.push_back({separation * rng.normal(), separation * rng.normal()});
        }
    }
    SyntheticTask task;
    task.id = id;
    task.generator_seed = seed;
    task.class_count = class_count;
    task.clusters_per_class = clusters_per_class;
    task.separation = separation;
    task.train = draw_split(rng, kTrainSamplesPerTask, class_count, clusters_per_class, centers);
    task.test = draw_split(rng, kTestSamplesPerTask, class_count, clusters_per_class, centers);
    return task;
}

void save_task(const SyntheticTask& task, const std::filesystem::path& path) {
    nlohmann::json j;
    j["id"] = task.id;
    j["generator_seed"] = task.generator_seed;
    j["class_count"] = task.class_count;
    j["clusters_per_class"] = task.clusters_per_class;
    j["separation"] = task.separation;
    j["n_train"] = kTrainSamplesPerTask;
    j["n_test"] = kTestSamplesPerTask;
    std::ofstream out(path);
    if (!out) {
        throw FormatError("save_task: cannot open " + path.string());
    }
    out << j.dump(2) << "\n";
}

SyntheticTask load_task(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError("load_task: cannot open " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("load_task: invalid JSON in " + path.string() + ": " + e.what());
    }
    try {
        return generate_task(j.at("generator_seed").get<std::uint64_t>(),
                             j.at("class_count").get<std::uint32_t>(),
                             j.at("clusters_per_class").get<int>(),
                             j.at("separation").get<double>(), j.at("id").get<int>());
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("load_task: missing field in " + path.string() + ": " + e.what());
    }
}

}  // namespace odem
