#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "odem/arch.hpp"
#include "odem/param_vector.hpp"

namespace odem {

/// A parameter vector together with its architecture descriptor and
/// provenance metadata, serializable to the binary format below.
///
/// File layout (all integers little-endian):
///   magic "ODEM" (4 bytes)
///   version        u32 (currently 1)
///   shape count    u32
///   per shape      rows u64, cols u64 (cols == 0 marks a 1-D shape)
///   activation     u8
///   class_count    u32
///   label length   u32, then that many UTF-8 bytes
///   seed           u64
///   values         d IEEE-754 binary64, where d is the shape element sum
struct Checkpoint {
    ArchDescriptor arch;
    ParamVector params;
    std::string label;
    std::uint64_t seed = 0;
};

void save_checkpoint(const Checkpoint& c, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace odem
