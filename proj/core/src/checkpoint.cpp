#include "odem/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "odem/errors.hpp"

namespace odem {

namespace {

constexpr char kMagic[4] = {'O', 'D', 'E', 'M'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "checkpoint io assumes a little-endian host");

template <typename T>
void write_le(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_le(std::ifstream& in, const char* field) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) {
        throw FormatError(std::string("checkpoint: truncated while reading ") + field);
    }
    return v;
}

}  // namespace

void save_checkpoint(const Checkpoint& c, const std::filesystem::path& path) {
    if (c.params.size() != c.arch.param_count()) {
        throw DimensionError("save_checkpoint: params length does not match arch");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw FormatError("save_checkpoint: cannot open " + path.string());
    }
    out.write(kMagic, 4);
    write_le(out, kVersion);
    write_le(out, static_cast<std::uint32_t>(c.arch.shapes().size()));
    for (const Shape& s : c.arch.shapes()) {
        write_le(out, s.rows);
        write_le(out, s.cols);
    }
    write_le(out, static_cast<std::uint8_t>(c.arch.activation()));
    write_le(out, c.arch.class_count());
    write_le(out, static_cast<std::uint32_t>(c.label.size()));
    out.write(c.label.data(), static_cast<std::streamsize>(c.label.size()));
    write_le(out, c.seed);
    out.write(reinterpret_cast<const char*>(c.params.data()),
              static_cast<std::streamsize>(c.params.size() * sizeof(double)));
    if (!out) {
        throw FormatError("save_checkpoint: write failed for " + path.string());
    }
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("load_checkpoint: cannot open " + path.string());
    }
    char magic[4] = {};
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw FormatError("load_checkpoint: bad magic in " + path.string());
    }
    auto version = read_le<std::uint32_t>(in, "version");
    if (version != kVersion) {
        throw FormatError("load_checkpoint: unsupported version " + std::to_string(version));
    }
    auto shape_count = read_le<std::uint32_t>(in, "shape count");
    if (shape_count == 0) {
        throw FormatError("load_checkpoint: empty shape list");
    }
    std::vector<Shape> shapes(shape_count);
    for (Shape& s : shapes) {
        s.rows = read_le<std::uint64_t>(in, "shape rows");
        s.cols = read_le<std::uint64_t>(in, "shape cols");
    }
    auto act_tag = read_le<std::uint8_t>(in, "activation");
    if (act_tag > static_cast<std::uint8_t>(Activation::relu)) {
        throw FormatError("load_checkpoint: unknown activation tag " + std::to_string(act_tag));
    }
    auto class_count = read_le<std::uint32_t>(in, "class count");
    auto label_len = read_le<std::uint32_t>(in, "label length");
    std::string label(label_len, '\0');
    if (label_len > 0) {
        in.read(label.data(), label_len);
        if (!in) {
            throw FormatError("checkpoint: truncated while reading label");
        }
    }
    auto seed = read_le<std::uint64_t>(in, "seed");

    ArchDescriptor arch(std::move(shapes), static_cast<Activation>(act_tag), class_count);
    std::size_t d = arch.param_count();
    std::vector<double> values(d);
    in.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(d * sizeof(double)));
    if (!in || in.gcount() != static_cast<std::streamsize>(d * sizeof(double))) {
        throw FormatError("load_checkpoint: value count is short of the shape sum");
    }
    // A trailing byte means the stored vector is longer than the shapes describe.
    if (in.peek() != std::ifstream::traits_type::eof()) {
        throw FormatError("load_checkpoint: value count exceeds the shape sum");
    }
    return Checkpoint{std::move(arch), ParamVector(std::move(values)), std::move(label), seed};
}

}  // namespace odem
