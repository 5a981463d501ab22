#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace odem {

enum class Activation : std::uint8_t { tanh = 0, relu = 1 };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& s);

/// One weight-array shape: a (rows x cols) matrix, or a vector of length
/// rows when cols == 0.
struct Shape {
    std::uint64_t rows = 0;
    std::uint64_t cols = 0;

    std::uint64_t element_count() const noexcept { return rows * (cols == 0 ? 1 : cols); }
    bool operator==(const Shape&) const noexcept = default;
};

/// Describes the layout of a flat parameter vector: an ordered list of
/// array shapes plus the classifier head size and the hidden activation.
class ArchDescriptor {
public:
    ArchDescriptor() = default;
    ArchDescriptor(std::vector<Shape> shapes, Activation act, std::uint32_t class_count);

    /// Fully-connected classifier over input_dim features: weight/bias pairs
    /// for each hidden layer and the output head. hidden may be empty, which
    /// yields a linear (softmax-regression) model.
    static ArchDescriptor mlp(std::size_t input_dim, const std::vector<std::size_t>& hidden,
                              std::uint32_t class_count, Activation act = Activation::tanh);

    const std::vector<Shape>& shapes() const noexcept { return shapes_; }
    Activation activation() const noexcept { return activation_; }
    std::uint32_t class_count() const noexcept { return class_count_; }

    /// Total number of parameters (sum of shape element counts).
    std::size_t param_count() const noexcept;

    /// Element count per shape entry, in order. Used for blockwise operations.
    std::vector<std::size_t> block_sizes() const;

    /// Layer widths [input, hidden..., classes]; validates that the shape
    /// list follows the weight/bias pattern of a fully-connected stack.
    std::vector<std::size_t> layer_dims() const;

    bool operator==(const ArchDescriptor&) const noexcept = default;

private:
    std::vector<Shape> shapes_;
    Activation activation_ = Activation::tanh;
    std::uint32_t class_count_ = 0;
};

}  // namespace odem
