#include "odem/arch.hpp"

#include "odem/errors.hpp"

namespace odem {

std::string to_string(Activation a) {
    switch (a) {
        case Activation::tanh: return "tanh";
        case Activation::relu: return "relu";
    }
    throw ArgumentError("unknown activation tag");
}

Activation activation_from_string(const std::string& s) {
    if (s == "tanh") return Activation::tanh;
    if (s == "relu") return Activation::relu;
    throw ArgumentError("unknown activation: " + s);
}

ArchDescriptor::ArchDescriptor(std::vector<Shape> shapes, Activation act, std::uint32_t class_count)
    : shapes_(std::move(shapes)), activation_(act), class_count_(class_count) {
    if (shapes_.empty()) {
        throw ArgumentError("ArchDescriptor: shape list is empty");
    }
    if (class_count_ == 0) {
        throw ArgumentError("ArchDescriptor: class_count must be positive");
    }
}

ArchDescriptor ArchDescriptor::mlp(std::size_t input_dim, const std::vector<std::size_t>& hidden,
                                   std::uint32_t class_count, Activation act) {
    if (input_dim == 0) {
        throw ArgumentError("ArchDescriptor::mlp: input_dim must be positive");
    }
    if (class_count == 0) {
        throw ArgumentError("ArchDescriptor::mlp: class_count must be positive");
    }
    std::vector<Shape> shapes;
    std::size_t in = input_dim;
    for (std::size_t h : hidden) {
        shapes.push_back(Shape{h, in});
        shapes.push_back(Shape{h, 0});
        in = h;
    }
    shapes.push_back(Shape{class_count, in});
    shapes.push_back(Shape{class_count, 0});
    return ArchDescriptor(std::move(shapes), act, class_count);
}

std::size_t ArchDescriptor::param_count() const noexcept {
    std::size_t n = 0;
    for (const Shape& s : shapes_) {
        n += static_cast<std::size_t>(s.element_count());
    }
    return n;
}

std::vector<std::size_t> ArchDescriptor::block_sizes() const {
    std::vector<std::size_t> out;
    out.reserve(shapes_.size());
    for (const Shape& s : shapes_) {
        out.push_back(static_cast<std::size_t>(s.element_count()));
    }
    return out;
}

std::vector<std::size_t> ArchDescriptor::layer_dims() const {
    if (shapes_.size() % 2 != 0) {
        throw FormatError("layer_dims: expected weight/bias shape pairs");
    }
    std::vector<std::size_t> dims;
    for (std::size_t l = 0; l < shapes_.size(); l += 2) {
        const Shape& w = shapes_[l];
        const Shape& b = shapes_[l + 1];
        if (w.cols == 0 || b.cols != 0 || b.rows != w.rows) {
            throw FormatError("layer_dims: shape list is not a weight/bias stack");
        }
        if (l == 0) {
            dims.push_back(static_cast<std::size_t>(w.cols));
        } else if (dims.back() != w.cols) {
            throw FormatError("layer_dims: inconsistent layer widths");
        }
        dims.push_back(static_cast<std::size_t>(w.rows));
    }
    if (dims.back() != class_count_) {
        throw FormatError("layer_dims: head width does not match class_count");
    }
    return dims;
}

}  // namespace odem
