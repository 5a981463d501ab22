#pragma once

#include <cstddef>
#include <vector>

namespace odem {

/// Flat vector in the shared parameter space.
///
/// Length is fixed at construction; every binary operation requires equal
/// lengths and throws DimensionError otherwise. Operations returning a new
/// vector verify that all entries are finite and throw NumericError if not.
class ParamVector {
public:
    ParamVector() = default;
    explicit ParamVector(std::size_t n, double fill = 0.0) : values_(n, fill) {}
    explicit ParamVector(std::vector<double> values) : values_(std::move(values)) {}

    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    double operator[](std::size_t i) const noexcept { return values_[i]; }
    double& operator[](std::size_t i) noexcept { return values_[i]; }

    const double* data() const noexcept { return values_.data(); }
    double* data() noexcept { return values_.data(); }

    const std::vector<double>& values() const noexcept { return values_; }

    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }
    auto begin() noexcept { return values_.begin(); }
    auto end() noexcept { return values_.end(); }

    bool operator==(const ParamVector& other) const noexcept = default;

private:
    std::vector<double> values_;
};

struct Projection {
    ParamVector parallel;
    ParamVector orthogonal;
};

/// result[i] = a * x[i] + y[i]; inputs are untouched.
ParamVector axpy(double a, const ParamVector& x, const ParamVector& y);

/// Euclidean inner product.
double dot(const ParamVector& x, const ParamVector& y);

/// Euclidean norm.
double norm(const ParamVector& x);

/// x - y.
ParamVector sub(const ParamVector& x, const ParamVector& y);

/// a * x.
ParamVector scale(double a, const ParamVector& x);

/// x + t * (y - x).
ParamVector lerp(const ParamVector& x, const ParamVector& y, double t);

/// Decompose u into its component along g and the remainder.
///
/// parallel = (<u,g>/||g||^2) g, orthogonal = u - parallel. When ||g|| = 0
/// the decomposition is undefined and the convention parallel = 0,
/// orthogonal = u applies.
Projection project_onto(const ParamVector& u, const ParamVector& g);

namespace detail {
void require_same_size(const ParamVector& a, const ParamVector& b, const char* op);
void require_finite(const ParamVector& v, const char* op);
}  // namespace detail

}  // namespace odem
