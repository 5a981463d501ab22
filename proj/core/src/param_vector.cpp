#include "odem/param_vector.hpp"

#include <cmath>
#include <string>

#include "odem/errors.hpp"

namespace odem {

namespace detail {

void require_same_size(const ParamVector& a, const ParamVector& b, const char* op) {
    if (a.size() != b.size()) {
        throw DimensionError(std::string(op) + ": length mismatch (" + std::to_string(a.size()) +
                             " vs " + std::to_string(b.size()) + ")");
    }
}

void require_finite(const ParamVector& v, const char* op) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) {
            throw NumericError(std::string(op) + ": non-finite entry at index " + std::to_string(i));
        }
    }
}

}  // namespace detail

ParamVector axpy(double a, const ParamVector& x, const ParamVector& y) {
    detail::require_same_size(x, y, "axpy");
    if (!std::isfinite(a)) {
        throw ArgumentError("axpy: scale factor is not finite");
    }
    ParamVector r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        r[i] = a * x[i] + y[i];
    }
    detail::require_finite(r, "axpy");
    return r;
}

double dot(const ParamVector& x, const ParamVector& y) {
    detail::require_same_size(x, y, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += x[i] * y[i];
    }
    if (!std::isfinite(s)) {
        throw NumericError("dot: non-finite result");
    }
    return s;
}

double norm(const ParamVector& x) { return std::sqrt(dot(x, x)); }

ParamVector sub(const ParamVector& x, const ParamVector& y) {
    detail::require_same_size(x, y, "sub");
    ParamVector r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        r[i] = x[i] - y[i];
    }
    detail::require_finite(r, "sub");
    return r;
}

ParamVector scale(double a, const ParamVector& x) {
    ParamVector r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        r[i] = a * x[i];
    }
    detail::require_finite(r, "scale");
    return r;
}

ParamVector lerp(const ParamVector& x, const ParamVector& y, double t) {
    detail::require_same_size(x, y, "lerp");
    ParamVector r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        r[i] = x[i] + t * (y[i] - x[i]);
    }
    detail::require_finite(r, "lerp");
    return r;
}

Projection project_onto(const ParamVector& u, const ParamVector& g) {
    detail::require_same_size(u, g, "project_onto");
    double gg = dot(g, g);
    if (gg == 0.0) {
        return Projection{ParamVector(u.size(), 0.0), u};
    }
    double coef = dot(u, g) / gg;
    ParamVector par = scale(coef, g);
    ParamVector perp = sub(u, par);
    return Projection{std::move(par), std::move(perp)};
}

}  // namespace odem
