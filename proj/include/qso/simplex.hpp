#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "qso/errors.hpp"
#include "qso/rng.hpp"

namespace qso {

/// Clamping window for construction: values in [-kCoordClampTol, 0) become 0.
inline constexpr double kCoordClampTol = 1e-12;
/// Accepted drift of the coordinate sum at construction.
inline constexpr double kSumTol = 1e-6;
/// Coordinates above this count as part of the support. Iteration produces
/// underflow-small positives, so an exact-zero test is useless in practice.
inline constexpr double kSupportTol = 1e-12;

/// A point of the probability simplex S^{m-1}: m non-negative coordinates
/// summing to 1. Construction clamps rounding noise, rejects genuinely
/// negative entries or large sum drift, and renormalizes, so long chains of
/// operator applications stay on the simplex. Immutable afterwards.
class SimplexPoint {
public:
    explicit SimplexPoint(std::vector<double> raw) : c_(std::move(raw)) {
        if (c_.empty()) throw EmptyVectorError("simplex point needs at least one coordinate");
        double sum = 0.0;
        for (double& v : c_) {
            if (v < -kCoordClampTol)
                throw NegativeCoordinateError("coordinate below -1e-12");
            if (v < 0.0) v = 0.0;
            sum += v;
        }
        if (std::abs(sum - 1.0) > kSumTol)
            throw BadSumError("coordinate sum outside [1-1e-6, 1+1e-6]");
        for (double& v : c_) v /= sum;
    }

    int dim() const { return static_cast<int>(c_.size()); }
    double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& coords() const { return c_; }

    friend bool operator==(const SimplexPoint& a, const SimplexPoint& b) {
        return a.c_ == b.c_;
    }

private:
    std::vector<double> c_;
};

inline SimplexPoint make_point(std::vector<double> raw) {
    return SimplexPoint(std::move(raw));
}

/// Vertex e_i of S^{m-1} (0-based i; text/file formats are 1-based).
inline SimplexPoint vertex(int m, int i) {
    if (m < 1) throw EmptyVectorError("dimension must be >= 1");
    if (i < 0 || i >= m) throw IndexOutOfRangeError("vertex index out of range");
    std::vector<double> c(static_cast<std::size_t>(m), 0.0);
    c[static_cast<std::size_t>(i)] = 1.0;
    return SimplexPoint(std::move(c));
}

/// Barycenter (1/m, ..., 1/m).
inline SimplexPoint barycenter(int m) {
    if (m < 1) throw EmptyVectorError("dimension must be >= 1");
    return SimplexPoint(std::vector<double>(static_cast<std::size_t>(m), 1.0 / m));
}

namespace detail {

inline double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

} // namespace detail

/// Euclidean norm of x - y.
inline double distance(const SimplexPoint& x, const SimplexPoint& y) {
    if (x.dim() != y.dim()) throw DimensionMismatchError("distance: dimension mismatch");
    return detail::euclidean_distance(x.coords(), y.coords());
}

/// Indices (0-based, ascending) whose coordinate exceeds tol.
inline std::vector<int> support(const SimplexPoint& x, double tol = kSupportTol) {
    std::vector<int> s;
    for (int i = 0; i < x.dim(); ++i)
        if (x[i] > tol) s.push_back(i);
    return s;
}

/// Uniform sample from the relative interior of the face spanned by the
/// given indices, via normalized exponential variates. Deterministic for a
/// fixed seed; the support of the result is exactly the face.
inline SimplexPoint sample_uniform(int m, const std::vector<int>& face, std::uint64_t seed) {
    if (face.empty()) throw EmptyFaceError("face must be non-empty");
    for (int i : face)
        if (i < 0 || i >= m) throw IndexOutOfRangeError("face index out of range");
    detail::SplitMix64 rng(seed);
    std::vector<double> c(static_cast<std::size_t>(m), 0.0);
    double sum = 0.0;
    for (int i : face) {
        const double e = rng.exponential();
        c[static_cast<std::size_t>(i)] = e;
        sum += e;
    }
    for (double& v : c) v /= sum;
    return SimplexPoint(std::move(c));
}

} // namespace qso
