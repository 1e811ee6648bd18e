#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "qso/errors.hpp"
#include "qso/linalg.hpp"
#include "qso/operators.hpp"
#include "qso/simplex.hpp"

namespace qso {

/// Strict positivity threshold separating genuine face-interior solutions
/// from boundary-degenerate solutions of the restricted linear system.
inline constexpr double kInteriorTol = 1e-10;
/// Fixed points closer than this are considered the same point.
inline constexpr double kFixedPointDedupTol = 1e-8;
/// Largest residual an accepted fixed-point record may carry.
inline constexpr double kFixedPointResidualTol = 1e-9;

struct TransversalityReport {
    bool transversal = false;
    /// (order 2k, determinant of the leading principal submatrix).
    std::vector<std::pair<int, double>> minors;
    double tolerance_used = kTransversalityTol;
};

/// A skew-symmetric matrix is transversal when all even-order leading
/// principal minors are nonzero; odd orders vanish identically and are
/// skipped.
inline TransversalityReport check_transversality(const VolterraMatrix& v,
                                                 double tol = kTransversalityTol) {
    TransversalityReport r;
    r.tolerance_used = tol;
    r.minors = detail::leading_even_minors(v.full_flat(), v.dim());
    r.transversal = true;
    for (const auto& [order, det] : r.minors)
        if (std::abs(det) <= tol) r.transversal = false;
    return r;
}

enum class FixedPointClass { vertex, face_interior, simplex_interior };

inline const char* to_string(FixedPointClass c) {
    switch (c) {
        case FixedPointClass::vertex: return "vertex";
        case FixedPointClass::face_interior: return "face_interior";
        default: return "simplex_interior";
    }
}

struct FixedPointRecord {
    SimplexPoint point;
    std::vector<int> face; ///< support, 0-based ascending
    double residual = 0.0; ///< ||Vx - x||, re-verified by direct application
    FixedPointClass classification = FixedPointClass::vertex;
};

namespace detail {

inline std::vector<int> normalize_face(std::vector<int> face, int m) {
    if (face.empty()) throw EmptyFaceError("face must be non-empty");
    std::sort(face.begin(), face.end());
    face.erase(std::unique(face.begin(), face.end()), face.end());
    for (int i : face)
        if (i < 0 || i >= m) throw IndexOutOfRangeError("face index out of range");
    return face;
}

} // namespace detail

/// The unique fixed point with support exactly `face`, if one exists. On a
/// face with index set alpha, x is fixed iff (A restricted to alpha) x = 0
/// together with sum x = 1 and x > 0; the kernel is computed by elimination
/// with partial pivoting. A kernel of dimension >= 2 means the fixed points
/// on the face are not isolated and raises DegenerateFace.
inline std::optional<FixedPointRecord> fixed_points_on_face(const VolterraMatrix& v,
                                                            std::vector<int> face_in) {
    const int m = v.dim();
    std::vector<int> face = detail::normalize_face(std::move(face_in), m);
    const int s = static_cast<int>(face.size());

    std::vector<double> coords(static_cast<std::size_t>(m), 0.0);
    if (s == 1) {
        coords[static_cast<std::size_t>(face[0])] = 1.0;
    } else {
        std::vector<double> sub(static_cast<std::size_t>(s) * static_cast<std::size_t>(s));
        for (int r = 0; r < s; ++r)
            for (int c = 0; c < s; ++c)
                sub[static_cast<std::size_t>(r) * static_cast<std::size_t>(s) + static_cast<std::size_t>(c)] =
                    v.a(face[static_cast<std::size_t>(r)], face[static_cast<std::size_t>(c)]);
        const auto ns = detail::nullspace(std::move(sub), s, kTransversalityTol);
        if (ns.nullity == 0) return std::nullopt;
        if (ns.nullity >= 2)
            throw DegenerateFaceError("restricted system has a kernel of dimension >= 2");
        double sum = 0.0;
        for (double x : ns.basis) sum += x;
        if (std::abs(sum) <= kTransversalityTol) return std::nullopt; // kernel line misses the affine slice
        for (int r = 0; r < s; ++r) {
            const double x = ns.basis[static_cast<std::size_t>(r)] / sum;
            if (x <= kInteriorTol) return std::nullopt;
            coords[static_cast<std::size_t>(face[static_cast<std::size_t>(r)])] = x;
        }
    }

    FixedPointRecord rec{make_point(std::move(coords)), face, 0.0,
                         s == 1         ? FixedPointClass::vertex
                         : s == m       ? FixedPointClass::simplex_interior
                                        : FixedPointClass::face_interior};
    rec.residual = distance(apply_volterra(v, rec.point), rec.point);
    if (rec.residual > kFixedPointResidualTol) return std::nullopt;
    return rec;
}

/// Exhaustive sweep of all 2^m - 1 faces; every isolated fixed point,
/// deduplicated, vertices always included. DegenerateFace from any face
/// propagates: non-isolated fixed points are reported, never skipped.
inline std::vector<FixedPointRecord> enumerate_fixed_points(const VolterraMatrix& v) {
    const int m = v.dim();
    if (m > 20) throw FaceBudgetExceededError("face sweep limited to m <= 20");
    std::vector<FixedPointRecord> out;
    for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
        std::vector<int> face;
        for (int i = 0; i < m; ++i)
            if (mask & (1u << i)) face.push_back(i);
        auto rec = fixed_points_on_face(v, std::move(face));
        if (!rec) continue;
        bool dup = false;
        for (const auto& kept : out)
            if (distance(kept.point, rec->point) < kFixedPointDedupTol) { dup = true; break; }
        if (!dup) out.push_back(std::move(*rec));
    }
    std::sort(out.begin(), out.end(), [](const FixedPointRecord& a, const FixedPointRecord& b) {
        if (a.face != b.face) return a.face < b.face;
        return a.point.coords() < b.point.coords();
    });
    return out;
}

namespace detail {

/// p-fold plain-form application on the sum-1 affine plane.
inline std::vector<double> apply_power_affine(const VolterraMatrix& v, std::vector<double> x, int p) {
    for (int t = 0; t < p; ++t) x = apply_volterra_affine(v, x);
    return x;
}

} // namespace detail

/// Grid-seeded damped-Newton search for period-2/3 points on S^2. Seeds a
/// triangular grid with the given step, runs Newton on V^p(x) - x in the two
/// free coordinates (Jacobian by central differences, h = 1e-6), keeps
/// converged on-simplex solutions with residual < 1e-9, and discards anything
/// within 1e-6 of a fixed point, so only genuinely periodic points remain.
inline std::vector<SimplexPoint> find_periodic_points(const VolterraMatrix& v, int period,
                                                      double grid_step) {
    if (v.dim() != 3) throw UnsupportedDimensionError("periodic search is limited to m = 3");
    if (period != 2 && period != 3) throw UnsupportedPeriodError("period must be 2 or 3");
    if (!(grid_step >= 0.01 && grid_step <= 0.2))
        throw InvalidArgumentError("grid_step must lie in [0.01, 0.2]");

    const auto fixed = enumerate_fixed_points(v);

    const double fd_h = 1e-6;
    auto residual2 = [&](double u, double w, double& g0, double& g1) {
        const auto y = detail::apply_power_affine(v, {u, w, 1.0 - u - w}, period);
        g0 = y[0] - u;
        g1 = y[1] - w;
    };

    std::vector<SimplexPoint> found;
    for (double u0 = 0.0; u0 <= 1.0 + 1e-12; u0 += grid_step) {
        for (double w0 = 0.0; u0 + w0 <= 1.0 + 1e-12; w0 += grid_step) {
            double u = u0, w = w0;
            double g0, g1;
            residual2(u, w, g0, g1);
            double gn = std::hypot(g0, g1);
            bool converged = false;
            for (int it = 0; it < 60 && !converged; ++it) {
                if (gn < 1e-12) { converged = true; break; }
                // central-difference Jacobian of the reduced residual
                double a0, a1, b0, b1;
                residual2(u + fd_h, w, a0, a1);
                residual2(u - fd_h, w, b0, b1);
                const double j00 = (a0 - b0) / (2 * fd_h), j10 = (a1 - b1) / (2 * fd_h);
                residual2(u, w + fd_h, a0, a1);
                residual2(u, w - fd_h, b0, b1);
                const double j01 = (a0 - b0) / (2 * fd_h), j11 = (a1 - b1) / (2 * fd_h);
                const double det = j00 * j11 - j01 * j10;
                if (std::abs(det) < 1e-14) break;
                const double du = (-g0 * j11 + g1 * j01) / det;
                const double dw = (-g1 * j00 + g0 * j10) / det;
                double lambda = 1.0;
                bool improved = false;
                for (int half = 0; half < 25; ++half, lambda *= 0.5) {
                    double n0, n1;
                    residual2(u + lambda * du, w + lambda * dw, n0, n1);
                    const double nn = std::hypot(n0, n1);
                    if (nn < gn) {
                        u += lambda * du;
                        w += lambda * dw;
                        g0 = n0; g1 = n1; gn = nn;
                        improved = true;
                        break;
                    }
                }
                if (!improved) break;
                if (std::abs(u) > 3.0 || std::abs(w) > 3.0) break; // wandered far off the simplex
                if (gn < 1e-12) converged = true;
            }
            if (!converged && gn >= 1e-12) continue;

            double x3 = 1.0 - u - w;
            if (u < -kInteriorTol || w < -kInteriorTol || x3 < -kInteriorTol) continue;
            std::vector<double> coords{std::max(u, 0.0), std::max(w, 0.0), std::max(x3, 0.0)};
            SimplexPoint p = make_point(std::move(coords));

            // genuine on-simplex residual through the real operator
            SimplexPoint img = p;
            for (int t = 0; t < period; ++t) img = apply_volterra(v, img);
            if (distance(img, p) >= 1e-9) continue;

            bool near_fixed = false;
            for (const auto& f : fixed)
                if (distance(f.point, p) < 1e-6) { near_fixed = true; break; }
            if (near_fixed) continue;

            bool dup = false;
            for (const auto& q : found)
                if (distance(q, p) < kFixedPointDedupTol) { dup = true; break; }
            if (!dup) found.push_back(std::move(p));
        }
    }
    std::sort(found.begin(), found.end(),
              [](const SimplexPoint& a, const SimplexPoint& b) { return a.coords() < b.coords(); });
    return found;
}

} // namespace qso
