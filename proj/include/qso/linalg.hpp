#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace qso::detail {

/// Dense row-major n x n helpers. Everything here runs on matrices of order
/// <= 20 with O(1) entries, so plain elimination with partial pivoting is
/// accurate and nothing heavier is warranted.

inline double& at(std::vector<double>& a, int n, int r, int c) {
    return a[static_cast<std::size_t>(r) * static_cast<std::size_t>(n) + static_cast<std::size_t>(c)];
}
inline double at(const std::vector<double>& a, int n, int r, int c) {
    return a[static_cast<std::size_t>(r) * static_cast<std::size_t>(n) + static_cast<std::size_t>(c)];
}

/// Determinant by elimination with partial pivoting. Destroys the copy.
inline double determinant(std::vector<double> a, int n) {
    double det = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(at(a, n, r, col)) > std::abs(at(a, n, piv, col))) piv = r;
        const double p = at(a, n, piv, col);
        if (p == 0.0) return 0.0;
        if (piv != col) {
            for (int c = 0; c < n; ++c) std::swap(at(a, n, piv, c), at(a, n, col, c));
            det = -det;
        }
        det *= p;
        for (int r = col + 1; r < n; ++r) {
            const double f = at(a, n, r, col) / p;
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) at(a, n, r, c) -= f * at(a, n, col, c);
        }
    }
    return det;
}

struct NullspaceResult {
    int rank = 0;
    int nullity = 0;
    /// A basis vector when nullity == 1, empty otherwise.
    std::vector<double> basis;
};

/// Rank/nullity of an n x n matrix with pivot tolerance `tol`; when the
/// nullspace is one-dimensional, also a basis vector (free variable set to 1,
/// back-substituted through the echelon form).
inline NullspaceResult nullspace(std::vector<double> a, int n, double tol) {
    NullspaceResult res;
    std::vector<int> pivot_col_of_row;
    std::vector<bool> col_is_pivot(static_cast<std::size_t>(n), false);
    int row = 0;
    for (int col = 0; col < n && row < n; ++col) {
        int piv = row;
        for (int r = row + 1; r < n; ++r)
            if (std::abs(at(a, n, r, col)) > std::abs(at(a, n, piv, col))) piv = r;
        if (std::abs(at(a, n, piv, col)) <= tol) continue; // free column
        if (piv != row)
            for (int c = 0; c < n; ++c) std::swap(at(a, n, piv, c), at(a, n, row, c));
        const double p = at(a, n, row, col);
        for (int r = row + 1; r < n; ++r) {
            const double f = at(a, n, r, col) / p;
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) at(a, n, r, c) -= f * at(a, n, col, c);
        }
        col_is_pivot[static_cast<std::size_t>(col)] = true;
        pivot_col_of_row.push_back(col);
        ++row;
    }
    res.rank = row;
    res.nullity = n - row;
    if (res.nullity == 1) {
        int free_col = 0;
        while (col_is_pivot[static_cast<std::size_t>(free_col)]) ++free_col;
        std::vector<double> v(static_cast<std::size_t>(n), 0.0);
        v[static_cast<std::size_t>(free_col)] = 1.0;
        for (int r = res.rank - 1; r >= 0; --r) {
            const int pc = pivot_col_of_row[static_cast<std::size_t>(r)];
            double s = 0.0;
            for (int c = pc + 1; c < n; ++c) s += at(a, n, r, c) * v[static_cast<std::size_t>(c)];
            v[static_cast<std::size_t>(pc)] = -s / at(a, n, r, pc);
        }
        res.basis = std::move(v);
    }
    return res;
}

/// Determinants of the leading principal submatrices of even orders
/// 2, 4, ..., 2*floor(n/2), as (order, value) pairs. Odd orders are skipped:
/// a skew-symmetric matrix of odd order has determinant identically zero.
inline std::vector<std::pair<int, double>> leading_even_minors(const std::vector<double>& a, int n) {
    std::vector<std::pair<int, double>> out;
    for (int k = 2; k <= n; k += 2) {
        std::vector<double> sub(static_cast<std::size_t>(k) * static_cast<std::size_t>(k));
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c)
                sub[static_cast<std::size_t>(r) * static_cast<std::size_t>(k) + static_cast<std::size_t>(c)] =
                    at(a, n, r, c);
        out.emplace_back(k, determinant(std::move(sub), k));
    }
    return out;
}

} // namespace qso::detail
