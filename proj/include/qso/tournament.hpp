#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qso/errors.hpp"
#include "qso/operators.hpp"

namespace qso {

/// Complete directed graph on m vertices: for every unordered pair exactly
/// one directed edge. beats(i, j) means the edge i -> j is present.
class Tournament {
public:
    Tournament(int m, std::vector<std::uint8_t> adjacency) : m_(m), beats_(std::move(adjacency)) {
        if (m < 1) throw ValidationError("tournament needs at least one vertex");
        if (beats_.size() != static_cast<std::size_t>(m) * static_cast<std::size_t>(m))
            throw ValidationError("adjacency has wrong size");
        for (int i = 0; i < m; ++i) {
            if (beats(i, i)) throw ValidationError("self edge");
            for (int j = i + 1; j < m; ++j)
                if (beats(i, j) == beats(j, i))
                    throw ValidationError("pair must have exactly one direction");
        }
    }

    int dim() const { return m_; }
    bool beats(int i, int j) const {
        return beats_[static_cast<std::size_t>(i) * static_cast<std::size_t>(m_) +
                      static_cast<std::size_t>(j)] != 0;
    }

private:
    int m_;
    std::vector<std::uint8_t> beats_;
};

/// Edge i -> j iff a_ij < 0. Defined only when every off-diagonal entry is
/// clearly nonzero, which transversal operators provide.
inline Tournament extract_tournament(const VolterraMatrix& v, double zero_tol = 1e-12) {
    const int m = v.dim();
    std::vector<std::uint8_t> b(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), 0);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            const double aij = v.a(i, j);
            if (std::abs(aij) <= zero_tol)
                throw ZeroOffDiagonalError("off-diagonal entry too close to zero for a tournament");
            if (aij < 0.0)
                b[static_cast<std::size_t>(i) * static_cast<std::size_t>(m) + static_cast<std::size_t>(j)] = 1;
            else
                b[static_cast<std::size_t>(j) * static_cast<std::size_t>(m) + static_cast<std::size_t>(i)] = 1;
        }
    return Tournament(m, std::move(b));
}

/// First 3-cycle (i, j, k) with beats(i,j), beats(j,k), beats(k,i), in
/// lexicographically smallest order; empty when the tournament is transitive.
inline std::optional<std::array<int, 3>> find_three_cycle(const Tournament& t) {
    const int m = t.dim();
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (j == i || !t.beats(i, j)) continue;
            for (int k = 0; k < m; ++k) {
                if (k == i || k == j) continue;
                if (t.beats(j, k) && t.beats(k, i)) return std::array<int, 3>{i, j, k};
            }
        }
    return std::nullopt;
}

/// Exhaustive triple scan; m stays small here, clarity wins.
inline bool is_transitive(const Tournament& t) {
    const int m = t.dim();
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            if (j == i || !t.beats(i, j)) continue;
            for (int k = 0; k < m; ++k) {
                if (k == i || k == j) continue;
                if (t.beats(j, k) && t.beats(k, i)) return false;
            }
        }
    return true;
}

/// Sorted out-degrees. Equals (0, 1, ..., m-1) exactly when the tournament is
/// transitive; serves as an independent oracle for is_transitive.
inline std::vector<int> score_sequence(const Tournament& t) {
    const int m = t.dim();
    std::vector<int> s(static_cast<std::size_t>(m), 0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (j != i && t.beats(i, j)) ++s[static_cast<std::size_t>(i)];
    std::sort(s.begin(), s.end());
    return s;
}

/// Edge list as "i->j" lines (1-based), lexicographic order.
inline std::string render_edges(const Tournament& t) {
    std::ostringstream os;
    for (int i = 0; i < t.dim(); ++i)
        for (int j = 0; j < t.dim(); ++j)
            if (j != i && t.beats(i, j)) os << (i + 1) << "->" << (j + 1) << "\n";
    return os.str();
}

} // namespace qso
