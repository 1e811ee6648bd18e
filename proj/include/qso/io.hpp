#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qso/dynamics.hpp"
#include "qso/errors.hpp"
#include "qso/fixed_points.hpp"
#include "qso/operators.hpp"
#include "qso/tournament.hpp"

namespace qso::io {

struct ParseError : Error { using Error::Error; };

using Operator = std::variant<VolterraMatrix, QsoTensor>;

// ---------------------------------------------------------------------------
// operator files
//
//   {"type": "volterra", "m": 3, "a": [[0,1,-1],[-1,0,1],[1,-1,0]]}
//   {"type": "qso", "m": 2, "p": [[[...],[...]],[[...],[...]]]}
//
// The loader validates skew-symmetry/range for "volterra" and
// symmetry/stochasticity for "qso" through the respective constructors.
// ---------------------------------------------------------------------------

inline nlohmann::json volterra_json(const VolterraMatrix& v) {
    nlohmann::json j;
    j["type"] = "volterra";
    j["m"] = v.dim();
    j["a"] = v.full();
    return j;
}

inline nlohmann::json qso_json(const QsoTensor& t) {
    const int m = t.dim();
    nlohmann::json cube = nlohmann::json::array();
    for (int i = 0; i < m; ++i) {
        nlohmann::json plane = nlohmann::json::array();
        for (int j = 0; j < m; ++j) {
            nlohmann::json row = nlohmann::json::array();
            for (int k = 0; k < m; ++k) row.push_back(t.p(i, j, k));
            plane.push_back(std::move(row));
        }
        cube.push_back(std::move(plane));
    }
    nlohmann::json j;
    j["type"] = "qso";
    j["m"] = m;
    j["p"] = std::move(cube);
    return j;
}

/// Canonical single-line serialization; also the digest preimage.
inline std::string operator_text(const Operator& op) {
    return std::visit([](const auto& o) {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, VolterraMatrix>) return volterra_json(o).dump();
        else return qso_json(o).dump();
    }, op) + "\n";
}

inline Operator parse_operator(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad operator file: ") + e.what());
    }
    try {
        const std::string type = j.at("type").get<std::string>();
        const int m = j.at("m").get<int>();
        if (type == "volterra") {
            const auto a = j.at("a").get<std::vector<std::vector<double>>>();
            if (static_cast<int>(a.size()) != m) throw ParseError("matrix size disagrees with m");
            return VolterraMatrix::from_full(a);
        }
        if (type == "qso") {
            const auto cube = j.at("p").get<std::vector<std::vector<std::vector<double>>>>();
            if (static_cast<int>(cube.size()) != m) throw ParseError("tensor size disagrees with m");
            std::vector<double> flat;
            flat.reserve(static_cast<std::size_t>(m) * m * m);
            for (const auto& plane : cube) {
                if (static_cast<int>(plane.size()) != m) throw ParseError("tensor size disagrees with m");
                for (const auto& row : plane) {
                    if (static_cast<int>(row.size()) != m) throw ParseError("tensor size disagrees with m");
                    for (double x : row) flat.push_back(x);
                }
            }
            return QsoTensor(m, std::move(flat));
        }
        throw ParseError("unknown operator type: " + type);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad operator file: ") + e.what());
    }
}

inline Operator load_operator(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_operator(ss.str());
}

inline VolterraMatrix load_volterra(const std::string& path) {
    Operator op = load_operator(path);
    if (auto* v = std::get_if<VolterraMatrix>(&op)) return *v;
    throw ParseError(path + " does not hold a Volterra operator");
}

/// Write-temp-then-rename so readers never observe a partial file.
inline void save_text_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, target);
}

/// FNV-1a 64-bit, hex-encoded; digest of the canonical serialization.
inline std::string fnv1a_hex(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x00000100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

inline std::string operator_digest(const Operator& op) { return fnv1a_hex(operator_text(op)); }

// ---------------------------------------------------------------------------
// CSV (17 significant digits so values round-trip exactly)
// ---------------------------------------------------------------------------

inline std::string fmt17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
}

/// Header n,x1,...,xm; one row per sampled state.
inline std::string trajectory_csv(const std::vector<std::pair<long long, SimplexPoint>>& samples) {
    std::ostringstream os;
    if (samples.empty()) return "";
    const int m = samples.front().second.dim();
    os << "n";
    for (int i = 1; i <= m; ++i) os << ",x" << i;
    os << "\n";
    for (const auto& [n, p] : samples) {
        os << n;
        for (int i = 0; i < m; ++i) os << "," << fmt17(p[i]);
        os << "\n";
    }
    return os.str();
}

struct CesaroSample {
    long long n = 0;
    int order = 0;
    std::vector<double> mean;
};

/// Header n,order,x1,...,xm.
inline std::string cesaro_csv(const std::vector<CesaroSample>& samples) {
    std::ostringstream os;
    if (samples.empty()) return "";
    const int m = static_cast<int>(samples.front().mean.size());
    os << "n,order";
    for (int i = 1; i <= m; ++i) os << ",x" << i;
    os << "\n";
    for (const auto& s : samples) {
        os << s.n << "," << s.order;
        for (double x : s.mean) os << "," << fmt17(x);
        os << "\n";
    }
    return os.str();
}

/// Header n,distance.
inline std::string ergodic_csv(const std::vector<std::pair<long long, double>>& distances) {
    std::ostringstream os;
    os << "n,distance\n";
    for (const auto& [n, d] : distances) os << n << "," << fmt17(d) << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// reports (JSON; indices 1-based on the wire)
// ---------------------------------------------------------------------------

inline nlohmann::json point_json(const SimplexPoint& p) {
    nlohmann::json arr = nlohmann::json::array();
    for (int i = 0; i < p.dim(); ++i) arr.push_back(p[i]);
    return arr;
}

inline nlohmann::json face_json(const std::vector<int>& face) {
    nlohmann::json arr = nlohmann::json::array();
    for (int i : face) arr.push_back(i + 1);
    return arr;
}

inline nlohmann::json fixed_point_json(const FixedPointRecord& r) {
    nlohmann::json j;
    j["face"] = face_json(r.face);
    j["coordinates"] = point_json(r.point);
    j["residual"] = r.residual;
    j["classification"] = to_string(r.classification);
    return j;
}

inline nlohmann::json transversality_json(const TransversalityReport& r) {
    nlohmann::json minors = nlohmann::json::array();
    for (const auto& [order, det] : r.minors) minors.push_back({{"order", order}, {"determinant", det}});
    return {{"transversal", r.transversal}, {"minors", minors}, {"tolerance", r.tolerance_used}};
}

inline nlohmann::json empirical_json(const EmpiricalSummary& s) {
    return {{"verdict", to_string(s.verdict)},
            {"trials", s.trials},
            {"confirming", s.confirming},
            {"witnesses", s.witnesses}};
}

inline nlohmann::json classification_json(const ClassifyResult& r, const std::string& digest) {
    nlohmann::json j;
    j["operator_digest"] = digest;
    j["transversal"] = transversality_json(r.transversal);
    nlohmann::json edges = nlohmann::json::array();
    for (int i = 0; i < r.tournament.dim(); ++i)
        for (int k = 0; k < r.tournament.dim(); ++k)
            if (k != i && r.tournament.beats(i, k))
                edges.push_back(std::to_string(i + 1) + "->" + std::to_string(k + 1));
    j["tournament_edges"] = std::move(edges);
    if (r.three_cycle) {
        j["three_cycle"] = {(*r.three_cycle)[0] + 1, (*r.three_cycle)[1] + 1, (*r.three_cycle)[2] + 1};
    } else {
        j["three_cycle"] = nullptr;
    }
    j["transitive"] = r.transitive;
    j["regular_by_theorem"] = r.regular_by_theorem;
    nlohmann::json fps = nlohmann::json::array();
    for (const auto& f : r.fixed_points) fps.push_back(fixed_point_json(f));
    j["fixed_points"] = std::move(fps);
    j["empirical"] = {{"regularity", empirical_json(r.regularity)},
                      {"ergodic_principle", empirical_json(r.ergodic_principle)},
                      {"condition_iv", empirical_json(r.condition_iv)}};
    j["trial_budget"] = {{"starts", r.budget.starts},
                         {"pairs", r.budget.pairs},
                         {"max_steps", r.budget.max_steps},
                         {"eps", r.budget.eps},
                         {"window", r.budget.window},
                         {"stride", r.budget.stride},
                         {"seed", r.budget.seed}};
    j["consistency_ok"] = r.consistency_ok;
    return j;
}

inline nlohmann::json fixed_points_report_json(const std::vector<FixedPointRecord>& fps) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& f : fps) arr.push_back(fixed_point_json(f));
    return {{"fixed_points", std::move(arr)}};
}

} // namespace qso::io
