// Samples random transversal operators until a transitive one appears, then
// shows every trajectory settling onto an enumerated fixed point.

#include <cstdio>

#include "qso/dynamics.hpp"

int main() {
    using namespace qso;
    const int m = 4;

    VolterraMatrix v = random_transversal(m, 1).matrix;
    for (std::uint64_t seed = 2; !is_transitive(extract_tournament(v)); ++seed)
        v = random_transversal(m, seed).matrix;

    std::printf("transitive tournament:\n%s\n", render_edges(extract_tournament(v)).c_str());
    const auto fps = enumerate_fixed_points(v);

    IterateOptions opt;
    opt.max_steps = 1000000;
    for (int s = 0; s < 6; ++s) {
        const auto x0 = sample_uniform(m, {0, 1, 2, 3}, 100 + static_cast<std::uint64_t>(s));
        const auto rep = iterate(v, x0, opt);
        double best = 1e300;
        for (const auto& f : fps) best = std::min(best, distance(f.point, *rep.limit_candidate));
        std::printf("start %d: %s in %lld steps, limit (", s, to_string(rep.verdict), rep.steps_run);
        for (int i = 0; i < m; ++i) std::printf("%s%.6f", i ? ", " : "", (*rep.limit_candidate)[i]);
        std::printf("), distance to fixed-point set %.1e\n", best);
    }
    return 0;
}
