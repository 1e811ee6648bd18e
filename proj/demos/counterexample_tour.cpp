// Walks through the rock-paper-scissors counterexample: its fixed points,
// the non-convergent trajectory from an interior start, and the swing of the
// running Cesàro means.

#include <cstdio>

#include "qso/dynamics.hpp"
#include "qso/fixed_points.hpp"
#include "qso/operators.hpp"

int main() {
    using namespace qso;
    const auto v = counterexample_operator();

    std::printf("operator: a_12 = %g, a_13 = %g, a_23 = %g\n", v.a(0, 1), v.a(0, 2), v.a(1, 2));
    std::printf("tournament:\n%s", render_edges(extract_tournament(v)).c_str());
    std::printf("transitive: %s\n\n", is_transitive(extract_tournament(v)) ? "yes" : "no");

    std::printf("fixed points:\n");
    for (const auto& r : enumerate_fixed_points(v)) {
        std::printf("  [%s] (", to_string(r.classification));
        for (int i = 0; i < r.point.dim(); ++i) std::printf("%s%.6f", i ? ", " : "", r.point[i]);
        std::printf(")  residual %.1e\n", r.residual);
    }

    IterateOptions opt;
    opt.max_steps = 100000;
    const auto rep = iterate(v, make_point({0.3, 0.3, 0.4}), opt);
    std::printf("\ntrajectory from (0.3, 0.3, 0.4): %s after %lld steps, max late step %.3f\n",
                to_string(rep.verdict), rep.steps_run, rep.max_late_step);

    VolterraFlow flow(v, make_point({0.3, 0.3, 0.4}));
    CesaroAccumulator acc(2, 3);
    std::printf("\n%8s  %-26s %-26s\n", "n", "order-1 mean", "order-2 mean");
    for (long long n = 1; n <= 100000; ++n) {
        flow.advance();
        acc.absorb(flow.probabilities());
        if (n % 20000 == 0) {
            const auto m1 = acc.mean(1), m2 = acc.mean(2);
            std::printf("%8lld  (%.4f, %.4f, %.4f)   (%.4f, %.4f, %.4f)\n", n, m1[0], m1[1], m1[2],
                        m2[0], m2[1], m2[2]);
        }
    }
    std::printf("\nthe means keep drifting: no Cesàro limit either.\n");
    return 0;
}
