// Command-line surface over the library: classify, simulate, random,
// counterexample, fixed-points. Exit codes: 0 ok, 2 input error,
// 3 consistency violation (the theorem cross-check failed, i.e. a bug),
// 4 sampling budget exceeded, 5 unsupported scope.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qso/dynamics.hpp"
#include "qso/io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitInconsistent = 3;
constexpr int kExitSamplingBudget = 4;
constexpr int kExitUnsupported = 5;

std::vector<double> parse_csv_numbers(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        const double v = std::stod(item, &pos);
        if (pos != item.size()) throw qso::io::ParseError("bad number: " + item);
        out.push_back(v);
    }
    return out;
}

/// --x0 accepts "0.3,0.3,0.4" or "face:1,2,3" (1-based indices, seeded draw).
qso::SimplexPoint parse_x0(const std::string& spec, int m, std::uint64_t seed) {
    if (spec.rfind("face:", 0) == 0) {
        std::vector<int> face;
        for (double v : parse_csv_numbers(spec.substr(5))) face.push_back(static_cast<int>(v) - 1);
        return qso::sample_uniform(m, face, seed);
    }
    return qso::make_point(parse_csv_numbers(spec));
}

std::string cesaro_path_for(const std::string& trajectory_path) {
    const std::string suffix = ".csv";
    if (trajectory_path.size() > suffix.size() &&
        trajectory_path.compare(trajectory_path.size() - suffix.size(), suffix.size(), suffix) == 0)
        return trajectory_path.substr(0, trajectory_path.size() - suffix.size()) + ".cesaro.csv";
    return trajectory_path + ".cesaro.csv";
}

int cmd_classify(const std::string& input, const std::string& output, qso::TrialBudget budget) {
    const qso::VolterraMatrix v = qso::io::load_volterra(input);
    const auto result = qso::classify_operator(v, budget);
    const std::string digest = qso::io::operator_digest(qso::io::Operator{v});
    const std::string text = qso::io::classification_json(result, digest).dump(2) + "\n";
    if (output.empty()) {
        std::cout << text;
    } else {
        qso::io::save_text_atomic(output, text);
    }
    std::cerr << "transitive=" << (result.transitive ? "true" : "false")
              << " fixed_points=" << result.fixed_points.size()
              << " consistency_ok=" << (result.consistency_ok ? "true" : "false") << "\n";
    return result.consistency_ok ? kExitOk : kExitInconsistent;
}

int cmd_simulate(const std::string& input, const std::string& x0_spec, const std::string& output,
                 long long iters, double eps, int window, long long stride, int cesaro_order,
                 std::uint64_t seed) {
    const qso::VolterraMatrix v = qso::io::load_volterra(input);
    const qso::SimplexPoint x0 = parse_x0(x0_spec, v.dim(), seed);

    qso::IterateOptions opt;
    opt.max_steps = iters;
    opt.eps = eps;
    opt.window = window;
    opt.stride = stride;

    std::vector<qso::io::CesaroSample> cesaro_samples;
    if (cesaro_order >= 1) {
        // run the trajectory once more with streaming averages at each stride
        qso::VolterraFlow flow(v, x0, opt.support_floor_log);
        qso::CesaroAccumulator acc(cesaro_order, v.dim());
        for (long long n = 1; n <= iters; ++n) {
            flow.advance();
            acc.absorb(flow.probabilities());
            if (n % stride == 0 || n == iters)
                for (int j = 1; j <= cesaro_order; ++j)
                    cesaro_samples.push_back({n, j, acc.raw_mean(j)});
        }
    }

    const auto rep = qso::iterate(v, x0, opt);
    if (!output.empty()) {
        qso::io::save_text_atomic(output, qso::io::trajectory_csv(rep.sampled_states));
        if (cesaro_order >= 1)
            qso::io::save_text_atomic(cesaro_path_for(output), qso::io::cesaro_csv(cesaro_samples));
    }
    std::cout << "verdict=" << qso::to_string(rep.verdict) << " steps=" << rep.steps_run
              << " max_late_step=" << qso::io::fmt17(rep.max_late_step);
    if (rep.limit_candidate) {
        std::cout << " limit=";
        for (int i = 0; i < rep.limit_candidate->dim(); ++i)
            std::cout << (i ? "," : "") << qso::io::fmt17((*rep.limit_candidate)[i]);
        std::cout << " residual=" << qso::io::fmt17(*rep.limit_residual);
    }
    if (rep.support_floor_engaged) std::cout << " support_floor_engaged=true";
    std::cout << "\n";
    return kExitOk;
}

int cmd_random(int m, std::uint64_t seed, const std::string& output,
               std::optional<bool> require_transitive) {
    if (m < 2 || m > 20) {
        std::cerr << "random: m must lie in [2, 20]\n";
        return kExitInput;
    }
    int tournament_rejections = 0;
    for (std::uint64_t attempt = 0;; ++attempt) {
        if (attempt >= 1000) {
            std::cerr << "random: no tournament of the requested kind in 1000 transversal samples\n";
            return kExitSamplingBudget;
        }
        auto [matrix, rejections] = qso::random_transversal(m, qso::detail::mix_seed(seed, attempt));
        if (require_transitive) {
            const bool transitive = qso::is_transitive(qso::extract_tournament(matrix));
            if (transitive != *require_transitive) {
                ++tournament_rejections;
                continue;
            }
        }
        const std::string text = qso::io::operator_text(qso::io::Operator{matrix});
        if (output.empty()) std::cout << text;
        else qso::io::save_text_atomic(output, text);
        std::cerr << "transversality_rejections=" << rejections
                  << " tournament_rejections=" << tournament_rejections << "\n";
        return kExitOk;
    }
}

int cmd_counterexample(const std::string& output) {
    const std::string text = qso::io::operator_text(qso::io::Operator{qso::counterexample_operator()});
    if (output.empty()) std::cout << text;
    else qso::io::save_text_atomic(output, text);
    return kExitOk;
}

int cmd_fixed_points(const std::string& input, const std::string& output,
                     std::optional<int> period, double grid_step) {
    const qso::VolterraMatrix v = qso::io::load_volterra(input);
    if (period && v.dim() != 3) {
        std::cerr << "fixed-points: periodic search is only supported for m = 3\n";
        return kExitUnsupported;
    }
    auto report = qso::io::fixed_points_report_json(qso::enumerate_fixed_points(v));
    if (period) {
        if (*period != 2 && *period != 3) {
            std::cerr << "fixed-points: period must be 2 or 3\n";
            return kExitUnsupported;
        }
        const auto pts = qso::find_periodic_points(v, *period, grid_step);
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& p : pts) arr.push_back(qso::io::point_json(p));
        report["periodic"] = {{"period", *period}, {"grid_step", grid_step}, {"points", std::move(arr)}};
    }
    const std::string text = report.dump(2) + "\n";
    if (output.empty()) std::cout << text;
    else qso::io::save_text_atomic(output, text);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quadratic stochastic Volterra operators on the simplex: "
                 "classification, fixed points, trajectory simulation"};
    app.require_subcommand(1);

    std::string input, output, x0_spec;
    long long iters = 100000, stride = 1000;
    double eps = 1e-9, grid_step = 0.02;
    int window = 100, cesaro_order = 0, m = 3;
    std::uint64_t seed = 0;
    int starts = 10, pairs = 10;
    std::optional<int> period;
    bool flag_transitive = false, flag_non_transitive = false;

    auto* classify = app.add_subcommand("classify", "full report for a Volterra operator file");
    classify->add_option("--input", input)->required();
    classify->add_option("--output", output);
    classify->add_option("--iters", iters);
    classify->add_option("--eps", eps);
    classify->add_option("--window", window);
    classify->add_option("--stride", stride);
    classify->add_option("--seed", seed);
    classify->add_option("--starts", starts);
    classify->add_option("--pairs", pairs);

    auto* simulate = app.add_subcommand("simulate", "iterate one trajectory, export CSV");
    simulate->add_option("--input", input)->required();
    simulate->add_option("--x0", x0_spec)->required();
    simulate->add_option("--output", output);
    simulate->add_option("--iters", iters);
    simulate->add_option("--eps", eps);
    simulate->add_option("--window", window);
    simulate->add_option("--stride", stride);
    simulate->add_option("--cesaro-order", cesaro_order);
    simulate->add_option("--seed", seed);

    auto* random = app.add_subcommand("random", "write a random transversal operator");
    random->add_option("--m", m);
    random->add_option("--seed", seed);
    random->add_option("--output", output);
    random->add_flag("--require-transitive", flag_transitive);
    random->add_flag("--require-non-transitive", flag_non_transitive);

    auto* counter = app.add_subcommand("counterexample", "write the canonical counterexample operator");
    counter->add_option("--output", output);

    auto* fixed = app.add_subcommand("fixed-points", "enumerate fixed points; optional periodic search");
    fixed->add_option("--input", input)->required();
    fixed->add_option("--output", output);
    fixed->add_option("--period", period);
    fixed->add_option("--grid-step", grid_step);

    CLI11_PARSE(app, argc, argv);

    try {
        if (classify->parsed()) {
            qso::TrialBudget budget;
            budget.starts = starts;
            budget.pairs = pairs;
            budget.max_steps = iters;
            budget.eps = eps;
            budget.window = window;
            budget.stride = stride;
            budget.seed = seed;
            return cmd_classify(input, output, budget);
        }
        if (simulate->parsed())
            return cmd_simulate(input, x0_spec, output, iters, eps, window, stride, cesaro_order, seed);
        if (random->parsed()) {
            std::optional<bool> req;
            if (flag_transitive && flag_non_transitive) {
                std::cerr << "random: choose at most one of --require-transitive/--require-non-transitive\n";
                return kExitInput;
            }
            if (flag_transitive) req = true;
            if (flag_non_transitive) req = false;
            return cmd_random(m, seed, output, req);
        }
        if (counter->parsed()) return cmd_counterexample(output);
        if (fixed->parsed()) return cmd_fixed_points(input, output, period, grid_step);
    } catch (const qso::SamplingBudgetExceededError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSamplingBudget;
    } catch (const qso::UnsupportedDimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUnsupported;
    } catch (const qso::UnsupportedPeriodError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUnsupported;
    } catch (const qso::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
