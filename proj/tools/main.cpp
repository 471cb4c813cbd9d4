#include <cstdint>
#include <cstdio>
#include <exception>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fractalcomp/experiment.hpp"
#include "fractalcomp/quadrature.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Downlink small-cell cooperation: Monte Carlo simulator and quadrature evaluator"};

    std::string experiment, config_path, out_dir, engines;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    app.add_option("--experiment", experiment,
                   "preset name: fig2 | fig3 | fig4 | fig5 | table1 | custom");
    app.add_option("--config", config_path, "config file, INI or JSON (see README schema)");
    app.add_option("--out", out_dir, "output directory (default: results)");
    app.add_option("--trials", trials, "Monte Carlo trials per sweep point");
    auto* seed_opt = app.add_option("--seed", seed, "base seed for the counter RNG");
    app.add_option("--engines", engines, "comma list, subset of: mc,analytic");

    auto* cmp = app.add_subcommand("compare", "gate MC results against analytic results");
    std::string mc_csv, an_csv;
    double k_sigma = 3.0;
    cmp->add_option("mc_csv", mc_csv, "CSV produced by the mc engine")->required();
    cmp->add_option("analytic_csv", an_csv, "CSV produced by the analytic engine")->required();
    cmp->add_option("--k-sigma", k_sigma, "MC standard errors allowed on top of quadrature error");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmp->parsed()) {
            const auto report = fractalcomp::compare_files(mc_csv, an_csv, k_sigma);
            for (const auto& row : report.rows)
                std::printf("%s  %s=%s %s: mc %.8g +/- %.3g | analytic %.8g +/- %.3g | gap %.3g tol %.3g\n",
                            row.ok ? "pass" : "FAIL", row.param_name.c_str(),
                            row.param_value.c_str(), row.metric.c_str(), row.mc_value,
                            row.mc_half_width, row.an_value, row.an_half_width, row.gap,
                            row.tolerance);
            std::printf("%d/%d points within tolerance\n", report.n_pass,
                        report.n_pass + report.n_fail);
            return report.ok() ? 0 : 1;
        }

        if (experiment.empty() && config_path.empty()) {
            std::fprintf(stderr, "nothing to do: give --experiment and/or --config\n");
            return 64;
        }

        fractalcomp::ExperimentSpec spec;
        if (!config_path.empty()) spec = fractalcomp::load_config(config_path);
        if (!experiment.empty()) spec.name = experiment;
        if (!out_dir.empty()) spec.output_dir = out_dir;
        if (trials > 0) spec.mc.n_trials = trials;
        if (seed_opt->count() > 0) spec.mc.seed = seed;
        if (!engines.empty()) fractalcomp::set_engines(spec, engines);

        const auto rr = fractalcomp::run(spec);
        for (const auto& m : rr.messages) std::fprintf(stderr, "%s\n", m.c_str());
        std::fprintf(stderr, "summary: %s\n", rr.summary_path.c_str());
        if (!rr.checks_passed) {
            std::fprintf(stderr, "one or more checks failed\n");
            return 2;
        }
        return 0;
    } catch (const fractalcomp::quad::ToleranceError& e) {
        std::fprintf(stderr, "quadrature tolerance not met: %s (achieved %.3g)\n", e.what(),
                     e.achieved);
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
