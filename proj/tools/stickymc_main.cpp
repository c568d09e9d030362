// SPDX-License-Identifier: Apache-2.0
//
// Command line driver for convergence studies: runs the Monte Carlo
// estimator over an h-grid, prints a per-row table, and writes CSV and
// log-log plot data.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "stickymc/study.hpp"

namespace {

int run_one(stickymc::StudyConfig config) {
    using namespace stickymc;

    if (const char* env = std::getenv("STICKYMC_SEED")) {
        config.seed = std::strtoull(env, nullptr, 10);
    }
    if (const char* env = std::getenv("STICKYMC_WORKERS")) {
        config.workers = static_cast<unsigned>(std::strtoul(env, nullptr, 10));
    }

    const StudyResult result = run_study(config);

    std::printf("study %s: problem=%s scheme=%s seed=%llu variant=%s "
                "reference=%.9f (%s)\n",
                config.name.c_str(), config.problem.c_str(),
                scheme_name(config.scheme),
                static_cast<unsigned long long>(config.seed),
                correction_name(config.correction), result.reference,
                result.reference_source.c_str());
    std::printf("%10s %10s %12s %12s %12s %9s %10s\n", "h", "M", "estimate",
                "halfwidth", "error", "avg_hits", "avg_steps");
    for (const ConvergenceRow& r : result.rows) {
        std::printf("%10.6f %10llu %12.6f %12.6f %12.6f %9.3f %10.2f\n", r.h,
                    static_cast<unsigned long long>(r.samples), r.estimate,
                    r.halfwidth, r.error, r.avg_hits, r.avg_steps);
    }

    bool have_fit = false;
    OrderFit fit;
    if (result.rows.size() >= 2) {
        bool positive = true;
        for (const ConvergenceRow& r : result.rows) positive &= r.error > 0.0;
        if (positive) {
            fit = fit_order(result.rows);
            have_fit = true;
            std::printf("empirical order: slope=%.4f intercept=%.4f "
                        "max_residual=%.4f\n",
                        fit.slope, fit.intercept, fit.max_residual);
        }
    }

    if (!config.out_path.empty()) {
        write_csv(result.rows, config.out_path);
        std::printf("wrote %s\n", config.out_path.c_str());
    }
    if (!config.plot_path.empty()) {
        if (!have_fit) {
            throw error("plot output requires at least two rows with "
                        "positive error");
        }
        write_plot_data(result.rows, fit, config, result.reference,
                        result.reference_source, config.plot_path);
        std::printf("wrote %s\n", config.plot_path.c_str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo solver for parabolic problems with sticky "
                 "boundary conditions"};
    app.set_help_flag("--help", "Print usage and exit");  // frees -h for --h
    app.get_formatter()->column_width(34);

    std::string config_path;
    app.add_option("--config", config_path,
                   "Study file (INI sections; exclusive with inline flags)");

    stickymc::StudyConfig inline_config;
    inline_config.name = "cli";
    std::string scheme = "sticky-euler";
    std::string variant = "proof";
    std::vector<double> x0;
    double reference = 0.0;

    auto* problem = app.add_option("--problem", inline_config.problem,
                                   "Named problem: benchmark | constant");
    app.add_option("--radius", inline_config.radius, "Benchmark disk radius");
    app.add_option("--constant-value", inline_config.constant_value,
                   "Constant-problem solution value K");
    app.add_option("--t0", inline_config.t0, "Start time");
    app.add_option("--x0", x0, "Evaluation point coordinates")
        ->expected(1, stickymc::kMaxDim);
    app.add_option("--scheme", scheme, "sticky-euler | projected-euler");
    app.add_option("--h", inline_config.steps, "Step sizes (descending h grid)");
    app.add_option("--samples", inline_config.samples,
                   "Trajectories per step size (single value broadcasts)");
    app.add_option("--seed", inline_config.seed, "Master seed");
    app.add_option("--workers", inline_config.workers,
                   "Worker threads (0 = hardware)");
    app.add_option("--halfwidth-multiplier",
                   inline_config.halfwidth_multiplier,
                   "Confidence halfwidth multiplier k");
    app.add_option("--variant", variant,
                   "Terminal-step correction: listing | proof");
    auto* ref_opt = app.add_option("--reference", reference,
                                   "Reference value for the error column");
    app.add_flag("--timings", inline_config.record_wall_time,
                 "Record wall-clock times (breaks byte-identical reruns)");
    app.add_option("--out", inline_config.out_path, "CSV output path");
    app.add_option("--plot", inline_config.plot_path,
                   "Log-log plot data output path");

    CLI11_PARSE(app, argc, argv);

    try {
        std::vector<stickymc::StudyConfig> studies;
        if (!config_path.empty()) {
            if (*problem || !inline_config.steps.empty()) {
                throw stickymc::config_error(
                    "--config cannot be combined with inline study flags");
            }
            studies = stickymc::parse_study_file(config_path);
        } else {
            inline_config.scheme = stickymc::parse_scheme(scheme);
            inline_config.correction = stickymc::parse_correction(variant);
            if (!x0.empty()) {
                stickymc::Vec v = stickymc::Vec::zeros(static_cast<int>(x0.size()));
                for (std::size_t i = 0; i < x0.size(); ++i) {
                    v[static_cast<int>(i)] = x0[i];
                }
                inline_config.x0 = v;
            }
            if (*ref_opt) inline_config.reference = reference;
            if (inline_config.samples.size() == 1 &&
                inline_config.steps.size() > 1) {
                inline_config.samples.assign(inline_config.steps.size(),
                                             inline_config.samples[0]);
            }
            if (inline_config.samples.empty()) {
                inline_config.samples.assign(inline_config.steps.size(),
                                             100000);
            }
            studies.push_back(inline_config);
        }
        for (const stickymc::StudyConfig& c : studies) run_one(c);
        return 0;
    } catch (const stickymc::config_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
