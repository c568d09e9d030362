// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stickymc/montecarlo.hpp"

namespace stickymc {

/// Declarative description of one convergence study: a named problem, a
/// scheme, and a grid of (step size, sample count) pairs run under one
/// master seed.
struct StudyConfig {
    std::string name = "study";
    std::string problem = "benchmark";   // "benchmark" or "constant"
    double radius = 1.25;                // benchmark disk radius
    double constant_value = 10.0;        // K for the constant problem
    double t0 = 0.0;
    Vec x0 = Vec{0.0, 1.0};              // evaluation point
    Scheme scheme = Scheme::sticky_euler;
    std::vector<double> steps;                  // h grid
    std::vector<std::uint64_t> samples;         // M per h (zipped)
    std::uint64_t seed = 1;
    unsigned workers = 0;                // 0 = hardware concurrency
    double halfwidth_multiplier = 2.0;
    FinalStepCorrection correction = FinalStepCorrection::proof;
    std::optional<double> reference;     // overrides the exact solution
    /// Wall-clock column is written as 0 unless enabled, keeping output
    /// files byte-identical across reruns of the same configuration.
    bool record_wall_time = false;
    std::string out_path;                // CSV destination ("" = skip)
    std::string plot_path;               // log-log plot data ("" = skip)
};

/// One per-h row of a convergence table.
struct ConvergenceRow {
    double h = 0.0;
    std::uint64_t samples = 0;
    double estimate = 0.0;
    double halfwidth = 0.0;
    double error = 0.0;  // |estimate - reference|
    double avg_hits = 0.0;
    double avg_steps = 0.0;
    double wall_time_s = 0.0;
};

/// Ordinary least squares of ln(error) on ln(h).
struct OrderFit {
    double slope = 0.0;  // empirical weak order
    double intercept = 0.0;
    double max_residual = 0.0;
};

struct StudyResult {
    std::vector<ConvergenceRow> rows;  // ordered by descending h
    double reference = 0.0;
    std::string reference_source;  // "exact", "user" or "self-finest"
};

/// Instantiates the study's named problem.
Problem make_study_problem(const StudyConfig& config);

/// Runs the estimator once per (h, M) pair. Rows come back ordered by
/// descending h and are deterministic for a fixed seed.
StudyResult run_study(const StudyConfig& config);

/// Fits ln(error) = slope * ln(h) + intercept. Requires at least two rows,
/// all with strictly positive error.
OrderFit fit_order(const std::vector<ConvergenceRow>& rows);

/// CSV with the exact header
///   h,M,estimate,halfwidth,error,avg_hits,avg_steps,wall_time_s
/// one row per grid point, 6 decimal places, '\n' newlines, no BOM.
void write_csv(const std::vector<ConvergenceRow>& rows,
               const std::string& path);

/// Log-log plot data: a metadata comment line (scheme, seed, variant,
/// reference) followed by ln_h,ln_error,fit_ln_error columns.
void write_plot_data(const std::vector<ConvergenceRow>& rows,
                     const OrderFit& fit, const StudyConfig& config,
                     double reference, const std::string& reference_source,
                     const std::string& path);

/// Parses an INI-style study file: one [section] per study, flat
/// key = value lines, '#' or ';' comments. Configuration mistakes raise
/// config_error with the offending field path.
std::vector<StudyConfig> parse_study_file(const std::string& path);

/// Same parser over an already-loaded text buffer.
std::vector<StudyConfig> parse_study_text(const std::string& text,
                                          const std::string& origin);

} // namespace stickymc
