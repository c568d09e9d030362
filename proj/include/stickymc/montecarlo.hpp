// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "stickymc/schemes.hpp"

namespace stickymc {

enum class Scheme { sticky_euler, projected_euler };

const char* scheme_name(Scheme s);
Scheme parse_scheme(const std::string& name);

const char* correction_name(FinalStepCorrection c);
FinalStepCorrection parse_correction(const std::string& name);

/// Monte Carlo estimate of E[phi(X) Y + Z] with sampling diagnostics.
struct Estimate {
    double mean = 0.0;
    double sample_variance = 0.0;  // unbiased D_M
    double halfwidth = 0.0;        // k * sqrt(D_M / M)
    std::uint64_t samples = 0;     // M
    double avg_hits = 0.0;
    double avg_steps = 0.0;
    Scheme scheme = Scheme::sticky_euler;
    double step = 0.0;  // h
    std::uint64_t seed = 0;
};

struct EstimateOptions {
    /// Worker threads; 0 means one per hardware thread. The result is
    /// bitwise independent of this value.
    unsigned workers = 1;
    double halfwidth_multiplier = 2.0;
    FinalStepCorrection correction = FinalStepCorrection::proof;
};

/// k * sqrt(variance / samples).
double confidence_halfwidth(double variance, std::uint64_t samples,
                            double multiplier);

/// Runs `samples` independent trajectories of the chosen scheme and
/// aggregates mean, sample variance, halfwidth and diagnostic averages.
///
/// Trajectory i draws from the stream (seed, i), and payoffs are reduced
/// in fixed-size blocks in trajectory order with compensated summation,
/// so the estimate is a pure function of (problem, scheme, t0, x0, h,
/// samples, seed) regardless of scheduling or worker count.
Estimate estimate(const Problem& problem, Scheme scheme, double t0,
                  const Vec& x0, double h, std::uint64_t samples,
                  std::uint64_t seed, const EstimateOptions& options = {});

} // namespace stickymc
