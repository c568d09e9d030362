// SPDX-License-Identifier: Apache-2.0
#include "stickymc/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace stickymc {

namespace {

// Trajectories per reduction block. Block sums are combined in block
// order, which pins the floating-point reduction tree independently of
// how blocks are assigned to workers.
constexpr std::uint64_t kBlockSize = 1024;

/// Neumaier-compensated accumulator.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }

    double value() const { return sum + comp; }
};

struct BlockSums {
    double payoff = 0.0;
    double payoff_sq = 0.0;
    std::uint64_t hits = 0;
    std::uint64_t steps = 0;
};

} // namespace

const char* scheme_name(Scheme s) {
    return s == Scheme::sticky_euler ? "sticky-euler" : "projected-euler";
}

Scheme parse_scheme(const std::string& name) {
    if (name == "sticky-euler") return Scheme::sticky_euler;
    if (name == "projected-euler") return Scheme::projected_euler;
    throw config_error("unknown scheme '" + name +
                       "' (expected sticky-euler or projected-euler)");
}

const char* correction_name(FinalStepCorrection c) {
    return c == FinalStepCorrection::listing ? "listing" : "proof";
}

FinalStepCorrection parse_correction(const std::string& name) {
    if (name == "listing") return FinalStepCorrection::listing;
    if (name == "proof") return FinalStepCorrection::proof;
    throw config_error("unknown final-step-correction '" + name +
                       "' (expected listing or proof)");
}

double confidence_halfwidth(double variance, std::uint64_t samples,
                            double multiplier) {
    if (samples < 1) throw contract_error("confidence_halfwidth: samples >= 1");
    if (variance < 0.0) {
        throw contract_error("confidence_halfwidth: variance must be >= 0");
    }
    return multiplier * std::sqrt(variance / static_cast<double>(samples));
}

Estimate estimate(const Problem& problem, Scheme scheme, double t0,
                  const Vec& x0, double h, std::uint64_t samples,
                  std::uint64_t seed, const EstimateOptions& options) {
    if (samples < 1) throw contract_error("estimate: needs at least one sample");

    const std::uint64_t n_blocks = (samples + kBlockSize - 1) / kBlockSize;
    std::vector<BlockSums> blocks(n_blocks);

    unsigned workers = options.workers;
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(
        std::min<std::uint64_t>(workers, n_blocks));

    std::atomic<std::uint64_t> next_block{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto run_blocks = [&]() {
        try {
            for (;;) {
                const std::uint64_t b = next_block.fetch_add(1);
                if (b >= n_blocks) return;
                const std::uint64_t lo = b * kBlockSize;
                const std::uint64_t hi = std::min(samples, lo + kBlockSize);
                CompensatedSum sum, sum_sq;
                std::uint64_t hits = 0, steps = 0;
                for (std::uint64_t i = lo; i < hi; ++i) {
                    RngStream stream(seed, i);
                    TrajectoryResult r;
                    try {
                        r = (scheme == Scheme::sticky_euler)
                                ? sticky_trajectory(problem, t0, x0, h, stream,
                                                    options.correction)
                                : projected_trajectory(problem, t0, x0, h,
                                                       stream);
                    } catch (const error& e) {
                        throw error("trajectory " + std::to_string(i) + ": " +
                                    e.what());
                    }
                    const double value = payoff(r, problem);
                    sum.add(value);
                    sum_sq.add(value * value);
                    hits += r.hits;
                    steps += r.steps;
                }
                blocks[b] = {sum.value(), sum_sq.value(), hits, steps};
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            next_block.store(n_blocks);  // drain remaining work
        }
    };

    if (workers <= 1) {
        run_blocks();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run_blocks);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    CompensatedSum total, total_sq;
    std::uint64_t hits = 0, steps = 0;
    for (const BlockSums& b : blocks) {
        total.add(b.payoff);
        total_sq.add(b.payoff_sq);
        hits += b.hits;
        steps += b.steps;
    }

    const double m = static_cast<double>(samples);
    Estimate est;
    est.samples = samples;
    est.scheme = scheme;
    est.step = h;
    est.seed = seed;
    est.mean = total.value() / m;
    est.sample_variance =
        samples > 1
            ? std::max(0.0, (total_sq.value() - m * est.mean * est.mean) /
                                (m - 1.0))
            : 0.0;
    est.halfwidth = confidence_halfwidth(est.sample_variance, samples,
                                         options.halfwidth_multiplier);
    est.avg_hits = static_cast<double>(hits) / m;
    est.avg_steps = static_cast<double>(steps) / m;
    return est;
}

} // namespace stickymc
