// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <variant>

#include "stickymc/problem.hpp"
#include "stickymc/rng.hpp"

namespace stickymc {

/// One trajectory's discrete chain state: time, position, multiplicative
/// weight Y and additive accumulator Z, plus diagnostic counters.
///
/// Between boundary events the clock advances on an exact h-grid. The leg
/// fields record the origin of the current constant-step leg so that the
/// k-th interior time is computed as leg_t0 + k * h (one rounding) rather
/// than by accumulation; without this, chains that never touch the
/// boundary can land one ulp short of the horizon and take a spurious
/// extra step. A NaN leg origin means "leg starts at t".
struct ChainState {
    double t = 0.0;
    Vec x;
    double y = 1.0;
    double z = 0.0;
    std::uint64_t hits = 0;   // boundary excursions so far
    std::uint64_t steps = 0;  // chain steps so far
    double leg_t0 = std::numeric_limits<double>::quiet_NaN();
    std::uint64_t leg_steps = 0;
};

/// Candidate state after one unconstrained Euler step of size h.
struct AuxState {
    double t = 0.0;  // state.t + h, evaluated on the leg grid
    Vec x;
    double y = 0.0;
    double z = 0.0;
    double leg_t0 = 0.0;
    std::uint64_t leg_steps = 0;
};

/// Terminal data of one trajectory.
struct TrajectoryResult {
    double t = 0.0;  // exactly T for the sticky scheme; >= T for projected
    Vec x;
    double y = 1.0;
    double z = 0.0;
    std::uint64_t steps = 0;  // chi
    std::uint64_t hits = 0;
};

/// Which branch a sticky step took. The five branches partition every
/// step: exactly one fires.
enum class StickyCase {
    advance_interior,    // t' < T, x' inside:        accept candidate
    finish_interior,     // t' >= T, x' inside:       terminate at T
    advance_reflected,   // t' < T, x' out, t'' < T:  reflect and stick
    finish_reflected,    // t' < T, x' out, t'' >= T: terminate at T
    finish_exterior      // t' >= T, x' out:          terminate at T
};

/// Terminal-step variant for the finish_reflected branch. The variants
/// differ in the signs of the clipped-dwell potential and source terms.
/// `proof` keeps the one-step expansion defect at O(h) and is the
/// default; `listing` is retained for comparison runs and degrades the
/// empirical order on problems with active potential or source terms.
/// The choice is recorded in study output metadata.
enum class FinalStepCorrection { listing, proof };

/// Safety limits for a single trajectory.
struct TrajectoryOptions {
    /// A trajectory taking more than step_budget_factor * (T - t0) / h
    /// steps raises runaway_error: the schemes advance time by at least h
    /// per interior step, so exceeding the budget means a bug, not noise.
    double step_budget_factor = 10.0;
};

/// Result of a single sticky step: either the chain continues or the
/// trajectory terminated at the horizon.
struct StickyStepResult {
    std::variant<ChainState, TrajectoryResult> value;
    StickyCase branch;

    bool terminated() const {
        return std::holds_alternative<TrajectoryResult>(value);
    }
    const ChainState& next() const { return std::get<ChainState>(value); }
    const TrajectoryResult& result() const {
        return std::get<TrajectoryResult>(value);
    }
};

/// Unconstrained Euler candidate:
///   x' = x + h b(t, x) + sqrt(h) sigma(t, x) xi,   t' = t + h,
///   y' = y + h c(t, x) y,                          z' = z + h g(t, x) y.
AuxState euler_aux_step(const ChainState& state, const Problem& p, double h,
                        const Vec& xi);

/// One step of the first-order sticky scheme. Dispatches the Euler
/// candidate across the five branches; boundary excursions reflect the
/// candidate across the nearest boundary point and advance time by the
/// sticky dwell 2 r mu.
StickyStepResult sticky_step(const ChainState& state, const Problem& p,
                             double h, const Vec& xi,
                             FinalStepCorrection correction =
                                 FinalStepCorrection::proof);

/// Full sticky trajectory from (t0, x0); terminates exactly at t = T.
TrajectoryResult sticky_trajectory(const Problem& p, double t0, const Vec& x0,
                                   double h, RngStream& stream,
                                   FinalStepCorrection correction =
                                       FinalStepCorrection::proof,
                                   const TrajectoryOptions& limits = {});

/// One step of the half-order projected scheme: Euler step from inside
/// the closure, projection onto the boundary from outside (with the
/// sticky time advance r mu and the matching weight updates).
ChainState projected_step(const ChainState& state, const Problem& p, double h,
                          const Vec& xi);

/// Full projected trajectory; loops while t <= T, so the terminal time
/// may overshoot the horizon by at most max(h, r mu).
TrajectoryResult projected_trajectory(const Problem& p, double t0,
                                      const Vec& x0, double h,
                                      RngStream& stream,
                                      const TrajectoryOptions& limits = {});

/// Estimator payoff phi(x_chi) y_chi + z_chi. The terminal condition is
/// evaluated by its formula even when x_chi sits marginally outside the
/// domain (projected-scheme overshoot).
double payoff(const TrajectoryResult& result, const Problem& p);

} // namespace stickymc
