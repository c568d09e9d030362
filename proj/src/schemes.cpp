// SPDX-License-Identifier: Apache-2.0
#include "stickymc/schemes.hpp"

#include <cmath>
#include <string>

namespace stickymc {

namespace {

void check_step(double h) {
    if (!(h > 0.0 && h < 1.0)) {
        throw contract_error("step size h must lie in (0, 1)");
    }
}

void check_start(const Problem& p, double t0, const Vec& x0) {
    if (!(t0 < p.horizon)) {
        throw contract_error("trajectory start time must precede the horizon");
    }
    if (p.domain.classify(x0) != Region::interior) {
        throw contract_error("trajectory must start strictly inside the domain");
    }
}

std::uint64_t step_budget(double t0, double horizon, double h, double factor) {
    const double nominal = (horizon - t0) / h;
    return static_cast<std::uint64_t>(factor * nominal) + 16;
}

} // namespace

AuxState euler_aux_step(const ChainState& state, const Problem& p, double h,
                        const Vec& xi) {
    check_step(h);
    AuxState aux;
    aux.leg_t0 = std::isnan(state.leg_t0) ? state.t : state.leg_t0;
    aux.leg_steps = std::isnan(state.leg_t0) ? 1 : state.leg_steps + 1;
    aux.t = aux.leg_t0 + static_cast<double>(aux.leg_steps) * h;
    aux.x = state.x + p.drift(state.t, state.x) * h +
            p.sigma(state.t, state.x) * xi * std::sqrt(h);
    const double c = p.potential(state.t, state.x);
    const double g = p.source(state.t, state.x);
    aux.y = state.y + h * c * state.y;
    aux.z = state.z + h * g * state.y;
    return aux;
}

StickyStepResult sticky_step(const ChainState& state, const Problem& p,
                             double h, const Vec& xi,
                             FinalStepCorrection correction) {
    const double T = p.horizon;
    if (!(state.t < T)) {
        throw contract_error("sticky_step: chain already reached the horizon");
    }
    const AuxState aux = euler_aux_step(state, p, h, xi);
    const double yk = state.y;

    if (p.domain.classify(aux.x) == Region::interior) {
        if (aux.t < T) {
            ChainState next;
            next.t = aux.t;
            next.x = aux.x;
            next.y = aux.y;
            next.z = aux.z;
            next.hits = state.hits;
            next.steps = state.steps + 1;
            next.leg_t0 = aux.leg_t0;
            next.leg_steps = aux.leg_steps;
            return {next, StickyCase::advance_interior};
        }
        TrajectoryResult out;
        out.t = T;
        out.x = aux.x;
        out.y = aux.y;
        out.z = aux.z;
        out.steps = state.steps + 1;
        out.hits = state.hits;
        return {out, StickyCase::finish_interior};
    }

    // Candidate left the closure (or sits on the boundary): reflect it
    // across the nearest boundary point and account for the sticky dwell.
    const Projection proj = p.domain.nearest_boundary(aux.x);
    const double r = proj.distance;
    const Vec& foot = proj.foot;
    const double mu = p.stickiness(foot);
    const Vec x_reflected = aux.x + proj.inward_normal * (2.0 * r);

    if (aux.t < T) {
        const double dwell = 2.0 * r * mu;
        if (dwell < 0.0) {
            throw contract_error("sticky_step: negative boundary dwell; "
                                 "stickiness must be nonnegative");
        }
        const double t_check = aux.t + dwell;
        if (t_check < T) {
            // Reflect in space around the foot and in time around the
            // midpoint of the dwell; weights absorb one unit of local
            // time 2r and boundary-clock time 2 r mu.
            const double t_mid = aux.t + r * mu;
            const double gam = p.absorption(t_mid, foot);
            const double c = p.potential(t_mid, foot);
            const double g = p.source(t_mid, foot);
            const double psi = p.boundary_datum(t_mid, foot);
            const double w = gam + mu * c;

            ChainState next;
            next.t = t_check;
            next.x = x_reflected;
            next.y = aux.y + yk * 2.0 * r * w * (1.0 + r * w);
            next.z = aux.z + yk * 2.0 * r * (mu * g - psi) * (1.0 + r * w);
            next.hits = state.hits + 1;
            next.steps = state.steps + 1;
            next.leg_t0 = t_check;  // dwell moved the clock off the grid
            next.leg_steps = 0;
            return {next, StickyCase::advance_reflected};
        }

        // Dwell would cross the horizon: stop at T and spend only the
        // remaining boundary-clock time 2 p mu = T - t'. The branch is
        // reachable only with 2 r mu >= T - t' > 0, hence mu > 0.
        const double pcorr = (T - aux.t) / (2.0 * mu);
        const double gam = p.absorption(T, foot);
        const double c = p.potential(T, foot);
        const double g = p.source(T, foot);
        const double psi = p.boundary_datum(T, foot);
        const double aphi = p.terminal_generator(T, foot);

        TrajectoryResult out;
        out.t = T;
        out.x = x_reflected;
        if (correction == FinalStepCorrection::listing) {
            out.y = aux.y + yk * (2.0 * r * gam - 2.0 * pcorr * mu * c);
            out.z = aux.z + yk * (-2.0 * mu * (r - pcorr) * aphi -
                                  2.0 * pcorr * mu * g - 2.0 * r * psi);
        } else {
            // One-step-consistent signs on the clipped-dwell potential and
            // source terms; the pair cancels the expansion of u around
            // (T, foot) with no leftover of order sqrt(h).
            out.y = aux.y + yk * (2.0 * r * gam + 2.0 * pcorr * mu * c);
            out.z = aux.z + yk * (-2.0 * mu * (r - pcorr) * aphi +
                                  2.0 * pcorr * mu * g - 2.0 * r * psi);
        }
        out.steps = state.steps + 1;
        out.hits = state.hits + 1;
        return {out, StickyCase::finish_reflected};
    }

    // Candidate crossed both the lateral boundary and the horizon.
    const double gam = p.absorption(T, foot);
    const double psi = p.boundary_datum(T, foot);
    const double aphi = p.terminal_generator(T, foot);

    TrajectoryResult out;
    out.t = T;
    out.x = x_reflected;
    out.y = aux.y + yk * 2.0 * r * gam * (1.0 + r * gam);
    out.z = aux.z - yk * 2.0 * r * (mu * aphi + psi) * (1.0 + r * gam);
    out.steps = state.steps + 1;
    out.hits = state.hits + 1;
    return {out, StickyCase::finish_exterior};
}

TrajectoryResult sticky_trajectory(const Problem& p, double t0, const Vec& x0,
                                   double h, RngStream& stream,
                                   FinalStepCorrection correction,
                                   const TrajectoryOptions& limits) {
    check_step(h);
    check_start(p, t0, x0);
    const std::uint64_t budget =
        step_budget(t0, p.horizon, h, limits.step_budget_factor);
    const int d = p.domain.dim();

    ChainState state;
    state.t = t0;
    state.x = x0;
    for (;;) {
        const Vec xi = rademacher_vector(stream, d);
        StickyStepResult step = sticky_step(state, p, h, xi, correction);
        if (step.terminated()) return step.result();
        state = step.next();
        if (state.steps > budget) {
            throw runaway_error("sticky_trajectory: step budget exceeded after " +
                                std::to_string(state.steps) + " steps");
        }
    }
}

ChainState projected_step(const ChainState& state, const Problem& p, double h,
                          const Vec& xi) {
    if (p.domain.classify(state.x) != Region::exterior) {
        const AuxState aux = euler_aux_step(state, p, h, xi);
        ChainState next;
        next.t = aux.t;
        next.x = aux.x;
        next.y = aux.y;
        next.z = aux.z;
        next.hits = state.hits;
        next.steps = state.steps + 1;
        next.leg_t0 = aux.leg_t0;
        next.leg_steps = aux.leg_steps;
        return next;
    }

    const Projection proj = p.domain.nearest_boundary(state.x);
    const double r = proj.distance;
    const Vec& foot = proj.foot;
    const double mu = p.stickiness(foot);
    const double gam = p.absorption(state.t, foot);
    const double c = p.potential(state.t, foot);
    const double g = p.source(state.t, foot);
    const double psi = p.boundary_datum(state.t, foot);

    ChainState next;
    next.t = state.t + r * mu;
    if (next.t < state.t) {
        throw contract_error("projected_step: negative boundary dwell; "
                             "stickiness must be nonnegative");
    }
    next.x = foot;
    next.y = state.y + r * gam * state.y + r * mu * c * state.y;
    next.z = state.z - r * psi * state.y + r * mu * g * state.y;
    next.hits = state.hits + 1;
    next.steps = state.steps + 1;
    next.leg_t0 = next.t;
    next.leg_steps = 0;
    return next;
}

TrajectoryResult projected_trajectory(const Problem& p, double t0,
                                      const Vec& x0, double h,
                                      RngStream& stream,
                                      const TrajectoryOptions& limits) {
    check_step(h);
    check_start(p, t0, x0);
    const std::uint64_t budget =
        step_budget(t0, p.horizon, h, limits.step_budget_factor);
    const int d = p.domain.dim();

    ChainState state;
    state.t = t0;
    state.x = x0;
    while (state.t <= p.horizon) {
        const Vec xi = rademacher_vector(stream, d);
        state = projected_step(state, p, h, xi);
        if (state.steps > budget) {
            throw runaway_error(
                "projected_trajectory: step budget exceeded after " +
                std::to_string(state.steps) + " steps");
        }
    }

    TrajectoryResult out;
    out.t = state.t;
    out.x = state.x;
    out.y = state.y;
    out.z = state.z;
    out.steps = state.steps;
    out.hits = state.hits;
    return out;
}

double payoff(const TrajectoryResult& result, const Problem& p) {
    return p.terminal(result.x) * result.y + result.z;
}

} // namespace stickymc
