// SPDX-License-Identifier: Apache-2.0
#include "stickymc/geometry.hpp"

#include <cmath>
#include <string>

namespace stickymc {

namespace {

constexpr double kRelTol = 1e-9;

double ball_scale(const Ball& b) {
    double m = b.radius;
    for (int i = 0; i < b.center.dim(); ++i) m = std::max(m, std::abs(b.center[i]));
    return 1.0 + m;
}

} // namespace

Domain::Domain() { *this = interval(0.0, 1.0); }

Domain Domain::ball(Vec center, double radius) {
    if (!(radius > 0.0)) throw contract_error("Domain::ball: radius must be > 0");
    const int dim = center.dim();
    const double tol = kRelTol * ball_scale({center, radius});
    return Domain(Ball{center, radius}, dim, tol);
}

Domain Domain::half_space(Vec normal, double offset) {
    const double len = normal.norm();
    if (std::abs(len - 1.0) > 1e-12) {
        throw contract_error("Domain::half_space: normal must have unit length");
    }
    const int dim = normal.dim();
    const double tol = kRelTol * (1.0 + std::abs(offset));
    return Domain(HalfSpace{normal, offset}, dim, tol);
}

Domain Domain::interval(double lo, double hi) {
    if (!(lo < hi)) throw contract_error("Domain::interval: requires lo < hi");
    const double tol = kRelTol * (1.0 + std::max(std::abs(lo), std::abs(hi)));
    return Domain(Interval{lo, hi}, 1, tol);
}

bool Domain::contains(const Vec& x) const {
    require_same_dim(x, dim_, "Domain::contains");
    return std::visit(
        [&](const auto& s) -> bool {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Ball>) {
                return (x - s.center).squared_norm() < s.radius * s.radius;
            } else if constexpr (std::is_same_v<S, HalfSpace>) {
                return s.normal.dot(x) > s.offset;
            } else {
                return x[0] > s.lo && x[0] < s.hi;
            }
        },
        shape_);
}

double Domain::signed_boundary_distance(const Vec& x) const {
    require_same_dim(x, dim_, "Domain::signed_boundary_distance");
    return std::visit(
        [&](const auto& s) -> double {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Ball>) {
                return (x - s.center).norm() - s.radius;
            } else if constexpr (std::is_same_v<S, HalfSpace>) {
                return s.offset - s.normal.dot(x);
            } else {
                return std::max(s.lo - x[0], x[0] - s.hi);
            }
        },
        shape_);
}

Region Domain::classify(const Vec& x) const {
    const double s = signed_boundary_distance(x);
    if (s < -boundary_tol_) return Region::interior;
    if (s > boundary_tol_) return Region::exterior;
    return Region::boundary;
}

double Domain::distance_to_boundary(const Vec& x) const {
    return std::abs(signed_boundary_distance(x));
}

Vec Domain::inward_normal(const Vec& z) const {
    require_same_dim(z, dim_, "Domain::inward_normal");
    if (std::abs(signed_boundary_distance(z)) > boundary_tol_) {
        throw contract_error("Domain::inward_normal: point is not on the boundary");
    }
    return std::visit(
        [&](const auto& s) -> Vec {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, Ball>) {
                const Vec u = s.center - z;
                return u * (1.0 / u.norm());
            } else if constexpr (std::is_same_v<S, HalfSpace>) {
                return s.normal;
            } else {
                // Nearer endpoint decides the direction.
                return Vec{(z[0] - s.lo <= s.hi - z[0]) ? 1.0 : -1.0};
            }
        },
        shape_);
}

Projection Domain::nearest_boundary(const Vec& x) const {
    require_same_dim(x, dim_, "Domain::nearest_boundary");
    const double s = signed_boundary_distance(x);
    Projection p;
    p.distance = std::abs(s);
    std::visit(
        [&](const auto& sh) {
            using S = std::decay_t<decltype(sh)>;
            if constexpr (std::is_same_v<S, Ball>) {
                const Vec u = x - sh.center;
                const double len = u.norm();
                if (len <= boundary_tol_) {
                    throw nonunique_projection_error(
                        "Domain::nearest_boundary: every boundary point of the "
                        "ball is equidistant from its center");
                }
                if (s > sh.radius) {
                    throw nonunique_projection_error(
                        "Domain::nearest_boundary: point lies more than one "
                        "radius outside the ball");
                }
                p.inward_normal = u * (-1.0 / len);
                p.foot = sh.center + u * (sh.radius / len);
            } else if constexpr (std::is_same_v<S, HalfSpace>) {
                p.inward_normal = sh.normal;
                p.foot = x + sh.normal * (sh.offset - sh.normal.dot(x));
            } else {
                const bool nearer_lo = (x[0] - sh.lo) <= (sh.hi - x[0]);
                p.inward_normal = Vec{nearer_lo ? 1.0 : -1.0};
                p.foot = Vec{nearer_lo ? sh.lo : sh.hi};
            }
        },
        shape_);
    // For exterior sources, rebuild the foot as x + r * nu so the
    // projection identity holds to the last bit.
    if (s > 0.0) p.foot = x + p.inward_normal * p.distance;
    return p;
}

Projection Domain::project_to_boundary(const Vec& x) const {
    require_same_dim(x, dim_, "Domain::project_to_boundary");
    if (classify(x) != Region::exterior) {
        throw contract_error(
            "Domain::project_to_boundary: point must be strictly exterior");
    }
    return nearest_boundary(x);
}

} // namespace stickymc
