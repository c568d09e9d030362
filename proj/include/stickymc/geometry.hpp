// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <variant>

#include "stickymc/vec.hpp"

namespace stickymc {

/// Tolerance-banded position of a point relative to the domain boundary.
enum class Region { interior, boundary, exterior };

/// Nearest boundary point of a source x, together with the distance
/// r = dist(x, boundary) and the unit inward normal at the foot.
/// For an exterior source the identity  x + r * inward_normal == foot
/// holds by construction.
struct Projection {
    Vec foot;
    double distance = 0.0;
    Vec inward_normal;
};

/// Open ball { |x - center| < radius }.
struct Ball {
    Vec center;
    double radius = 0.0;
};

/// Open half space { normal . x > offset }, |normal| = 1.
struct HalfSpace {
    Vec normal;
    double offset = 0.0;
};

/// Open interval (lo, hi) in one dimension.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Geometric oracle for the domain G: membership, boundary distance,
/// projection and inward normals. Immutable after construction and safe
/// to read from any number of trajectory workers concurrently.
///
/// Only shapes with closed-form projections are supported. The half-space
/// and interval shapes exist for formula-level unit fixtures; production
/// runs use balls.
class Domain {
public:
    /// Default domain is the unit interval; problem builders always
    /// install the real shape.
    Domain();

    static Domain ball(Vec center, double radius);
    static Domain half_space(Vec normal, double offset);
    static Domain interval(double lo, double hi);

    int dim() const { return dim_; }

    /// Absolute half-width of the band classified as "boundary".
    double boundary_tolerance() const { return boundary_tol_; }

    /// Strict-interior indicator. Uses exact comparisons (squared norms
    /// for balls) with no epsilon band, so points sitting numerically on
    /// the boundary report false.
    bool contains(const Vec& x) const;

    /// Exactly one region per point: interior if the signed boundary
    /// distance is below -tol, exterior above +tol, boundary in between.
    Region classify(const Vec& x) const;

    bool on_boundary(const Vec& x) const { return classify(x) == Region::boundary; }
    bool exterior(const Vec& x) const { return classify(x) == Region::exterior; }

    /// Negative inside, positive outside, zero on the boundary.
    double signed_boundary_distance(const Vec& x) const;

    /// dist(x, boundary) >= 0.
    double distance_to_boundary(const Vec& x) const;

    /// Projection of a strictly exterior point onto the boundary.
    /// Throws contract_error if x is interior or on the boundary, and
    /// nonunique_projection_error if x lies beyond the band in which the
    /// nearest boundary point is unique (for a ball: more than one radius
    /// away from the boundary, or at the center).
    Projection project_to_boundary(const Vec& x) const;

    /// Unit vector at boundary point z pointing into the domain.
    /// Requires z on the boundary within boundary_tolerance().
    Vec inward_normal(const Vec& z) const;

    /// Projection data for a chain position that is on or outside the
    /// boundary (distance may be zero). This is the scheme-facing variant
    /// of project_to_boundary without the strict-exterior precondition.
    Projection nearest_boundary(const Vec& x) const;

private:
    Domain(std::variant<Ball, HalfSpace, Interval> shape, int dim, double tol)
        : shape_(std::move(shape)), dim_(dim), boundary_tol_(tol) {}

    std::variant<Ball, HalfSpace, Interval> shape_;
    int dim_ = 0;
    double boundary_tol_ = 0.0;
};

} // namespace stickymc
