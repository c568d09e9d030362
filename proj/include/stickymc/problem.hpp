// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

#include "stickymc/geometry.hpp"
#include "stickymc/vec.hpp"

namespace stickymc {

/// Coefficient bundle for a linear parabolic terminal-value problem
///
///   du/dt + (1/2) sum_ij a^ij d2u/dxi dxj + sum_i b^i du/dxi
///         + c u + g = 0          on [0, T] x closure(G),
///   u(T, x) = phi(x),
///
/// with the second-order (sticky) boundary condition
///
///   -mu(z) * (generator applied to u) + du/dnu + gamma u = psi(t, z)
///
/// on the lateral boundary, where a = sigma sigma^T and nu is the inward
/// normal. All coefficient callbacks must be pure functions: trajectories
/// evaluate them concurrently with no synchronization.
struct Problem {
    std::function<Vec(double, const Vec&)> drift;                 // b(t, x)
    std::function<Mat(double, const Vec&)> sigma;                 // sigma(t, x)
    std::function<double(double, const Vec&)> potential;          // c(t, x)
    std::function<double(double, const Vec&)> source;             // g(t, x)
    std::function<double(const Vec&)> stickiness;                 // mu(z) >= 0
    std::function<double(double, const Vec&)> absorption;         // gamma(t, z)
    std::function<double(double, const Vec&)> boundary_datum;     // psi(t, z)
    std::function<double(const Vec&)> terminal;                   // phi(x)
    /// Generator applied to the terminal condition, evaluated with the
    /// coefficients frozen at (t, z).
    std::function<double(double, const Vec&)> terminal_generator; // (A phi)(t, z)
    double horizon = 1.0;                                         // T
    Domain domain;
    /// Exact solution u(t, x) when the problem is manufactured; empty
    /// otherwise. Must tolerate evaluation in a small exterior collar.
    std::function<double(double, const Vec&)> exact;

    bool has_exact() const { return static_cast<bool>(exact); }
};

/// (1/2) sum_ij a^ij hess_ij + sum_i b^i grad_i.
/// a must be symmetric within 1e-9 (absolute, entrywise).
double generator_apply(const Vec& b, const Mat& a, const Vec& grad,
                       const Mat& hess);

/// Two-dimensional benchmark on a disk of the given radius, manufactured
/// from the exact solution u(t, x) = exp(-(1 - t)) (x1^2 + x2^2) + 10 with
/// horizon T = 1. The boundary datum is derived from the exact solution,
/// so it stays consistent at every t in [0, T] and for any radius > 1.
Problem benchmark_disk_problem(double radius = 1.25);

/// Exactness fixture: constant solution u == K. Every interior and
/// boundary update term vanishes, so both schemes reproduce K without
/// statistical error.
Problem constant_problem(double K, Domain domain, double horizon);

/// Boundary datum -mu * (A u) + du/dnu + gamma u computed from the
/// problem's exact solution by central finite differences. Intended for
/// building manufactured problems and for cross-checking closed-form
/// data. Throws unsupported_error when no exact solution is attached.
double derived_boundary_datum(const Problem& p, double t, const Vec& z,
                              double fd_step = 1e-4);

/// Central-difference gradient and Hessian of a scalar field.
Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x,
                double step);
Mat fd_hessian(const std::function<double(const Vec&)>& f, const Vec& x,
               double step);

} // namespace stickymc
