// SPDX-License-Identifier: Apache-2.0
#include "stickymc/problem.hpp"

#include <cmath>
#include <string>

namespace stickymc {

double generator_apply(const Vec& b, const Mat& a, const Vec& grad,
                       const Mat& hess) {
    const int d = b.dim();
    require_same_dim(grad, d, "generator_apply");
    if (a.dim() != d || hess.dim() != d) {
        throw contract_error("generator_apply: dimension mismatch");
    }
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            if (std::abs(a(i, j) - a(j, i)) > 1e-9) {
                throw contract_error("generator_apply: a must be symmetric");
            }
    double second = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) second += a(i, j) * hess(i, j);
    return 0.5 * second + b.dot(grad);
}

Problem benchmark_disk_problem(double radius) {
    if (!(radius > 1.0)) {
        throw config_error(
            "benchmark_disk_problem: radius must exceed 1 so the evaluation "
            "point (0, 1) stays interior");
    }
    const double R = radius;
    const double sqrt3 = std::sqrt(3.0);

    Problem p;
    p.domain = Domain::ball(Vec{0.0, 0.0}, R);
    p.horizon = 1.0;

    p.drift = [](double, const Vec& x) { return Vec{0.5 * x[0], 2.0 * x[1]}; };
    p.sigma = [sqrt3](double, const Vec& x) {
        return Mat::diag(Vec{1.0, sqrt3 * x[1]});
    };
    p.potential = [](double, const Vec& x) { return x[1]; };
    p.source = [](double t, const Vec& x) {
        const double e = std::exp(-(1.0 - t));
        const double x1 = x[0], x2 = x[1];
        return -(1.0 + 2.0 * x1 * x1 + 8.0 * x2 * x2 + x1 * x1 * x2 +
                 x2 * x2 * x2) * e - 10.0 * x2;
    };
    p.stickiness = [](const Vec& z) { return 2.0 * z[0] * z[0]; };
    p.absorption = [](double, const Vec&) { return -0.5; };
    p.terminal = [](const Vec& x) { return x.squared_norm() + 10.0; };
    // phi has gradient 2z and Hessian 2I, so freezing the coefficients at
    // (t, z) gives (A phi)(z) = 1 + z1^2 + 7 z2^2, independent of t.
    p.terminal_generator = [](double, const Vec& z) {
        return 1.0 + z[0] * z[0] + 7.0 * z[1] * z[1];
    };
    // psi = -mu * (A u) + du/dnu + gamma * u evaluated on |z| = R, where
    // A u = e (1 + z1^2 + 7 z2^2), du/dnu = -2 e R, u = e R^2 + 10 and
    // e = exp(-(1 - t)).
    p.boundary_datum = [R](double t, const Vec& z) {
        const double e = std::exp(-(1.0 - t));
        const double z1sq = z[0] * z[0];
        return e * (-2.0 * z1sq * (1.0 + z1sq + 7.0 * z[1] * z[1]) - 2.0 * R -
                    0.5 * R * R) - 5.0;
    };
    p.exact = [](double t, const Vec& x) {
        return std::exp(-(1.0 - t)) * x.squared_norm() + 10.0;
    };
    return p;
}

Problem constant_problem(double K, Domain domain, double horizon) {
    if (!(horizon > 0.0)) {
        throw config_error("constant_problem: horizon must be > 0");
    }
    const int d = domain.dim();
    Problem p;
    p.domain = domain;
    p.horizon = horizon;
    p.drift = [d](double, const Vec&) { return Vec::zeros(d); };
    p.sigma = [d](double, const Vec&) { return Mat::identity(d); };
    p.potential = [](double, const Vec&) { return 0.0; };
    p.source = [](double, const Vec&) { return 0.0; };
    p.stickiness = [](const Vec&) { return 1.0; };
    p.absorption = [](double, const Vec&) { return 0.0; };
    p.boundary_datum = [](double, const Vec&) { return 0.0; };
    p.terminal = [K](const Vec&) { return K; };
    p.terminal_generator = [](double, const Vec&) { return 0.0; };
    p.exact = [K](double, const Vec&) { return K; };
    return p;
}

Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x,
                double step) {
    Vec g = Vec::zeros(x.dim());
    for (int i = 0; i < x.dim(); ++i) {
        Vec xp = x, xm = x;
        xp[i] += step;
        xm[i] -= step;
        g[i] = (f(xp) - f(xm)) / (2.0 * step);
    }
    return g;
}

Mat fd_hessian(const std::function<double(const Vec&)>& f, const Vec& x,
               double step) {
    const int d = x.dim();
    Mat h = Mat::zeros(d);
    const double f0 = f(x);
    for (int i = 0; i < d; ++i) {
        Vec xp = x, xm = x;
        xp[i] += step;
        xm[i] -= step;
        h(i, i) = (f(xp) - 2.0 * f0 + f(xm)) / (step * step);
        for (int j = i + 1; j < d; ++j) {
            Vec xpp = x, xpm = x, xmp = x, xmm = x;
            xpp[i] += step; xpp[j] += step;
            xpm[i] += step; xpm[j] -= step;
            xmp[i] -= step; xmp[j] += step;
            xmm[i] -= step; xmm[j] -= step;
            const double v =
                (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4.0 * step * step);
            h(i, j) = v;
            h(j, i) = v;
        }
    }
    return h;
}

double derived_boundary_datum(const Problem& p, double t, const Vec& z,
                              double fd_step) {
    if (!p.has_exact()) {
        throw unsupported_error(
            "derived_boundary_datum: problem carries no exact solution");
    }
    const auto u_t = [&](const Vec& x) { return p.exact(t, x); };
    const Vec grad = fd_gradient(u_t, z, fd_step);
    const Mat hess = fd_hessian(u_t, z, fd_step);
    const Mat s = p.sigma(t, z);
    const double au = generator_apply(p.drift(t, z), s.times_transpose(),
                                      grad, hess);
    const Vec nu = p.domain.inward_normal(z);
    const double u = p.exact(t, z);
    return -p.stickiness(z) * au + grad.dot(nu) + p.absorption(t, z) * u;
}

} // namespace stickymc
