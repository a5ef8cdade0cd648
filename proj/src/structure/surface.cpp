#include "kasar/structure/surface.hpp"

#include <cmath>

#include "kasar/core/error.hpp"
#include "kasar/core/fit.hpp"
#include "kasar/core/interp.hpp"

namespace kasar::structure {
namespace {

void check_profile(const UniformAxis& px, std::size_t n, const CartesianGrid& grid) {
    require(n == px.size, "profile: value count differs from its axis");
    require(px == grid.x, "profile: not sampled on the grid X axis");
    require(px.size >= 4, "profile: need at least 4 samples");
}

PhaseErrorSurface blank(const CartesianGrid& grid, std::uint8_t valid) {
    PhaseErrorSurface s;
    s.values = RealMatrix(grid.rows(), grid.cols(), 0.0);
    s.valid = Mask(grid.rows(), grid.cols(), valid);
    s.x = grid.x;
    s.y = grid.y;
    s.y0 = grid.y0;
    return s;
}

/// Central differences inside, second-order one-sided at the ends.
// Fourth-order differences: five-point central stencils inside, one-sided at the ends.
// Exact for polynomials up to degree four. Short profiles fall back to second order.
std::vector<double> first_difference(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    std::vector<double> d(n);
    if (n < 6) {
        for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
        d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
        d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
        return d;
    }
    const double s = 12.0 * h;
    for (std::size_t i = 2; i + 2 < n; ++i) d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / s;
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / s;
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / s;
    const std::size_t e = n - 1;
    d[e] = (25.0 * f[e] - 48.0 * f[e - 1] + 36.0 * f[e - 2] - 16.0 * f[e - 3] + 3.0 * f[e - 4]) / s;
    d[e - 1] = (3.0 * f[e] + 10.0 * f[e - 1] - 18.0 * f[e - 2] + 6.0 * f[e - 3] - f[e - 4]) / s;
    return d;
}

std::vector<double> second_difference(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    std::vector<double> d(n);
    const double h2 = h * h;
    if (n < 6) {
        for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
        d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
        d[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
        return d;
    }
    const double s = 12.0 * h2;
    for (std::size_t i = 2; i + 2 < n; ++i)
        d[i] = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / s;
    auto edge = [&](std::size_t k0, int dir, std::size_t off) {
        // k0 is the end sample, dir points inward, off is 0 for the end and 1 for its neighbor.
        auto at = [&](int m) { return f[static_cast<std::size_t>(static_cast<long>(k0) + dir * m)]; };
        if (off == 0)
            return (45.0 * at(0) - 154.0 * at(1) + 214.0 * at(2) - 156.0 * at(3) + 61.0 * at(4) - 10.0 * at(5)) / s;
        return (10.0 * at(0) - 15.0 * at(1) - 4.0 * at(2) + 14.0 * at(3) - 6.0 * at(4) + at(5)) / s;
    };
    d[0] = edge(0, 1, 0);
    d[1] = edge(0, 1, 1);
    d[n - 1] = edge(n - 1, -1, 0);
    d[n - 2] = edge(n - 1, -1, 1);
    return d;
}

}  // namespace

PhaseErrorSurface PhaseErrorSurface::zeros(const CartesianGrid& grid) { return blank(grid, 1); }

PhaseErrorSurface ape_to_surface(const ApeProfile& phi0, const CartesianGrid& grid) {
    check_profile(phi0.x, phi0.values.size(), grid);
    const CubicSpline spline(phi0.x.values(), phi0.values);
    PhaseErrorSurface s = blank(grid, 0);
    std::vector<double> ratio(grid.cols());
    for (std::size_t j = 0; j < grid.cols(); ++j) ratio[j] = grid.y0 / grid.y.value(j);
    for (std::size_t i = 0; i < grid.rows(); ++i) {
        const double xv = grid.x.value(i);
        for (std::size_t j = 0; j < grid.cols(); ++j) {
            const double u = ratio[j] * xv;
            if (!spline.contains(u)) continue;
            s.values(i, j) = spline(u) / ratio[j];
            s.valid(i, j) = 1;
        }
    }
    return s;
}

PhaseErrorSurface rcm_to_surface(const RcmProfile& phi1, const CartesianGrid& grid) {
    check_profile(phi1.x, phi1.values.size(), grid);
    require(grid.x.center == 0.0, "rcm_to_surface: X axis must contain 0");
    const std::vector<double> xs = phi1.x.values();
    const std::size_t n = xs.size();
    const std::size_t c0 = phi1.x.center_index();
    const CubicSpline s1(xs, phi1.values);

    // phi1 = b + d X + r(X). b maps to the plane bY. A surface of the form Y xi(X/Y)
    // with smooth xi has phi1'(0) = 0, so d is unobservable estimation bias (range
    // alignment drops the trend) and is discarded. r(X)/X^2 stays finite at 0.
    const double b = phi1.values[c0];
    const double d = s1.derivative(0.0);
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double v = xs[i];
        q[i] = i == c0 ? 0.5 * s1.second_derivative(0.0) : (phi1.values[i] - b - d * v) / (v * v);
    }
    const CubicSpline qs(xs, q);
    const double q_at0 = qs.integral_from_front(0.0);

    PhaseErrorSurface s = blank(grid, 0);
    std::vector<double> ratio(grid.cols());
    for (std::size_t j = 0; j < grid.cols(); ++j) ratio[j] = grid.y0 / grid.y.value(j);
    for (std::size_t i = 0; i < grid.rows(); ++i) {
        const double xv = grid.x.value(i);
        for (std::size_t j = 0; j < grid.cols(); ++j) {
            const double u = ratio[j] * xv;
            if (!qs.contains(u)) continue;
            double v = 0.0;
            if (xv != 0.0) {
                const double r_int = qs.integral_from_front(u) - q_at0;
                v = -xv * grid.y0 * r_int;
            }
            s.values(i, j) = v;
            s.valid(i, j) = 1;
        }
    }
    remove_plane(s);
    return s;
}

PhaseErrorSurface surface_from_xi(const std::function<double(double)>& xi, double u_min, double u_max,
                                  const CartesianGrid& grid) {
    PhaseErrorSurface s = blank(grid, 0);
    for (std::size_t i = 0; i < grid.rows(); ++i) {
        const double xv = grid.x.value(i);
        for (std::size_t j = 0; j < grid.cols(); ++j) {
            const double yv = grid.y.value(j);
            const double u = xv / yv;
            if (u < u_min || u > u_max) continue;
            s.values(i, j) = yv * xi(u);
            s.valid(i, j) = 1;
        }
    }
    return s;
}

PhaseErrorSurface surface_from_mu(const std::function<double(double)>& mu, double u_min, double u_max,
                                  const CartesianGrid& grid) {
    PhaseErrorSurface s = blank(grid, 0);
    for (std::size_t i = 0; i < grid.rows(); ++i) {
        const double xv = grid.x.value(i);
        for (std::size_t j = 0; j < grid.cols(); ++j) {
            const double yv = grid.y.value(j);
            const double u = xv / yv;
            if (u < u_min || u > u_max) continue;
            s.values(i, j) = std::hypot(xv, yv) * mu(u);
            s.valid(i, j) = 1;
        }
    }
    return s;
}

PhaseErrorSurface broadcast_ape(const ApeProfile& phi0, const CartesianGrid& grid) {
    check_profile(phi0.x, phi0.values.size(), grid);
    PhaseErrorSurface s = blank(grid, 1);
    for (std::size_t i = 0; i < grid.rows(); ++i)
        for (std::size_t j = 0; j < grid.cols(); ++j) s.values(i, j) = phi0.values[i];
    return s;
}

PhaseErrorSurface first_order_surface(const ApeProfile& phi0, const RcmProfile& phi1, const CartesianGrid& grid) {
    check_profile(phi0.x, phi0.values.size(), grid);
    check_profile(phi1.x, phi1.values.size(), grid);
    PhaseErrorSurface s = blank(grid, 1);
    for (std::size_t i = 0; i < grid.rows(); ++i)
        for (std::size_t j = 0; j < grid.cols(); ++j)
            s.values(i, j) = phi0.values[i] + phi1.values[i] * (grid.y.value(j) - grid.y0);
    return s;
}

void remove_plane(PhaseErrorSurface& s) {
    const Plane p = fit_plane(s.values, s.x, s.y, &s.valid);
    for (std::size_t i = 0; i < s.values.rows(); ++i) {
        const double xv = s.x.value(i);
        for (std::size_t j = 0; j < s.values.cols(); ++j) {
            if (!s.valid(i, j)) continue;
            s.values(i, j) -= p(xv, s.y.value(j));
        }
    }
}

RcmProfile rcm_from_ape(const ApeProfile& phi0, double y0) {
    require(phi0.values.size() == phi0.x.size && phi0.x.size >= 4, "rcm_from_ape: bad profile");
    const std::vector<double> d = first_difference(phi0.values, phi0.x.step);
    RcmProfile out{phi0.x, std::vector<double>(phi0.x.size)};
    for (std::size_t i = 0; i < phi0.x.size; ++i) out.values[i] = (phi0.values[i] - phi0.x.value(i) * d[i]) / y0;
    return out;
}

TaylorCoeffs taylor_decompose(const PhaseErrorSurface& surface, double tolerance) {
    const std::size_t rows = surface.values.rows(), cols = surface.values.cols();
    require(rows >= 4 && cols >= 1, "taylor_decompose: surface too small");
    require(surface.x.size == rows && surface.y.size == cols, "taylor_decompose: axes do not match surface");
    const std::size_t jc = surface.y.center_index();
    require(surface.y.value(jc) == surface.y0, "taylor_decompose: Y axis must be centered on Y0");

    TaylorCoeffs tc;
    tc.x = surface.x;
    tc.phi0.resize(rows);
    for (std::size_t i = 0; i < rows; ++i) tc.phi0[i] = surface.values(i, jc);
    const double h = surface.x.step, y0 = surface.y0;
    const std::vector<double> d1 = first_difference(tc.phi0, h);
    const std::vector<double> d2 = second_difference(tc.phi0, h);
    tc.phi1.resize(rows);
    tc.phi2.resize(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        const double xv = surface.x.value(i);
        tc.phi1[i] = (tc.phi0[i] - xv * d1[i]) / y0;
        tc.phi2[i] = xv * xv * d2[i] / (2.0 * y0 * y0);
    }

    CartesianGrid g;
    g.x = surface.x;
    g.y = surface.y;
    g.y0 = y0;
    const PhaseErrorSurface exact = ape_to_surface(ApeProfile{surface.x, tc.phi0}, g);
    double trunc = 0.0, strc = 0.0;
    std::size_t nt = 0, ns = 0;
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            if (!surface.valid(i, j)) continue;
            const double dy = surface.y.value(j) - y0;
            const double v = surface.values(i, j);
            const double e = v - (tc.phi0[i] + tc.phi1[i] * dy + tc.phi2[i] * dy * dy);
            trunc += e * e;
            ++nt;
            if (exact.valid(i, j)) {
                const double f = v - exact.values(i, j);
                strc += f * f;
                ++ns;
            }
        }
    }
    tc.truncation_rms = nt ? std::sqrt(trunc / static_cast<double>(nt)) : 0.0;
    tc.structure_rms = ns ? std::sqrt(strc / static_cast<double>(ns)) : 0.0;
    tc.structure_ok = tc.structure_rms <= tolerance;
    return tc;
}

QuadraticFamily quadratic_family(double a, const UniformAxis& x, double y0) {
    require(y0 > 0.0, "quadratic_family: Y0 must be > 0");
    QuadraticFamily q{{x, std::vector<double>(x.size)}, {x, std::vector<double>(x.size)}, std::vector<double>(x.size)};
    for (std::size_t i = 0; i < x.size; ++i) {
        const double v = a * x.value(i) * x.value(i);
        q.phi0.values[i] = v;
        q.phi1.values[i] = -v / y0;
        q.phi2[i] = v / (y0 * y0);
    }
    return q;
}

}  // namespace kasar::structure
