#pragma once

#include <span>
#include <vector>

#include "kasar/core/matrix.hpp"

namespace kasar {

/// z ~ c0 + cx*x + cy*y, where x runs along rows and y along columns.
struct Plane {
    double c0 = 0.0, cx = 0.0, cy = 0.0;
    double operator()(double x, double y) const { return c0 + cx * x + cy * y; }
};

/// Least-squares plane over cells with valid != 0 (all cells if valid is null).
Plane fit_plane(const RealMatrix& z, const UniformAxis& x, const UniformAxis& y, const Mask* valid = nullptr);

/// Least-squares line v ~ a + b*x.
struct Line {
    double a = 0.0, b = 0.0;
};
Line fit_line(std::span<const double> x, std::span<const double> v);

/// v minus its least-squares line.
std::vector<double> remove_affine(std::span<const double> x, std::span<const double> v);

/// Least-squares Legendre series of given degree on [min x, max x], evaluated back at x.
std::vector<double> legendre_smooth(std::span<const double> x, std::span<const double> v, int degree);

/// Same fit, evaluated at x_eval. The Legendre domain spans both x and x_eval.
std::vector<double> legendre_fit(std::span<const double> x, std::span<const double> v, int degree,
                                 std::span<const double> x_eval);

}  // namespace kasar
