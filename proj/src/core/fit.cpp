#include "kasar/core/fit.hpp"

#include <Eigen/Dense>
#include <algorithm>

#include "kasar/core/error.hpp"

namespace kasar {

Plane fit_plane(const RealMatrix& z, const UniformAxis& x, const UniformAxis& y, const Mask* valid) {
    require(z.rows() == x.size && z.cols() == y.size, "fit_plane: axes do not match matrix");
    if (valid) require(valid->rows() == z.rows() && valid->cols() == z.cols(), "fit_plane: mask shape");
    // Centered coordinates keep the normal equations well conditioned when Y sits far from zero.
    const double xc = x.center, yc = y.center;
    Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
    Eigen::Vector3d b = Eigen::Vector3d::Zero();
    for (std::size_t r = 0; r < z.rows(); ++r) {
        const double u = x.value(r) - xc;
        for (std::size_t c = 0; c < z.cols(); ++c) {
            if (valid && !(*valid)(r, c)) continue;
            const double v = y.value(c) - yc;
            const Eigen::Vector3d g(1.0, u, v);
            a += g * g.transpose();
            b += g * z(r, c);
        }
    }
    if (a(0, 0) < 3.0) return {};
    const Eigen::Vector3d s = a.ldlt().solve(b);
    return {s(0) - s(1) * xc - s(2) * yc, s(1), s(2)};
}

Line fit_line(std::span<const double> x, std::span<const double> v) {
    require(x.size() == v.size(), "fit_line: length mismatch");
    const std::size_t n = x.size();
    if (n == 0) return {};
    if (n == 1) return {v[0], 0.0};
    double mx = 0.0, mv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        mv += v[i];
    }
    mx /= static_cast<double>(n);
    mv /= static_cast<double>(n);
    double sxx = 0.0, sxv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxv += (x[i] - mx) * (v[i] - mv);
    }
    const double b = sxx > 0.0 ? sxv / sxx : 0.0;
    return {mv - b * mx, b};
}

std::vector<double> remove_affine(std::span<const double> x, std::span<const double> v) {
    const Line l = fit_line(x, v);
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] - l.a - l.b * x[i];
    return out;
}

namespace {

Eigen::MatrixXd legendre_basis(std::span<const double> x, double mid, double half, int deg) {
    Eigen::MatrixXd a(static_cast<Eigen::Index>(x.size()), deg + 1);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        const double t = half > 0.0 ? (x[i] - mid) / half : 0.0;
        double p0 = 1.0, p1 = t;
        a(r, 0) = p0;
        if (deg >= 1) a(r, 1) = p1;
        for (int k = 2; k <= deg; ++k) {
            const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
            a(r, k) = p2;
            p0 = p1;
            p1 = p2;
        }
    }
    return a;
}

}  // namespace

std::vector<double> legendre_fit(std::span<const double> x, std::span<const double> v, int degree,
                                 std::span<const double> x_eval) {
    require(x.size() == v.size(), "legendre_fit: length mismatch");
    require(degree >= 0, "legendre_fit: negative degree");
    if (x.empty()) return std::vector<double>(x_eval.size(), 0.0);
    double lo = *std::min_element(x.begin(), x.end()), hi = *std::max_element(x.begin(), x.end());
    if (!x_eval.empty()) {
        lo = std::min(lo, *std::min_element(x_eval.begin(), x_eval.end()));
        hi = std::max(hi, *std::max_element(x_eval.begin(), x_eval.end()));
    }
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    const int deg = std::min<int>(degree, static_cast<int>(x.size()) - 1);
    const Eigen::MatrixXd a = legendre_basis(x, mid, half, deg);
    const Eigen::Map<const Eigen::VectorXd> rhs(v.data(), static_cast<Eigen::Index>(v.size()));
    const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(rhs);
    const Eigen::VectorXd fit = legendre_basis(x_eval, mid, half, deg) * coef;
    return {fit.data(), fit.data() + fit.size()};
}

std::vector<double> legendre_smooth(std::span<const double> x, std::span<const double> v, int degree) {
    return legendre_fit(x, v, degree, x);
}

}  // namespace kasar
