#include "kasar/core/interp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kasar/core/error.hpp"

namespace kasar {
namespace {

void check_abscissa(const std::vector<double>& x, const std::vector<double>& y, std::size_t min_n) {
    require(x.size() == y.size(), "interpolant: x and y lengths differ");
    require(x.size() >= min_n, "interpolant: too few samples");
    for (std::size_t i = 1; i < x.size(); ++i)
        require(x[i] > x[i - 1], "interpolant: abscissa must be strictly increasing");
}

std::size_t find_segment(const std::vector<double>& x, double v) {
    auto it = std::upper_bound(x.begin(), x.end(), v);
    std::size_t i = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
    return std::min(i, x.size() - 2);
}

double bessel_i0(double x) {
    double sum = 1.0, term = 1.0;
    const double q = x * x / 4.0;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return sum;
}

}  // namespace

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    check_abscissa(x_, y_, 2);
    const std::size_t n = x_.size();
    std::vector<double> h(n - 1), s(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        s[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    std::vector<double> m(n, 0.0);  // second derivatives
    if (n == 3) {
        const double dd = 2.0 * (s[1] - s[0]) / (h[0] + h[1]);
        std::fill(m.begin(), m.end(), dd);
    } else if (n >= 4) {
        // Interior unknowns M1..M_{n-2}; M0 and M_{n-1} eliminated through the not-a-knot conditions.
        const std::size_t k = n - 2;
        std::vector<double> lo(k, 0.0), di(k, 0.0), up(k, 0.0), rhs(k, 0.0);
        for (std::size_t j = 0; j < k; ++j) {
            const std::size_t i = j + 1;
            lo[j] = h[i - 1];
            di[j] = 2.0 * (h[i - 1] + h[i]);
            up[j] = h[i];
            rhs[j] = 6.0 * (s[i] - s[i - 1]);
        }
        const double h0 = h[0], h1 = h[1];
        di[0] += h0 * (h0 + h1) / h1;
        up[0] -= h0 * h0 / h1;
        const double ha = h[n - 2], hb = h[n - 3];
        di[k - 1] += ha * (ha + hb) / hb;
        lo[k - 1] -= ha * ha / hb;
        for (std::size_t j = 1; j < k; ++j) {
            const double w = lo[j] / di[j - 1];
            di[j] -= w * up[j - 1];
            rhs[j] -= w * rhs[j - 1];
        }
        std::vector<double> sol(k);
        sol[k - 1] = rhs[k - 1] / di[k - 1];
        for (std::size_t j = k - 1; j-- > 0;) sol[j] = (rhs[j] - up[j] * sol[j + 1]) / di[j];
        for (std::size_t j = 0; j < k; ++j) m[j + 1] = sol[j];
        m[0] = ((h0 + h1) * m[1] - h0 * m[2]) / h1;
        m[n - 1] = ((ha + hb) * m[n - 2] - ha * m[n - 3]) / hb;
    }
    b_.resize(n - 1);
    c_.resize(n - 1);
    d_.resize(n - 1);
    cum_.assign(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        b_[i] = s[i] - h[i] * (2.0 * m[i] + m[i + 1]) / 6.0;
        c_[i] = m[i] / 2.0;
        d_[i] = (m[i + 1] - m[i]) / (6.0 * h[i]);
        const double hi = h[i];
        cum_[i + 1] = cum_[i] + hi * (y_[i] + hi * (b_[i] / 2.0 + hi * (c_[i] / 3.0 + hi * d_[i] / 4.0)));
    }
}

std::size_t CubicSpline::segment(double x) const { return find_segment(x_, x); }

double CubicSpline::operator()(double x) const {
    if (x == x_.back()) return y_.back();
    const std::size_t i = segment(x);
    const double t = x - x_[i];
    return y_[i] + t * (b_[i] + t * (c_[i] + t * d_[i]));
}

double CubicSpline::derivative(double x) const {
    const std::size_t i = segment(x);
    const double t = x - x_[i];
    return b_[i] + t * (2.0 * c_[i] + 3.0 * t * d_[i]);
}

double CubicSpline::second_derivative(double x) const {
    const std::size_t i = segment(x);
    const double t = x - x_[i];
    return 2.0 * c_[i] + 6.0 * t * d_[i];
}

double CubicSpline::integral_from_front(double x) const {
    const std::size_t i = segment(x);
    const double t = x - x_[i];
    return cum_[i] + t * (y_[i] + t * (b_[i] / 2.0 + t * (c_[i] / 3.0 + t * d_[i] / 4.0)));
}

Pchip::Pchip(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    check_abscissa(x_, y_, 2);
    const std::size_t n = x_.size();
    std::vector<double> h(n - 1), s(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        s[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    m_.assign(n, 0.0);
    if (n == 2) {
        m_[0] = m_[1] = s[0];
        return;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (s[i - 1] * s[i] <= 0.0) continue;
        const double w1 = 2.0 * h[i] + h[i - 1], w2 = h[i] + 2.0 * h[i - 1];
        m_[i] = (w1 + w2) / (w1 / s[i - 1] + w2 / s[i]);
    }
    auto end_slope = [](double h0, double h1, double s0, double s1) {
        double d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
        if (d * s0 <= 0.0) return 0.0;
        if (s0 * s1 <= 0.0 && std::abs(d) > 3.0 * std::abs(s0)) return 3.0 * s0;
        return d;
    };
    m_[0] = end_slope(h[0], h[1], s[0], s[1]);
    m_[n - 1] = end_slope(h[n - 2], h[n - 3], s[n - 2], s[n - 3]);
}

double Pchip::operator()(double x) const {
    const std::size_t i = find_segment(x_, x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * m_[i] + (-2 * t3 + 3 * t2) * y_[i + 1] +
           (t3 - t2) * h * m_[i + 1];
}

SincKernel::SincKernel(int taps, int oversample, double beta) : taps_(taps), oversample_(oversample), beta_(beta) {
    require(taps >= 2 && taps <= 64 && taps % 2 == 0, "sinc kernel: taps must be even, in [2, 64]");
    require(oversample >= 1, "sinc kernel: oversample must be >= 1");
    require(beta >= 0.0, "sinc kernel: beta must be >= 0");
    const int half = taps / 2;
    const double i0b = bessel_i0(beta);
    table_.assign(static_cast<std::size_t>((oversample + 1) * taps), 0.0);
    for (int r = 0; r <= oversample; ++r) {
        const double frac = static_cast<double>(r) / oversample;
        double sum = 0.0;
        for (int k = 0; k < taps; ++k) {
            const double d = frac - static_cast<double>(k - half + 1);
            const double sinc = std::abs(d) < 1e-15 ? 1.0 : std::sin(std::numbers::pi * d) / (std::numbers::pi * d);
            const double q = d / half;
            const double win = std::abs(q) >= 1.0 ? 0.0 : bessel_i0(beta * std::sqrt(1.0 - q * q)) / i0b;
            table_[static_cast<std::size_t>(r * taps + k)] = sinc * win;
            sum += sinc * win;
        }
        for (int k = 0; k < taps; ++k) table_[static_cast<std::size_t>(r * taps + k)] /= sum;
    }
}

void SincKernel::weights(double frac, std::span<double> out) const {
    const double p = frac * oversample_;
    int r = static_cast<int>(std::floor(p));
    r = std::clamp(r, 0, oversample_ - 1);
    const double a = p - r;
    const double* w0 = &table_[static_cast<std::size_t>(r * taps_)];
    const double* w1 = w0 + taps_;
    for (int k = 0; k < taps_; ++k) out[static_cast<std::size_t>(k)] = (1.0 - a) * w0[k] + a * w1[k];
}

cplx SincKernel::interpolate(std::span<const cplx> data, double pos) const {
    return interpolate(data.data(), data.size(), 1, pos);
}

cplx SincKernel::interpolate(const cplx* data, std::size_t n, std::size_t stride, double pos) const {
    if (n == 0 || pos < 0.0 || pos > static_cast<double>(n - 1)) return {0.0, 0.0};
    const double fl = std::floor(pos);
    const auto base = static_cast<long>(fl);
    double w[64];
    const int taps = std::min(taps_, 64);
    weights(pos - fl, std::span<double>(w, static_cast<std::size_t>(taps)));
    cplx acc{0.0, 0.0};
    const long half = taps / 2;
    for (int k = 0; k < taps; ++k) {
        const long idx = base - half + 1 + k;
        if (idx < 0 || idx >= static_cast<long>(n)) continue;
        acc += w[k] * data[static_cast<std::size_t>(idx) * stride];
    }
    return acc;
}

}  // namespace kasar
