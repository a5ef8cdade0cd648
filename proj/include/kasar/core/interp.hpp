#pragma once

#include <span>
#include <vector>

#include "kasar/core/matrix.hpp"

namespace kasar {

/// Not-a-knot cubic spline. Linear in the data, so it reproduces polynomials up to degree 3
/// exactly. Evaluation outside [front, back] is a caller error.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;
    /// Exact integral of the piecewise cubic from front() to x.
    double integral_from_front(double x) const;

    double front() const { return x_.front(); }
    double back() const { return x_.back(); }
    bool contains(double x) const { return x >= x_.front() && x <= x_.back(); }
    std::size_t size() const { return x_.size(); }

private:
    std::size_t segment(double x) const;

    std::vector<double> x_, y_, b_, c_, d_;
    std::vector<double> cum_;  // integral from x_[0] to x_[i]
};

/// Piecewise cubic Hermite with Fritsch-Carlson slopes; preserves monotonicity of the data.
class Pchip {
public:
    Pchip() = default;
    Pchip(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    double front() const { return x_.front(); }
    double back() const { return x_.back(); }

private:
    std::vector<double> x_, y_, m_;
};

/// Kaiser-windowed sinc on a tabulated fractional grid.
class SincKernel {
public:
    explicit SincKernel(int taps = 8, int oversample = 16, double beta = 8.0);

    int taps() const { return taps_; }
    int oversample() const { return oversample_; }
    double beta() const { return beta_; }

    /// Weights for samples floor(pos) - taps/2 + 1 ... floor(pos) + taps/2; they sum to one.
    void weights(double frac, std::span<double> out) const;

    /// Value at fractional index pos. Taps that fall outside the sequence read as zero.
    /// Returns 0 when pos itself is outside [0, n-1].
    cplx interpolate(std::span<const cplx> data, double pos) const;
    /// Strided access, used for column passes.
    cplx interpolate(const cplx* data, std::size_t n, std::size_t stride, double pos) const;

private:
    int taps_, oversample_;
    double beta_;
    std::vector<double> table_;  // (oversample_+1) rows x taps_
};

}  // namespace kasar
