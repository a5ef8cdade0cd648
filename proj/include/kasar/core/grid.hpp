#pragma once

#include <vector>

#include "kasar/core/matrix.hpp"

namespace kasar {

inline constexpr double kSpeedOfLight = 299792458.0;

/// Record of the azimuth change of variables used while reformatting.
/// tan_theta[k] is tan(theta) at pulse k; the keystone-domain time of an output
/// sample X is t_k = X / (Y0 * omega).
struct KeystoneMap {
    UniformAxis slow_time;          // s
    std::vector<double> tan_theta;  // per pulse
    double omega = 0.0;             // rad / (m s)
    double t_limit = 0.0;           // s, guarded half aperture used for omega
};

/// Uniform spatial-frequency grid. Rows run along X (azimuth), columns along Y (range).
struct CartesianGrid {
    UniformAxis x;  // rad/m, centered at 0
    UniformAxis y;  // rad/m, centered at y0
    double y0 = 0.0;
    double fc = 0.0;
    double sin_ref = 1.0;
    double c = kSpeedOfLight;
    KeystoneMap keystone;

    std::size_t rows() const { return x.size; }
    std::size_t cols() const { return y.size; }
    /// Image pixel spacing in meters along azimuth / range.
    double pixel_x() const;
    double pixel_y() const;
    /// Range frequency offset (Hz) that lands on spatial frequency Y.
    double range_frequency(double y_value) const;
    bool same_axes(const CartesianGrid& o) const { return x == o.x && y == o.y && y0 == o.y0; }
};

/// Y0 = 4 pi sin_ref fc / c.
double reference_y0(double fc, double sin_ref, double c = kSpeedOfLight);

}  // namespace kasar
