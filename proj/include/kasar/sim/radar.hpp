#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kasar/core/grid.hpp"
#include "kasar/core/matrix.hpp"

namespace kasar::sim {

struct RadarParams {
    double center_frequency = 10e9;  // Hz
    double bandwidth = 600e6;        // Hz
    std::size_t range_freq_samples = 2048;
    std::size_t pulse_count = 2048;
    double c = kSpeedOfLight;

    double wavelength() const { return c / center_frequency; }
    /// Uniform, centered at 0, step B / samples; covers [-B/2, B/2).
    UniformAxis range_freq_axis() const;
    void validate() const;
};

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
    bool operator==(const Vec3&) const = default;
};

/// Scene frame: origin at scene center, z up, and the ground projection of the line of sight
/// at t = 0 along -y. With that frame the antenna sits at
/// r_c * (-sin(phi) sin(theta), -sin(phi) cos(theta), cos(phi)).
struct FlightGeometry {
    UniformAxis slow_time;  // s, centered on t = 0
    std::vector<Vec3> apc;
    std::vector<double> range;  // r_c(t)
    std::vector<double> theta;  // azimuth angle
    std::vector<double> phi;    // incident angle from vertical
    double squint = 0.0;
    double phi_ref = 0.0;

    std::size_t size() const { return apc.size(); }
    void validate() const;
};

/// Straight, constant-velocity path in the horizontal plane at the given altitude.
/// Altitude 0 gives a slant-plane collection with sin(phi) = 1.
FlightGeometry make_linear_geometry(const RadarParams& radar, double velocity, double altitude,
                                    double scene_center_slant_range, double squint, double aperture_length,
                                    std::size_t pulse_count);

/// Arbitrary path. Positions are rotated about z so that theta(0) = 0; time axis must be
/// centered on t = 0 and have one position per sample.
FlightGeometry geometry_from_positions(const UniformAxis& slow_time, const std::vector<Vec3>& positions,
                                       double squint = 0.0);

struct Target {
    double x = 0.0, y = 0.0;
    cplx amplitude{1.0, 0.0};
};

struct TargetScene {
    std::vector<Target> targets;
    void validate() const;
};

enum class ErrorKind { quadratic, sinusoid, random_walk, tabulated };

std::string to_string(ErrorKind k);
/// Throws InputError on unknown names.
ErrorKind error_kind_from_string(const std::string& s);

struct ErrorParams {
    double kappa2 = 0.0;     // quadratic: r_e = kappa2 t^2 (m/s^2)
    double amplitude = 0.0;  // sinusoid: m
    double cycles = 1.0;     // sinusoid: cycles over the aperture
    double phase = 0.0;      // sinusoid: rad
    double step_std = 0.0;   // random walk: m per pulse
    std::uint64_t seed = 0;
    std::vector<double> table;  // tabulated, one value per pulse
};

struct RangeErrorProfile {
    ErrorKind kind = ErrorKind::tabulated;
    std::vector<double> values;  // m
};

RangeErrorProfile make_error_profile(ErrorKind kind, const ErrorParams& p, const UniformAxis& slow_time);
RangeErrorProfile make_error_profile(const std::string& kind, const ErrorParams& p, const UniformAxis& slow_time);
/// r_e identically zero.
RangeErrorProfile zero_error(const UniformAxis& slow_time);

struct PhaseHistory {
    ComplexMatrix data;  // pulses x range frequencies
    RadarParams radar;
    FlightGeometry geometry;
};

PhaseHistory synth_phase_history(const TargetScene& scene, const FlightGeometry& geometry, const RadarParams& radar,
                                 const RangeErrorProfile& err);

/// Circular complex Gaussian noise, sigma^2 = 1 / 10^(snr_db/10): the snr is per sample,
/// relative to a unit-amplitude target.
void add_complex_noise(ComplexMatrix& m, double snr_db, std::uint64_t seed);

}  // namespace kasar::sim
