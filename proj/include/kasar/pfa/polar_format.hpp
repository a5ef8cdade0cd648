#pragma once

#include <string>
#include <vector>

#include "kasar/core/grid.hpp"
#include "kasar/core/interp.hpp"
#include "kasar/core/matrix.hpp"
#include "kasar/sim/radar.hpp"

namespace kasar::pfa {

struct InterpolatorConfig {
    int taps = 8;
    int oversample = 16;
    double kaiser_beta = 8.0;
    SincKernel kernel() const { return SincKernel(taps, oversample, kaiser_beta); }
};

struct GridConfig {
    std::size_t rows = 1024;  // X samples
    std::size_t cols = 1024;  // Y samples
    /// Samples kept clear of the recorded band / aperture edge so every kernel tap exists.
    std::size_t guard = 4;
};

struct PfaConfig {
    GridConfig grid;
    InterpolatorConfig interp;
};

struct CartesianSpectrum {
    ComplexMatrix data;  // X rows, Y columns
    CartesianGrid grid;
    Mask coverage;  // 0 where the resampler zero-filled
};

/// Phase history after the range pass: columns sit on the requested range-frequency axis.
struct RangeResampled {
    ComplexMatrix data;
    UniformAxis range_freq;  // Hz, output axis
    double sin_ref = 1.0;
    Mask coverage;
    sim::RadarParams radar;
    sim::FlightGeometry geometry;
};

/// Grid inscribed in the data's polar annulus, with Omega = tan(theta_lim) / t_lim.
CartesianGrid design_grid(const sim::PhaseHistory& ph, const GridConfig& cfg);

/// Per pulse, output at f_r takes the input at delta f_r + fc (delta - 1),
/// delta = sin(phi_ref) / (sin(phi) cos(theta)).
RangeResampled range_resample(const sim::PhaseHistory& ph, const UniformAxis& out_range_freq,
                              const InterpolatorConfig& interp = {});
/// Output on the input's own range-frequency axis.
RangeResampled range_resample(const sim::PhaseHistory& ph, const InterpolatorConfig& interp = {});

/// Combined RCM linearization and keystone: each (X, Y) sample reads the pulse whose
/// tan(theta) equals X / Y.
CartesianSpectrum azimuth_resample(const RangeResampled& rr, const CartesianGrid& grid,
                                   const InterpolatorConfig& interp = {});

CartesianSpectrum polar_format(const sim::PhaseHistory& ph, const PfaConfig& cfg = {});

}  // namespace kasar::pfa
