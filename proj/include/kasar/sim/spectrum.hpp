#pragma once

#include "kasar/core/interp.hpp"
#include "kasar/pfa/polar_format.hpp"
#include "kasar/sim/radar.hpp"
#include "kasar/structure/surface.hpp"

namespace kasar::sim {

/// Multiplies by exp(+j Phi_e) inside the surface mask.
pfa::CartesianSpectrum inject_spectrum_error(const pfa::CartesianSpectrum& spec,
                                             const structure::PhaseErrorSurface& surface);

/// Ideal reformatted spectrum: sum of A exp(j (x X + y Y)) on the grid, full coverage.
pfa::CartesianSpectrum synth_cartesian_spectrum(const TargetScene& scene, const CartesianGrid& grid);

/// Spatial-frequency error xi(u), u = tan(theta), implied by a range error on a geometry:
/// xi = r_e / (sin(phi) cos(theta)) at the pulse where tan(theta) = u.
class SpatialErrorModel {
public:
    SpatialErrorModel(const FlightGeometry& geometry, const RangeErrorProfile& err);

    double operator()(double u) const { return xi_(u); }
    double u_min() const { return xi_.front(); }
    double u_max() const { return xi_.back(); }

    /// Y xi(X/Y) on the grid.
    structure::PhaseErrorSurface surface(const CartesianGrid& grid) const;
    /// Y0 xi(X/Y0) on the grid X axis; zero where X/Y0 leaves the aperture.
    structure::ApeProfile ape(const CartesianGrid& grid) const;

private:
    CubicSpline xi_;
};

}  // namespace kasar::sim
