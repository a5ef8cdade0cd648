#pragma once

#include <functional>
#include <string>
#include <vector>

#include "kasar/core/grid.hpp"
#include "kasar/core/matrix.hpp"

namespace kasar::structure {

/// phi0(X) in rad.
struct ApeProfile {
    UniformAxis x;
    std::vector<double> values;
};

/// phi1(X) in meters of range migration.
struct RcmProfile {
    UniformAxis x;
    std::vector<double> values;
};

/// Phi_e(X, Y) in rad; zero wherever valid is 0.
struct PhaseErrorSurface {
    RealMatrix values;
    Mask valid;
    UniformAxis x, y;
    double y0 = 0.0;

    static PhaseErrorSurface zeros(const CartesianGrid& grid);
    bool matches(const CartesianGrid& grid) const { return x == grid.x && y == grid.y && y0 == grid.y0; }
};

/// (Y/Y0) phi0((Y0/Y) X). Cells whose scaled abscissa leaves the profile support are masked.
PhaseErrorSurface ape_to_surface(const ApeProfile& phi0, const CartesianGrid& grid);

/// Surface implied by a residual-RCM profile, plane-detrended over the valid cells. The constant
/// and the slope at X = 0 of phi1 are ignored.
PhaseErrorSurface rcm_to_surface(const RcmProfile& phi1, const CartesianGrid& grid);

/// Y xi(X/Y) for a spatial-frequency error xi defined on [u_min, u_max]; outside is masked.
PhaseErrorSurface surface_from_xi(const std::function<double(double)>& xi, double u_min, double u_max,
                                  const CartesianGrid& grid);
/// sqrt(X^2 + Y^2) mu(X/Y), the polar-raster form; equal to the xi form when xi(u) = sqrt(1+u^2) mu(u).
PhaseErrorSurface surface_from_mu(const std::function<double(double)>& mu, double u_min, double u_max,
                                  const CartesianGrid& grid);

/// phi0(X) with no Y dependence, everywhere valid.
PhaseErrorSurface broadcast_ape(const ApeProfile& phi0, const CartesianGrid& grid);

/// phi0 + phi1 (Y - Y0), everywhere valid.
PhaseErrorSurface first_order_surface(const ApeProfile& phi0, const RcmProfile& phi1, const CartesianGrid& grid);

/// Least-squares plane over valid cells, subtracted in place.
void remove_plane(PhaseErrorSurface& s);

struct TaylorCoeffs {
    UniformAxis x;
    std::vector<double> phi0, phi1, phi2;
    /// rms of surface - (phi0 + phi1 dY + phi2 dY^2) over valid cells.
    double truncation_rms = 0.0;
    /// rms of surface - ape_to_surface(phi0) over cells valid in both: zero for a Y xi(X/Y) surface.
    double structure_rms = 0.0;
    bool structure_ok = true;
};

/// Coefficients from the Y = Y0 row with central differences along X.
TaylorCoeffs taylor_decompose(const PhaseErrorSurface& surface, double tolerance = 1e-3);

/// phi1 = (phi0 - X phi0') / Y0 by central differences.
RcmProfile rcm_from_ape(const ApeProfile& phi0, double y0);

struct QuadraticFamily {
    ApeProfile phi0;
    RcmProfile phi1;
    std::vector<double> phi2;
};
/// phi0 = a X^2, phi1 = -a X^2 / Y0, phi2 = a X^2 / Y0^2.
QuadraticFamily quadratic_family(double a, const UniformAxis& x, double y0);

}  // namespace kasar::structure
