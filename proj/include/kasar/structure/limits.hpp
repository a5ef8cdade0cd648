#pragma once

#include <string>

#include "kasar/structure/surface.hpp"

namespace kasar::structure {

enum class Region { none, one_d, two_d, accurate_two_d };

std::string to_string(Region r);

/// Thresholds on the quadratic coefficient a for phi0 = a X^2.
struct LimitReport {
    double rho_x = 0.0, rho_y = 0.0, y0 = 0.0;
    double a_ape = 0.0;      // azimuth defocus
    double a_rcm = 0.0;      // half a range cell of migration
    double a_defocus = 0.0;  // second-order range defocus

    /// The most severe violated limit decides the region.
    Region classify(double a) const;
};

LimitReport necessity_limits(double rho_x, double rho_y, double y0);

/// Square resolution cell rho at which each limit equals a.
struct BoundaryResolutions {
    double ape = 0.0, rcm = 0.0, defocus = 0.0;
};
BoundaryResolutions boundary_resolutions(double a, double y0);

/// Same comparisons for an arbitrary phi0 profile: peak-to-peak of affine-free phi0 against
/// pi/4, of affine-free phi1 against rho_y/2, and of phi2 (Ymax - Y0)^2 against pi/4.
struct ProfileAssessment {
    double ape_pp = 0.0;      // rad
    double rcm_pp = 0.0;      // m
    double defocus_peak = 0.0;  // rad, max over X
    Region region = Region::none;
};
ProfileAssessment classify_profile(const ApeProfile& phi0, const CartesianGrid& grid);

}  // namespace kasar::structure
