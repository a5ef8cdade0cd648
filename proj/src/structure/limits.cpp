#include "kasar/structure/limits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kasar/core/error.hpp"
#include "kasar/core/fit.hpp"

namespace kasar::structure {

namespace {
constexpr double kPi = std::numbers::pi;

double peak_to_peak(const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
}
}  // namespace

std::string to_string(Region r) {
    switch (r) {
        case Region::none: return "none";
        case Region::one_d: return "1-D";
        case Region::two_d: return "2-D";
        case Region::accurate_two_d: return "accurate-2-D";
    }
    return "unknown";
}

Region LimitReport::classify(double a) const {
    const double m = std::abs(a);
    if (m > a_defocus) return Region::accurate_two_d;
    if (m > a_rcm) return Region::two_d;
    if (m > a_ape) return Region::one_d;
    return Region::none;
}

LimitReport necessity_limits(double rho_x, double rho_y, double y0) {
    require(rho_x > 0.0 && rho_y > 0.0 && y0 > 0.0, "necessity_limits: inputs must be > 0");
    LimitReport r;
    r.rho_x = rho_x;
    r.rho_y = rho_y;
    r.y0 = y0;
    r.a_ape = rho_x * rho_x / (4.0 * kPi);
    r.a_rcm = y0 * rho_x * rho_x * rho_y / (2.0 * kPi * kPi);
    r.a_defocus = y0 * y0 * rho_x * rho_x * rho_y * rho_y / (4.0 * kPi * kPi * kPi);
    return r;
}

BoundaryResolutions boundary_resolutions(double a, double y0) {
    require(a > 0.0 && y0 > 0.0, "boundary_resolutions: inputs must be > 0");
    return {std::sqrt(4.0 * kPi * a), std::cbrt(2.0 * kPi * kPi * a / y0),
            std::pow(4.0 * kPi * kPi * kPi * a / (y0 * y0), 0.25)};
}

ProfileAssessment classify_profile(const ApeProfile& phi0, const CartesianGrid& grid) {
    require(phi0.x == grid.x && phi0.values.size() == grid.x.size, "classify_profile: profile not on grid");
    const std::vector<double> xs = grid.x.values();
    const RcmProfile phi1 = rcm_from_ape(phi0, grid.y0);
    ProfileAssessment out;
    out.ape_pp = peak_to_peak(remove_affine(xs, phi0.values));
    out.rcm_pp = peak_to_peak(remove_affine(xs, phi1.values));

    // phi2 = X^2 phi0'' / (2 Y0^2), from the exact band edge
    const std::size_t n = xs.size();
    const double h = grid.x.step;
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double d2 = (phi0.values[i + 1] - 2.0 * phi0.values[i] + phi0.values[i - 1]) / (h * h);
        worst = std::max(worst, std::abs(xs[i] * xs[i] * d2 / (2.0 * grid.y0 * grid.y0)));
    }
    const double dy = 0.5 * grid.y.span();
    out.defocus_peak = worst * dy * dy;

    const double rho_y = grid.pixel_y();
    if (out.defocus_peak > kPi / 4.0)
        out.region = Region::accurate_two_d;
    else if (out.rcm_pp > rho_y / 2.0)
        out.region = Region::two_d;
    else if (out.ape_pp > kPi / 4.0)
        out.region = Region::one_d;
    return out;
}

}  // namespace kasar::structure
