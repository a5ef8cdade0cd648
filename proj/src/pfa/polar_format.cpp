#include "kasar/pfa/polar_format.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kasar/core/error.hpp"

namespace kasar::pfa {
namespace {

double delta_r(double sin_ref, double phi, double theta) { return sin_ref / (std::sin(phi) * std::cos(theta)); }

}  // namespace

CartesianGrid design_grid(const sim::PhaseHistory& ph, const GridConfig& cfg) {
    require(cfg.rows >= 8 && cfg.cols >= 8, "design_grid: grid too small");
    const sim::RadarParams& radar = ph.radar;
    const sim::FlightGeometry& geo = ph.geometry;
    radar.validate();
    geo.validate();
    const std::size_t np = geo.size();
    require(2 * cfg.guard + 2 < np, "design_grid: guard leaves no pulses");
    require(2 * cfg.guard + 2 < radar.range_freq_samples, "design_grid: guard leaves no band");

    const double fc = radar.center_frequency;
    const double sin_ref = std::sin(geo.phi_ref);
    const UniformAxis fr = radar.range_freq_axis();
    const double f_lo = fr.value(cfg.guard), f_hi = fr.value(fr.size - 1 - cfg.guard);
    double lower = -1e300, upper = 1e300;
    for (std::size_t k = 0; k < np; ++k) {
        const double d = delta_r(sin_ref, geo.phi[k], geo.theta[k]);
        lower = std::max(lower, (fc + f_lo) / d - fc);
        upper = std::min(upper, (fc + f_hi) / d - fc);
    }
    require(lower < 0.0 && upper > 0.0, "design_grid: no common range band around fc");
    const double half = std::min(-lower, upper);
    const double step_f = 2.0 * half / static_cast<double>(cfg.cols);
    const double ky = 4.0 * std::numbers::pi * sin_ref / radar.c;

    CartesianGrid g;
    g.fc = fc;
    g.sin_ref = sin_ref;
    g.c = radar.c;
    g.y0 = reference_y0(fc, sin_ref, radar.c);
    g.y = {g.y0, ky * step_f, cfg.cols};

    const std::size_t klo = cfg.guard, khi = np - 1 - cfg.guard;
    const double tlo = std::tan(geo.theta[klo]), thi = std::tan(geo.theta[khi]);
    require(tlo < 0.0 && thi > 0.0, "design_grid: aperture does not straddle theta = 0");
    const bool lo_side = -tlo < thi;
    const double tan_lim = lo_side ? -tlo : thi;
    const double t_lim = std::abs(geo.slow_time.value(lo_side ? klo : khi));
    const double x_max = g.y.front() * tan_lim;
    g.x = {0.0, 2.0 * x_max / static_cast<double>(cfg.rows), cfg.rows};

    g.keystone.slow_time = geo.slow_time;
    g.keystone.tan_theta.resize(np);
    for (std::size_t k = 0; k < np; ++k) g.keystone.tan_theta[k] = std::tan(geo.theta[k]);
    g.keystone.t_limit = t_lim;
    g.keystone.omega = tan_lim / t_lim;
    return g;
}

RangeResampled range_resample(const sim::PhaseHistory& ph, const UniformAxis& out_fr, const InterpolatorConfig& interp) {
    const sim::RadarParams& radar = ph.radar;
    const sim::FlightGeometry& geo = ph.geometry;
    require(ph.data.rows() == geo.size() && ph.data.cols() == radar.range_freq_samples,
            "range_resample: data shape differs from radar / geometry");
    require(out_fr.size >= 1 && out_fr.step > 0.0, "range_resample: bad output axis");
    const SincKernel kernel = interp.kernel();
    const UniformAxis in_fr = radar.range_freq_axis();
    const double fc = radar.center_frequency;

    RangeResampled rr;
    rr.sin_ref = std::sin(geo.phi_ref);
    rr.range_freq = out_fr;
    rr.radar = radar;
    rr.geometry = geo;
    rr.data = ComplexMatrix(geo.size(), out_fr.size);
    rr.coverage = Mask(geo.size(), out_fr.size, 1);
    const double last = static_cast<double>(in_fr.size - 1);
    for (std::size_t k = 0; k < geo.size(); ++k) {
        const double d = delta_r(rr.sin_ref, geo.phi[k], geo.theta[k]);
        const double offset = fc * (d - 1.0);
        const auto in = ph.data.row(k);
        auto out = rr.data.row(k);
        for (std::size_t j = 0; j < out_fr.size; ++j) {
            const double pos = in_fr.index_of(d * out_fr.value(j) + offset);
            if (pos < 0.0 || pos > last) {
                rr.coverage(k, j) = 0;
                continue;
            }
            out[j] = kernel.interpolate(in, pos);
        }
    }
    return rr;
}

RangeResampled range_resample(const sim::PhaseHistory& ph, const InterpolatorConfig& interp) {
    return range_resample(ph, ph.radar.range_freq_axis(), interp);
}

CartesianSpectrum azimuth_resample(const RangeResampled& rr, const CartesianGrid& grid,
                                   const InterpolatorConfig& interp) {
    const std::size_t np = rr.geometry.size();
    require(rr.data.rows() == np && rr.data.cols() == grid.cols(), "azimuth_resample: columns must match grid Y");
    require(grid.keystone.tan_theta.size() == np, "azimuth_resample: keystone table size");
    for (std::size_t k = 1; k < np; ++k)
        require(grid.keystone.tan_theta[k] > grid.keystone.tan_theta[k - 1],
                "azimuth_resample: tan(theta) must increase monotonically");
    const SincKernel kernel = interp.kernel();
    const UniformAxis& st = rr.geometry.slow_time;
    const Pchip inverse(grid.keystone.tan_theta, st.values());
    const double u_lo = grid.keystone.tan_theta.front(), u_hi = grid.keystone.tan_theta.back();

    CartesianSpectrum out;
    out.grid = grid;
    out.data = ComplexMatrix(grid.rows(), grid.cols());
    out.coverage = Mask(grid.rows(), grid.cols(), 1);
    std::vector<cplx> column(np);
    const double last = static_cast<double>(np - 1);
    for (std::size_t j = 0; j < grid.cols(); ++j) {
        for (std::size_t k = 0; k < np; ++k) column[k] = rr.data(k, j);
        const double yv = grid.y.value(j);
        for (std::size_t i = 0; i < grid.rows(); ++i) {
            const double u = grid.x.value(i) / yv;
            bool ok = u >= u_lo && u <= u_hi;
            double pos = 0.0;
            if (ok) {
                pos = st.index_of(inverse(u));
                ok = pos >= 0.0 && pos <= last;
            }
            if (ok) {
                const auto k0 = static_cast<std::size_t>(std::floor(pos));
                const std::size_t k1 = std::min(k0 + 1, np - 1);
                ok = rr.coverage(k0, j) && rr.coverage(k1, j);
            }
            if (!ok) {
                out.coverage(i, j) = 0;
                continue;
            }
            out.data(i, j) = kernel.interpolate(column, pos);
        }
    }
    return out;
}

CartesianSpectrum polar_format(const sim::PhaseHistory& ph, const PfaConfig& cfg) {
    const CartesianGrid grid = design_grid(ph, cfg.grid);
    const UniformAxis out_fr{0.0, grid.y.step * grid.c / (4.0 * std::numbers::pi * grid.sin_ref), grid.cols()};
    const RangeResampled rr = range_resample(ph, out_fr, cfg.interp);
    return azimuth_resample(rr, grid, cfg.interp);
}

}  // namespace kasar::pfa
