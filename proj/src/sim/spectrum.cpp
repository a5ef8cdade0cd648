#include "kasar/sim/spectrum.hpp"

#include <cmath>

#include "kasar/core/error.hpp"

namespace kasar::sim {

pfa::CartesianSpectrum inject_spectrum_error(const pfa::CartesianSpectrum& spec,
                                             const structure::PhaseErrorSurface& surface) {
    require(surface.matches(spec.grid) && surface.values.same_shape(spec.data),
            "inject_spectrum_error: surface grid differs from spectrum grid");
    pfa::CartesianSpectrum out = spec;
    for (std::size_t i = 0; i < out.data.rows(); ++i)
        for (std::size_t j = 0; j < out.data.cols(); ++j)
            if (surface.valid(i, j)) out.data(i, j) *= std::polar(1.0, surface.values(i, j));
    return out;
}

pfa::CartesianSpectrum synth_cartesian_spectrum(const TargetScene& scene, const CartesianGrid& grid) {
    scene.validate();
    pfa::CartesianSpectrum out;
    out.grid = grid;
    out.data = ComplexMatrix(grid.rows(), grid.cols());
    out.coverage = Mask(grid.rows(), grid.cols(), 1);
    std::vector<cplx> ey(grid.cols());
    for (const Target& t : scene.targets) {
        for (std::size_t j = 0; j < grid.cols(); ++j) ey[j] = std::polar(1.0, t.y * grid.y.value(j));
        for (std::size_t i = 0; i < grid.rows(); ++i) {
            const cplx ex = t.amplitude * std::polar(1.0, t.x * grid.x.value(i));
            auto row = out.data.row(i);
            for (std::size_t j = 0; j < grid.cols(); ++j) row[j] += ex * ey[j];
        }
    }
    return out;
}

namespace {

CubicSpline build_xi(const FlightGeometry& g, const RangeErrorProfile& err) {
    g.validate();
    require(err.values.size() == g.size(), "SpatialErrorModel: error not on slow-time axis");
    std::vector<double> u(g.size()), xi(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        u[k] = std::tan(g.theta[k]);
        xi[k] = err.values[k] / (std::sin(g.phi[k]) * std::cos(g.theta[k]));
    }
    return CubicSpline(std::move(u), std::move(xi));
}

}  // namespace

SpatialErrorModel::SpatialErrorModel(const FlightGeometry& geometry, const RangeErrorProfile& err)
    : xi_(build_xi(geometry, err)) {}

structure::PhaseErrorSurface SpatialErrorModel::surface(const CartesianGrid& grid) const {
    return structure::surface_from_xi([this](double u) { return xi_(u); }, u_min(), u_max(), grid);
}

structure::ApeProfile SpatialErrorModel::ape(const CartesianGrid& grid) const {
    structure::ApeProfile p{grid.x, std::vector<double>(grid.x.size, 0.0)};
    for (std::size_t i = 0; i < grid.x.size; ++i) {
        const double u = grid.x.value(i) / grid.y0;
        if (xi_.contains(u)) p.values[i] = grid.y0 * xi_(u);
    }
    return p;
}

}  // namespace kasar::sim
