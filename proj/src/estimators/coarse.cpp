#include "kasar/core/error.hpp"
#include "kasar/estimators/estimators.hpp"

namespace kasar::estimators {

pfa::ComplexImage coarse_range_preprocess(const pfa::CartesianSpectrum& spec, std::size_t factor) {
    require(factor >= 1, "coarse_range_preprocess: factor must be >= 1");
    const std::size_t cols = spec.data.cols();
    require(cols % factor == 0, "coarse_range_preprocess: factor must divide the Y sample count");
    const std::size_t m = cols / factor;
    require(m >= 32, "coarse_range_preprocess: fewer than 32 Y samples would remain");
    if (factor == 1) return pfa::form_image(spec);

    const std::size_t start = cols / 2 - m / 2;
    pfa::CartesianSpectrum sub;
    sub.grid = spec.grid;
    sub.grid.y = {spec.grid.y.center, spec.grid.y.step, m};
    sub.data = ComplexMatrix(spec.data.rows(), m);
    sub.coverage = Mask(spec.data.rows(), m, 1);
    for (std::size_t i = 0; i < spec.data.rows(); ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            sub.data(i, j) = spec.data(i, start + j);
            if (!spec.coverage.empty()) sub.coverage(i, j) = spec.coverage(i, start + j);
        }
    }
    return pfa::form_image(sub);
}

}  // namespace kasar::estimators
