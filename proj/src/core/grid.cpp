#include "kasar/core/grid.hpp"

#include <numbers>

namespace kasar {

double CartesianGrid::pixel_x() const { return 2.0 * std::numbers::pi / x.span(); }
double CartesianGrid::pixel_y() const { return 2.0 * std::numbers::pi / y.span(); }

double CartesianGrid::range_frequency(double y_value) const {
    return y_value * c / (4.0 * std::numbers::pi * sin_ref) - fc;
}

double reference_y0(double fc, double sin_ref, double c) { return 4.0 * std::numbers::pi * sin_ref * fc / c; }

}  // namespace kasar
