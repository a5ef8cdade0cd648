#pragma once

#include <string>
#include <vector>

#include "kasar/pfa/polar_format.hpp"

namespace kasar::pfa {

enum class TaperKind { none, hann, hamming };

std::string to_string(TaperKind k);
/// Throws InputError on unknown names.
TaperKind taper_from_string(const std::string& s);

/// Separable window, periodic form so the center sample has weight 1.
std::vector<double> taper_weights(TaperKind k, std::size_t n);

struct ComplexImage {
    ComplexMatrix data;  // azimuth rows, range columns
    CartesianGrid grid;
    Mask coverage;
    TaperKind taper = TaperKind::none;

    double pixel_x() const { return grid.pixel_x(); }
    double pixel_y() const { return grid.pixel_y(); }
    /// Scene position (m) of pixel row / column.
    double x_position(double row) const;
    double y_position(double col) const;
};

ComplexImage form_image(const CartesianSpectrum& spec, TaperKind taper = TaperKind::none);

/// Inverse of form_image; the taper is divided out where it is nonzero. Cells where it is zero
/// come back as zero and are cleared in the coverage mask.
CartesianSpectrum unform_image(const ComplexImage& img);

/// Transform along Y only: rows stay azimuth spatial frequency, columns become range pixels.
struct RangeCompressed {
    ComplexMatrix data;
    UniformAxis x;         // rad/m
    double range_pixel;    // m
};
RangeCompressed range_compress(const CartesianSpectrum& spec);

}  // namespace kasar::pfa
