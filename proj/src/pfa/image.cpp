#include "kasar/pfa/image.hpp"

#include <cmath>
#include <numbers>

#include "kasar/core/error.hpp"
#include "kasar/core/fft.hpp"

namespace kasar::pfa {

std::string to_string(TaperKind k) {
    switch (k) {
        case TaperKind::none: return "none";
        case TaperKind::hann: return "hann";
        case TaperKind::hamming: return "hamming";
    }
    return "unknown";
}

TaperKind taper_from_string(const std::string& s) {
    if (s == "none") return TaperKind::none;
    if (s == "hann") return TaperKind::hann;
    if (s == "hamming") return TaperKind::hamming;
    throw InputError("unknown taper '" + s + "'");
}

std::vector<double> taper_weights(TaperKind k, std::size_t n) {
    std::vector<double> w(n, 1.0);
    if (k == TaperKind::none) return w;
    const double a0 = k == TaperKind::hann ? 0.5 : 0.54;
    for (std::size_t i = 0; i < n; ++i)
        w[i] = a0 - (1.0 - a0) * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
    return w;
}

double ComplexImage::x_position(double row) const {
    return (row - static_cast<double>(data.rows() / 2)) * pixel_x();
}
double ComplexImage::y_position(double col) const {
    return (col - static_cast<double>(data.cols() / 2)) * pixel_y();
}

ComplexImage form_image(const CartesianSpectrum& spec, TaperKind taper) {
    require(spec.data.rows() == spec.grid.rows() && spec.data.cols() == spec.grid.cols(),
            "form_image: data shape differs from grid");
    ComplexImage img;
    img.grid = spec.grid;
    img.taper = taper;
    img.coverage = spec.coverage.empty() ? Mask(spec.data.rows(), spec.data.cols(), 1) : spec.coverage;
    img.data = spec.data;
    if (taper != TaperKind::none) {
        const auto wr = taper_weights(taper, img.data.rows());
        const auto wc = taper_weights(taper, img.data.cols());
        for (std::size_t i = 0; i < img.data.rows(); ++i)
            for (std::size_t j = 0; j < img.data.cols(); ++j) img.data(i, j) *= wr[i] * wc[j];
    }
    fft::centered_rows(img.data, fft::Direction::forward);
    fft::centered_cols(img.data, fft::Direction::forward);
    return img;
}

CartesianSpectrum unform_image(const ComplexImage& img) {
    CartesianSpectrum spec;
    spec.grid = img.grid;
    spec.coverage = img.coverage.empty() ? Mask(img.data.rows(), img.data.cols(), 1) : img.coverage;
    spec.data = img.data;
    fft::centered_cols(spec.data, fft::Direction::inverse);
    fft::centered_rows(spec.data, fft::Direction::inverse);
    if (img.taper != TaperKind::none) {
        const auto wr = taper_weights(img.taper, spec.data.rows());
        const auto wc = taper_weights(img.taper, spec.data.cols());
        for (std::size_t i = 0; i < spec.data.rows(); ++i) {
            for (std::size_t j = 0; j < spec.data.cols(); ++j) {
                const double w = wr[i] * wc[j];
                if (w == 0.0) {
                    spec.data(i, j) = 0.0;
                    spec.coverage(i, j) = 0;
                } else {
                    spec.data(i, j) /= w;
                }
            }
        }
    }
    return spec;
}

RangeCompressed range_compress(const CartesianSpectrum& spec) {
    RangeCompressed rc{spec.data, spec.grid.x, spec.grid.pixel_y()};
    fft::centered_rows(rc.data, fft::Direction::forward);
    return rc;
}

}  // namespace kasar::pfa
