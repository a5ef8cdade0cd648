#pragma once

#include <optional>
#include <vector>

#include "kasar/core/matrix.hpp"
#include "kasar/pfa/image.hpp"

namespace kasar::io {

/// -sum p ln p with p = |I|^2 / sum |I|^2. Throws InputError on an all-zero image.
double image_entropy(const ComplexMatrix& img);
/// std(|I|^2) / mean(|I|^2).
double image_contrast(const ComplexMatrix& img);

struct Peak {
    std::size_t row = 0, col = 0;
    double magnitude = 0.0;
};

/// Local maxima of |I| at least floor_db below the global maximum, strongest first, no two
/// closer than min_separation pixels (Chebyshev).
std::vector<Peak> find_peaks(const ComplexMatrix& img, std::size_t max_count, double floor_db = -20.0,
                             std::size_t min_separation = 8);

struct Cut {
    double irw_pixels = 0.0;
    double pslr_db = 0.0;
};

struct PointResponse {
    double row = 0.0, col = 0.0;  // refined peak, fractional pixels
    Cut azimuth, range;           // azimuth runs along rows, range along columns
    double peak_magnitude = 0.0;
};

/// Band-limited cuts through a point response, evaluated from the image's own spectrum so
/// the interpolation is exact for a DFT image.
class ImpulseAnalyzer {
public:
    explicit ImpulseAnalyzer(const ComplexMatrix& img);

    /// Analyze the response near (row, col). Sidelobes are searched within +-half_width pixels.
    /// Throws InputError if no isolated main lobe is found.
    PointResponse analyze(std::size_t row, std::size_t col, std::size_t half_width = 16, int upsample = 32) const;

    /// Complex value at fractional pixel (row, col).
    cplx at(double row, double col) const;

private:
    std::vector<cplx> azimuth_cut(double col, double row_center, double half_width, int upsample) const;
    std::vector<cplx> range_cut(double row, double col_center, double half_width, int upsample) const;

    std::size_t rows_, cols_;
    ComplexMatrix spec_;  // centered spectrum of the image
};

PointResponse point_response_metrics(const ComplexMatrix& img, std::size_t row, std::size_t col,
                                     std::size_t half_width = 16, int upsample = 32);

/// Pearson correlation of |a| and |b| after registering b onto a with a sub-pixel shift.
/// Nyquist row and column are excluded from both.
double registered_correlation(const ComplexMatrix& a, const ComplexMatrix& b);

struct TargetMetrics {
    double row = 0.0, col = 0.0;
    double irw_azimuth_m = 0.0, irw_range_m = 0.0;
    double pslr_azimuth_db = 0.0, pslr_range_db = 0.0;
};

struct FocusMetrics {
    double entropy = 0.0;
    double contrast = 0.0;
    std::vector<TargetMetrics> targets;
    double mean_irw_azimuth_m = 0.0, mean_irw_range_m = 0.0;
    double mean_pslr_azimuth_db = 0.0, mean_pslr_range_db = 0.0;
    std::optional<double> residual_rcm_cells;
};

/// Entropy, contrast and per-target point responses of the strongest max_targets peaks.
FocusMetrics focus_metrics(const pfa::ComplexImage& img, std::size_t max_targets = 9);

}  // namespace kasar::io
