#pragma once

#include <string>
#include <vector>

#include "kasar/pfa/image.hpp"
#include "kasar/structure/surface.hpp"

namespace kasar::estimators {

struct PgaConfig {
    int max_iterations = 20;
    std::size_t initial_window = 64;  // pixels; the 10 dB width wins when larger
    double window_shrink = 0.7;
    std::size_t min_window = 8;
    double snr_floor_db = 10.0;  // bin energy over median bin energy
    std::size_t target_bins = 16;
    double rms_tolerance = 0.05;  // rad
    void validate() const;
};

enum class ReferenceMode { first, running_mean };
std::string to_string(ReferenceMode m);
ReferenceMode reference_from_string(const std::string& s);

struct RcmConfig {
    ReferenceMode reference = ReferenceMode::running_mean;
    int upsample = 8;
    int smoothing_degree = 8;
    double sharpness_floor = 0.5;
    double low_confidence_fraction = 0.2;
    void validate() const;
};

struct EstimatorConfig {
    PgaConfig pga;
    RcmConfig rcm;
};

struct EstimateDiagnostics {
    std::vector<double> rms_per_iteration;  // rad
    std::vector<std::size_t> selected_bins;
    std::vector<std::size_t> window_per_iteration;
    std::vector<double> sharpness;  // per azimuth sample
    bool converged = false;
    bool low_confidence = false;
    std::string note;
};

/// Keeps the central cols/factor Y samples and forms an untapered image.
pfa::ComplexImage coarse_range_preprocess(const pfa::CartesianSpectrum& spec, std::size_t factor);

struct ApeEstimate {
    structure::ApeProfile phi0;  // rad, affine part removed
    EstimateDiagnostics diag;
};

/// Phase gradient autofocus on azimuth lines (image rows are azimuth, columns range bins).
ApeEstimate estimate_ape_pga(const pfa::ComplexImage& img, const PgaConfig& cfg = {});

struct RcmEstimate {
    structure::RcmProfile phi1;  // m, constant and linear parts removed
    std::vector<double> raw_shift_cells;
    EstimateDiagnostics diag;
};

/// Range alignment of the magnitude profiles of range-compressed data.
RcmEstimate estimate_rcm(const pfa::RangeCompressed& rc, const RcmConfig& cfg = {});

}  // namespace kasar::estimators
