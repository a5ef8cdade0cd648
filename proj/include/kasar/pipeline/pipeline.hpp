#pragma once

#include <string>
#include <vector>

#include "kasar/estimators/estimators.hpp"
#include "kasar/pfa/image.hpp"
#include "kasar/structure/surface.hpp"

namespace kasar::pipeline {

enum class Mode { ka, one_d, prior2d };
std::string to_string(Mode m);
/// "ka", "1d" or "prior2d"; throws InputError otherwise.
Mode mode_from_string(const std::string& s);

struct PipelineConfig {
    Mode mode = Mode::ka;
    bool coarse_rcm_stage = true;
    bool fine_ape_stage = true;
    int outer_iterations = 1;
    std::size_t coarse_factor = 8;
    /// Clear spectrum cells the mapped surface could not cover, so they cannot leak
    /// uncompensated energy into the image.
    bool zero_invalid = true;
    /// Leave a stage's estimate unapplied when it is inside the necessity limits:
    /// migration under half a range cell, or azimuth phase under pi/4 peak to peak.
    bool skip_negligible = true;
    estimators::EstimatorConfig estimators;
    void validate() const;
};

struct CompensationResult {
    pfa::CartesianSpectrum spectrum;
    std::size_t untouched = 0;  // cells outside the surface mask
};

/// exp(-j Phi_e) inside the validity mask; outside, identity or (zero_invalid) zero with coverage cleared.
CompensationResult compensate_surface(const pfa::CartesianSpectrum& spec, const structure::PhaseErrorSurface& surface,
                                      bool zero_invalid = false);

struct StageReport {
    std::string name;  // "rcm" or "ape"
    int pass = 0;
    std::vector<double> profile;  // phi1 (m) or phi0 (rad)
    double surface_peak_to_peak = 0.0;
    double surface_rms = 0.0;
    std::size_t masked_cells = 0;
    double entropy_before = 0.0;
    double entropy_after = 0.0;
    double residual_rcm_cells = 0.0;
    double runtime_s = 0.0;
    bool applied = true;
    bool low_confidence = false;
    std::string note;
};

struct PipelineReport {
    Mode mode = Mode::ka;
    std::vector<StageReport> stages;
    double entropy_input = 0.0;
    double entropy_final = 0.0;
    double runtime_s = 0.0;
};

struct PipelineResult {
    pfa::ComplexImage image;
    pfa::CartesianSpectrum spectrum;
    PipelineReport report;
};

/// Dispatches on cfg.mode.
PipelineResult run_autofocus(const pfa::CartesianSpectrum& spec, const PipelineConfig& cfg);

PipelineResult ka_autofocus(const pfa::CartesianSpectrum& spec, PipelineConfig cfg);
PipelineResult baseline_1d(const pfa::CartesianSpectrum& spec, PipelineConfig cfg);
PipelineResult baseline_prior2d(const pfa::CartesianSpectrum& spec, PipelineConfig cfg);

/// Peak-to-peak migration in range cells left in a spectrum, by range alignment over the
/// central run of rows with full coverage.
double residual_rcm_cells(const pfa::CartesianSpectrum& spec, const estimators::RcmConfig& cfg);

}  // namespace kasar::pipeline
