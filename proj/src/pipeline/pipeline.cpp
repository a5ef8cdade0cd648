#include "kasar/pipeline/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "kasar/core/error.hpp"
#include "kasar/io/metrics.hpp"

namespace kasar::pipeline {

std::string to_string(Mode m) {
    switch (m) {
        case Mode::ka: return "ka";
        case Mode::one_d: return "1d";
        case Mode::prior2d: return "prior2d";
    }
    return "unknown";
}

Mode mode_from_string(const std::string& s) {
    if (s == "ka") return Mode::ka;
    if (s == "1d") return Mode::one_d;
    if (s == "prior2d") return Mode::prior2d;
    throw InputError("unknown autofocus mode '" + s + "'");
}

void PipelineConfig::validate() const {
    require(outer_iterations >= 1, "pipeline: outer_iterations must be >= 1");
    require(coarse_factor >= 1, "pipeline: coarse_factor must be >= 1");
    estimators.pga.validate();
    estimators.rcm.validate();
}

CompensationResult compensate_surface(const pfa::CartesianSpectrum& spec, const structure::PhaseErrorSurface& surface,
                                      bool zero_invalid) {
    require(surface.matches(spec.grid) && surface.values.same_shape(spec.data),
            "compensate_surface: surface grid differs from spectrum grid");
    CompensationResult out{spec, 0};
    for (std::size_t i = 0; i < spec.data.rows(); ++i) {
        for (std::size_t j = 0; j < spec.data.cols(); ++j) {
            if (surface.valid(i, j))
                out.spectrum.data(i, j) *= std::polar(1.0, -surface.values(i, j));
            else
                ++out.untouched;
        }
    }
    if (zero_invalid && out.untouched > 0) {
        if (out.spectrum.coverage.empty()) out.spectrum.coverage = Mask(spec.data.rows(), spec.data.cols(), 1);
        for (std::size_t k = 0; k < surface.valid.size(); ++k) {
            if (surface.valid.data()[k]) continue;
            out.spectrum.data.data()[k] = 0.0;
            out.spectrum.coverage.data()[k] = 0;
        }
    }
    return out;
}

double residual_rcm_cells(const pfa::CartesianSpectrum& spec, const estimators::RcmConfig& cfg) {
    pfa::RangeCompressed rc = pfa::range_compress(spec);
    // Rows with cleared cells carry a truncated band, whose profile moves for reasons other
    // than migration; measure over the central run of fully covered rows.
    if (!spec.coverage.empty()) {
        const std::size_t n = spec.grid.rows(), mid = n / 2;
        auto full = [&](std::size_t r) {
            for (std::size_t c = 0; c < spec.grid.cols(); ++c)
                if (!spec.coverage(r, c)) return false;
            return true;
        };
        std::size_t lo = mid, hi = mid + 1;
        if (full(mid)) {
            while (lo > 0 && full(lo - 1)) --lo;
            while (hi < n && full(hi)) ++hi;
            if (hi - lo >= 2 && hi - lo < n) {
                ComplexMatrix rows(hi - lo, spec.grid.cols());
                for (std::size_t r = lo; r < hi; ++r)
                    std::copy(rc.data.row(r).begin(), rc.data.row(r).end(), rows.row(r - lo).begin());
                rc.data = std::move(rows);
                rc.x = UniformAxis{spec.grid.x.value(lo + (hi - lo) / 2), spec.grid.x.step, hi - lo};
            }
        }
    }
    const auto est = estimators::estimate_rcm(rc, cfg);
    const auto [lo, hi] = std::minmax_element(est.phi1.values.begin(), est.phi1.values.end());
    return (*hi - *lo) / spec.grid.pixel_y();
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double entropy_of(const pfa::CartesianSpectrum& spec) { return io::image_entropy(pfa::form_image(spec).data); }

void summarize(const structure::PhaseErrorSurface& s, StageReport& st) {
    double lo = 0.0, hi = 0.0, ss = 0.0;
    std::size_t n = 0;
    bool first = true;
    for (std::size_t k = 0; k < s.values.size(); ++k) {
        if (!s.valid.data()[k]) continue;
        const double v = s.values.data()[k];
        if (first) {
            lo = hi = v;
            first = false;
        }
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        ss += v * v;
        ++n;
    }
    st.surface_peak_to_peak = hi - lo;
    st.surface_rms = n ? std::sqrt(ss / static_cast<double>(n)) : 0.0;
}

void apply(pfa::CartesianSpectrum& cur, const structure::PhaseErrorSurface& s, const PipelineConfig& cfg,
           StageReport& st) {
    summarize(s, st);
    CompensationResult r = compensate_surface(cur, s, cfg.zero_invalid);
    st.masked_cells = r.untouched;
    cur = std::move(r.spectrum);
}

double peak_to_peak(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
}

void skip(const structure::PhaseErrorSurface& s, StageReport& st, const char* why) {
    summarize(s, st);
    st.applied = false;
    st.note = st.note.empty() ? why : st.note + "; " + why;
}

StageReport rcm_stage(pfa::CartesianSpectrum& cur, const PipelineConfig& cfg, int pass) {
    const auto t0 = Clock::now();
    StageReport st;
    st.name = "rcm";
    st.pass = pass;
    st.entropy_before = entropy_of(cur);
    const auto est = estimators::estimate_rcm(pfa::range_compress(cur), cfg.estimators.rcm);
    st.profile = est.phi1.values;
    st.low_confidence = est.diag.low_confidence;
    st.note = est.diag.note;
    structure::PhaseErrorSurface surf = structure::rcm_to_surface(est.phi1, cur.grid);
    if (cfg.mode == Mode::prior2d) {
        const auto tc = structure::taylor_decompose(surf);
        surf = structure::first_order_surface({cur.grid.x, tc.phi0}, {cur.grid.x, tc.phi1}, cur.grid);
    }
    if (cfg.skip_negligible && peak_to_peak(est.phi1.values) < 0.5 * cur.grid.pixel_y())
        skip(surf, st, "migration within half a range cell; not applied");
    else
        apply(cur, surf, cfg, st);
    st.entropy_after = st.applied ? entropy_of(cur) : st.entropy_before;
    st.residual_rcm_cells = residual_rcm_cells(cur, cfg.estimators.rcm);
    st.runtime_s = seconds_since(t0);
    return st;
}

StageReport ape_stage(pfa::CartesianSpectrum& cur, const PipelineConfig& cfg, int pass) {
    const auto t0 = Clock::now();
    StageReport st;
    st.name = "ape";
    st.pass = pass;
    st.entropy_before = entropy_of(cur);
    const pfa::ComplexImage coarse = estimators::coarse_range_preprocess(cur, cfg.coarse_factor);
    const auto est = estimators::estimate_ape_pga(coarse, cfg.estimators.pga);
    st.profile = est.phi0.values;
    st.low_confidence = est.diag.low_confidence;
    st.note = est.diag.note;
    structure::PhaseErrorSurface surf;
    switch (cfg.mode) {
        case Mode::ka: surf = structure::ape_to_surface(est.phi0, cur.grid); break;
        case Mode::one_d: surf = structure::broadcast_ape(est.phi0, cur.grid); break;
        case Mode::prior2d:
            surf = structure::first_order_surface(est.phi0, structure::rcm_from_ape(est.phi0, cur.grid.y0), cur.grid);
            break;
    }
    if (cfg.skip_negligible && peak_to_peak(est.phi0.values) < std::numbers::pi / 4.0)
        skip(surf, st, "phase error within pi/4; not applied");
    else
        apply(cur, surf, cfg, st);
    st.entropy_after = st.applied ? entropy_of(cur) : st.entropy_before;
    st.residual_rcm_cells = residual_rcm_cells(cur, cfg.estimators.rcm);
    st.runtime_s = seconds_since(t0);
    return st;
}

}  // namespace

PipelineResult run_autofocus(const pfa::CartesianSpectrum& spec, const PipelineConfig& cfg) {
    cfg.validate();
    require(spec.data.rows() == spec.grid.rows() && spec.data.cols() == spec.grid.cols(),
            "autofocus: spectrum shape differs from grid");
    const auto t0 = Clock::now();
    PipelineResult res;
    res.report.mode = cfg.mode;
    pfa::CartesianSpectrum cur = spec;
    if (cur.coverage.empty()) cur.coverage = Mask(cur.data.rows(), cur.data.cols(), 1);
    res.report.entropy_input = entropy_of(cur);
    const bool rcm_on = cfg.coarse_rcm_stage && cfg.mode != Mode::one_d;
    for (int pass = 0; pass < cfg.outer_iterations; ++pass) {
        if (rcm_on) res.report.stages.push_back(rcm_stage(cur, cfg, pass));
        if (cfg.fine_ape_stage) res.report.stages.push_back(ape_stage(cur, cfg, pass));
    }
    res.image = pfa::form_image(cur);
    res.report.entropy_final = io::image_entropy(res.image.data);
    res.spectrum = std::move(cur);
    res.report.runtime_s = seconds_since(t0);
    return res;
}

PipelineResult ka_autofocus(const pfa::CartesianSpectrum& spec, PipelineConfig cfg) {
    cfg.mode = Mode::ka;
    return run_autofocus(spec, cfg);
}

PipelineResult baseline_1d(const pfa::CartesianSpectrum& spec, PipelineConfig cfg) {
    cfg.mode = Mode::one_d;
    return run_autofocus(spec, cfg);
}

PipelineResult baseline_prior2d(const pfa::CartesianSpectrum& spec, PipelineConfig cfg) {
    cfg.mode = Mode::prior2d;
    return run_autofocus(spec, cfg);
}

}  // namespace kasar::pipeline
