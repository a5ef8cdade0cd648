#include <algorithm>
#include <cmath>
#include <numbers>

#include "kasar/core/error.hpp"
#include "kasar/core/fft.hpp"
#include "kasar/core/fit.hpp"
#include "kasar/estimators/estimators.hpp"

namespace kasar::estimators {

std::string to_string(ReferenceMode m) { return m == ReferenceMode::first ? "first" : "running-mean"; }

ReferenceMode reference_from_string(const std::string& s) {
    if (s == "first") return ReferenceMode::first;
    if (s == "running-mean") return ReferenceMode::running_mean;
    throw InputError("unknown rcm reference mode '" + s + "'");
}

void RcmConfig::validate() const {
    require(upsample >= 4, "rcm: upsample must be >= 4");
    require(smoothing_degree >= 1, "rcm: smoothing degree must be >= 1");
    require(sharpness_floor >= 0.0 && sharpness_floor <= 1.0, "rcm: sharpness floor must be in [0, 1]");
    require(low_confidence_fraction >= 0.0 && low_confidence_fraction <= 1.0, "rcm: bad low-confidence fraction");
}

namespace {

double signed_bin(std::size_t k, std::size_t n) {
    return k < (n + 1) / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n);
}

struct Correlator {
    std::size_t m;
    int up;
    std::vector<cplx> ref_spec, prof_spec, fine;

    Correlator(std::size_t m_, int up_) : m(m_), up(up_), ref_spec(m_), prof_spec(m_), fine(m_ * up_) {}

    /// Sub-cell lag s maximizing sum_n ref(n) p(n + s).
    double lag(const std::vector<double>& ref, const std::vector<double>& p) {
        for (std::size_t i = 0; i < m; ++i) {
            ref_spec[i] = ref[i];
            prof_spec[i] = p[i];
        }
        fft::plain(ref_spec, fft::Direction::forward);
        fft::plain(prof_spec, fft::Direction::forward);
        const std::size_t big = m * static_cast<std::size_t>(up);
        std::fill(fine.begin(), fine.end(), cplx{});
        for (std::size_t k = 0; k < m; ++k) {
            const double sb = signed_bin(k, m);
            const std::size_t dst = sb >= 0 ? static_cast<std::size_t>(sb) : big - static_cast<std::size_t>(-sb);
            fine[dst] = std::conj(ref_spec[k]) * prof_spec[k];
        }
        fft::plain(fine, fft::Direction::inverse);
        std::size_t best = 0;
        for (std::size_t i = 1; i < big; ++i)
            if (fine[i].real() > fine[best].real()) best = i;
        const double ym = fine[(best + big - 1) % big].real(), y0 = fine[best].real(),
                     yp = fine[(best + 1) % big].real();
        const double den = ym - 2.0 * y0 + yp;
        const double frac = den < 0.0 ? 0.5 * (ym - yp) / den : 0.0;
        double l = (static_cast<double>(best) + frac) / up;
        if (l >= static_cast<double>(m) / 2.0) l -= static_cast<double>(m);
        return l;
    }
};

/// p(n + s) for sub-cell s, by Fourier shift.
std::vector<double> shift_profile(const std::vector<double>& p, double s) {
    const std::size_t m = p.size();
    std::vector<cplx> spec(p.begin(), p.end());
    fft::plain(spec, fft::Direction::forward);
    for (std::size_t k = 0; k < m; ++k) {
        if (m % 2 == 0 && k == m / 2) {
            spec[k] *= std::cos(std::numbers::pi * s);
            continue;
        }
        spec[k] *= std::polar(1.0, 2.0 * std::numbers::pi * signed_bin(k, m) * s / static_cast<double>(m));
    }
    fft::plain(spec, fft::Direction::inverse);
    std::vector<double> out(m);
    for (std::size_t i = 0; i < m; ++i) out[i] = spec[i].real();
    return out;
}

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

RcmEstimate estimate_rcm(const pfa::RangeCompressed& rc, const RcmConfig& cfg) {
    cfg.validate();
    const std::size_t n = rc.data.rows(), m = rc.data.cols();
    require(n >= 2, "estimate_rcm: need at least 2 azimuth samples");
    require(m >= 4, "estimate_rcm: range profiles too short");
    require(rc.x.size == n, "estimate_rcm: X axis differs from row count");

    RcmEstimate out;
    out.raw_shift_cells.assign(n, 0.0);
    out.diag.sharpness.assign(n, 0.0);
    Correlator corr(m, cfg.upsample);
    std::vector<double> ref;
    std::size_t count = 0;
    std::vector<double> fit_x, fit_v;
    std::size_t weak = 0;

    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> p(m);
        for (std::size_t j = 0; j < m; ++j) p[j] = std::abs(rc.data(i, j));
        const double pn = norm2(p);
        if (pn == 0.0) {
            ++weak;
            continue;
        }
        if (ref.empty()) {
            ref = p;
            count = 1;
            out.diag.sharpness[i] = 1.0;
            fit_x.push_back(rc.x.value(i));
            fit_v.push_back(0.0);
            continue;
        }
        const double s = corr.lag(ref, p);
        const std::vector<double> aligned = shift_profile(p, s);
        double dot = 0.0;
        for (std::size_t j = 0; j < m; ++j) dot += ref[j] * aligned[j];
        const double sharp = dot / (norm2(ref) * pn);
        out.diag.sharpness[i] = sharp;
        if (sharp < cfg.sharpness_floor) ++weak;
        out.raw_shift_cells[i] = s;
        fit_x.push_back(rc.x.value(i));
        fit_v.push_back(s);
        if (cfg.reference == ReferenceMode::running_mean) {
            for (std::size_t j = 0; j < m; ++j) ref[j] = (ref[j] * count + aligned[j]) / (count + 1);
            ++count;
        }
    }
    out.diag.low_confidence = static_cast<double>(weak) > cfg.low_confidence_fraction * static_cast<double>(n);
    if (out.diag.low_confidence) out.diag.note = "range correlation below sharpness floor on too many pulses";

    const std::vector<double> xs = rc.x.values();
    std::vector<double> smooth = legendre_fit(fit_x, fit_v, cfg.smoothing_degree, xs);
    smooth = remove_affine(xs, smooth);
    out.phi1 = {rc.x, std::vector<double>(n)};
    for (std::size_t i = 0; i < n; ++i) out.phi1.values[i] = smooth[i] * rc.range_pixel;
    out.diag.converged = !out.diag.low_confidence;
    return out;
}

}  // namespace kasar::estimators
