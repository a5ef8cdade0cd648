#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "kasar/core/error.hpp"
#include "kasar/core/fft.hpp"
#include "kasar/core/fit.hpp"
#include "kasar/estimators/estimators.hpp"

namespace kasar::estimators {

void PgaConfig::validate() const {
    require(max_iterations >= 1, "pga: max_iterations must be >= 1");
    require(window_shrink > 0.0 && window_shrink < 1.0, "pga: window_shrink must be in (0, 1)");
    require(min_window >= 2 && initial_window >= min_window, "pga: bad window sizes");
    require(target_bins >= 1, "pga: target_bins must be >= 1");
    require(rms_tolerance > 0.0, "pga: rms_tolerance must be > 0");
}

namespace {

/// Bins whose energy beats the median bin by the floor, strongest first.
std::vector<std::size_t> select_bins(const ComplexMatrix& img, const PgaConfig& cfg) {
    const std::size_t n = img.rows(), m = img.cols();
    std::vector<double> e(m, 0.0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < m; ++c) e[c] += std::norm(img(r, c));
    std::vector<double> sorted = e;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(m / 2), sorted.end());
    const double median = sorted[m / 2];
    const double floor = median * std::pow(10.0, cfg.snr_floor_db / 10.0);
    std::vector<std::size_t> idx;
    for (std::size_t c = 0; c < m; ++c)
        if (e[c] > 0.0 && e[c] >= floor) idx.push_back(c);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return e[a] > e[b]; });
    if (idx.size() > cfg.target_bins) idx.resize(cfg.target_bins);
    std::sort(idx.begin(), idx.end());
    return idx;
}

/// Symmetric extent about the center of all samples within 10 dB of the center value.
/// Outermost crossings rather than the first dip, since defocused responses are speckled.
std::size_t ten_db_width(const std::vector<double>& p) {
    const std::size_t n = p.size(), c = n / 2;
    const double thr = p[c] * 0.1;
    std::size_t reach = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (p[i] >= thr) reach = std::max(reach, i > c ? i - c : c - i);
    return 2 * reach + 1;
}

/// Moves the scatterer at the center sample onto the sample grid, so the window truncates
/// it symmetrically. The shift comes from the mean phase slope of the line's spectrum and is
/// clamped to half a pixel.
void center_subpixel(std::vector<cplx>& ln) {
    const std::size_t n = ln.size();
    fft::centered(ln, fft::Direction::inverse);
    cplx lag{};
    for (std::size_t i = 1; i < n; ++i) lag += std::conj(ln[i - 1]) * ln[i];
    const double half_pixel = std::numbers::pi / static_cast<double>(n);
    const double slope = std::clamp(std::arg(lag), -half_pixel, half_pixel);
    for (std::size_t i = 0; i < n; ++i)
        ln[i] *= std::polar(1.0, -slope * (static_cast<double>(i) - static_cast<double>(n / 2)));
    fft::centered(ln, fft::Direction::forward);
}

}  // namespace

ApeEstimate estimate_ape_pga(const pfa::ComplexImage& img, const PgaConfig& cfg) {
    cfg.validate();
    const std::size_t n = img.data.rows(), m = img.data.cols();
    require(n >= 4 && m >= 1, "pga: image too small");
    require(img.grid.x.size == n, "pga: image rows differ from grid X axis");

    ApeEstimate out;
    out.phi0 = {img.grid.x, std::vector<double>(n, 0.0)};
    ComplexMatrix work = img.data;
    const std::vector<double> xs = img.grid.x.values();
    std::size_t window = 0;
    const std::size_t mid = n / 2;
    std::vector<cplx> line(n);

    for (int it = 0; it < cfg.max_iterations; ++it) {
        const std::vector<std::size_t> bins = select_bins(work, cfg);
        if (it == 0) out.diag.selected_bins = bins;
        if (bins.size() < cfg.target_bins) {
            out.diag.low_confidence = true;
            out.diag.note = "only " + std::to_string(bins.size()) + " of " + std::to_string(cfg.target_bins) +
                            " range bins pass the snr floor";
        }
        if (bins.empty()) {
            out.diag.note = "no range bin passes the snr floor";
            break;
        }

        // Circularly center each bin's brightest pixel.
        std::vector<std::vector<cplx>> lines(bins.size(), std::vector<cplx>(n));
        std::vector<double> energy(n, 0.0);
        for (std::size_t b = 0; b < bins.size(); ++b) {
            std::size_t peak = 0;
            double best = -1.0;
            for (std::size_t r = 0; r < n; ++r) {
                const double v = std::norm(work(r, bins[b]));
                if (v > best) {
                    best = v;
                    peak = r;
                }
            }
            for (std::size_t r = 0; r < n; ++r) {
                lines[b][r] = work((r + peak + n - mid) % n, bins[b]);
                energy[r] += std::norm(lines[b][r]);
            }
        }
        if (it == 0)
            window = std::min(n, std::max(cfg.initial_window, ten_db_width(energy)));
        else
            window = std::max(cfg.min_window, static_cast<std::size_t>(std::floor(window * cfg.window_shrink)));
        out.diag.window_per_iteration.push_back(window);

        const std::size_t w_lo = mid - std::min(mid, window / 2);
        const std::size_t w_hi = std::min(n, w_lo + window);
        std::vector<cplx> acc(n, cplx{});
        for (auto& ln : lines) {
            center_subpixel(ln);
            for (std::size_t r = 0; r < n; ++r)
                if (r < w_lo || r >= w_hi) ln[r] = 0.0;
            fft::centered(ln, fft::Direction::inverse);
            for (std::size_t i = 1; i < n; ++i) acc[i] += std::conj(ln[i - 1]) * ln[i];
        }
        std::vector<double> phi(n, 0.0);
        for (std::size_t i = 1; i < n; ++i) phi[i] = phi[i - 1] + std::arg(acc[i]);
        phi = remove_affine(xs, phi);

        double ss = 0.0;
        for (double v : phi) ss += v * v;
        const double rms = std::sqrt(ss / static_cast<double>(n));
        out.diag.rms_per_iteration.push_back(rms);
        for (std::size_t i = 0; i < n; ++i) out.phi0.values[i] += phi[i];

        // Apply the update in the azimuth spatial-frequency domain.
        for (std::size_t c = 0; c < m; ++c) {
            for (std::size_t r = 0; r < n; ++r) line[r] = work(r, c);
            fft::centered(line, fft::Direction::inverse);
            for (std::size_t r = 0; r < n; ++r) line[r] *= std::polar(1.0, -phi[r]);
            fft::centered(line, fft::Direction::forward);
            for (std::size_t r = 0; r < n; ++r) work(r, c) = line[r];
        }
        if (rms < cfg.rms_tolerance) {
            out.diag.converged = true;
            break;
        }
    }
    out.phi0.values = remove_affine(xs, out.phi0.values);
    return out;
}

}  // namespace kasar::estimators
