#include "kasar/io/metrics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "kasar/core/error.hpp"
#include "kasar/core/fft.hpp"

namespace kasar::io {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double image_entropy(const ComplexMatrix& img) {
    double total = 0.0;
    for (const cplx& v : img) total += std::norm(v);
    require(total > 0.0, "image_entropy: all-zero image");
    double h = 0.0;
    for (const cplx& v : img) {
        const double p = std::norm(v) / total;
        if (p > 0.0) h -= p * std::log(p);
    }
    return std::max(h, 0.0);
}

double image_contrast(const ComplexMatrix& img) {
    require(!img.empty(), "image_contrast: empty image");
    double s = 0.0, s2 = 0.0;
    for (const cplx& v : img) {
        const double p = std::norm(v);
        s += p;
        s2 += p * p;
    }
    require(s > 0.0, "image_contrast: all-zero image");
    const double n = static_cast<double>(img.size());
    const double mean = s / n;
    const double var = std::max(0.0, s2 / n - mean * mean);
    return std::sqrt(var) / mean;
}

std::vector<Peak> find_peaks(const ComplexMatrix& img, std::size_t max_count, double floor_db,
                             std::size_t min_separation) {
    const std::size_t n = img.rows(), m = img.cols();
    double top = 0.0;
    for (const cplx& v : img) top = std::max(top, std::abs(v));
    if (top == 0.0 || n < 3 || m < 3) return {};
    const double thr = top * std::pow(10.0, floor_db / 20.0);
    std::vector<Peak> cand;
    for (std::size_t r = 1; r + 1 < n; ++r) {
        for (std::size_t c = 1; c + 1 < m; ++c) {
            const double v = std::abs(img(r, c));
            if (v < thr) continue;
            bool is_max = true;
            for (int dr = -1; dr <= 1 && is_max; ++dr)
                for (int dc = -1; dc <= 1 && is_max; ++dc)
                    if ((dr || dc) && std::abs(img(r + dr, c + dc)) > v) is_max = false;
            if (is_max) cand.push_back({r, c, v});
        }
    }
    std::stable_sort(cand.begin(), cand.end(), [](const Peak& a, const Peak& b) { return a.magnitude > b.magnitude; });
    std::vector<Peak> out;
    for (const Peak& p : cand) {
        if (out.size() >= max_count) break;
        bool far = true;
        for (const Peak& q : out) {
            const auto dr = static_cast<std::size_t>(std::abs(static_cast<long>(p.row) - static_cast<long>(q.row)));
            const auto dc = static_cast<std::size_t>(std::abs(static_cast<long>(p.col) - static_cast<long>(q.col)));
            if (std::max(dr, dc) < min_separation) {
                far = false;
                break;
            }
        }
        if (far) out.push_back(p);
    }
    return out;
}

ImpulseAnalyzer::ImpulseAnalyzer(const ComplexMatrix& img) : rows_(img.rows()), cols_(img.cols()), spec_(img) {
    require(rows_ >= 4 && cols_ >= 4, "ImpulseAnalyzer: image too small");
    fft::centered_cols(spec_, fft::Direction::inverse);
    fft::centered_rows(spec_, fft::Direction::inverse);
}

namespace {

/// exp(-j 2 pi (k - N/2)(pos - N/2) / N) for k = 0..N-1.
std::vector<cplx> kernel_row(std::size_t n, double pos) {
    std::vector<cplx> e(n);
    const double p = pos - static_cast<double>(n / 2);
    for (std::size_t k = 0; k < n; ++k)
        e[k] = std::polar(1.0, -kTwoPi * (static_cast<double>(k) - static_cast<double>(n / 2)) * p / static_cast<double>(n));
    return e;
}

}  // namespace

cplx ImpulseAnalyzer::at(double row, double col) const {
    const auto er = kernel_row(rows_, row), ec = kernel_row(cols_, col);
    cplx acc{};
    for (std::size_t i = 0; i < rows_; ++i) {
        cplx s{};
        for (std::size_t j = 0; j < cols_; ++j) s += spec_(i, j) * ec[j];
        acc += s * er[i];
    }
    return acc;
}

std::vector<cplx> ImpulseAnalyzer::azimuth_cut(double col, double row_center, double half_width, int upsample) const {
    const auto ec = kernel_row(cols_, col);
    std::vector<cplx> a(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        cplx s{};
        for (std::size_t j = 0; j < cols_; ++j) s += spec_(i, j) * ec[j];
        a[i] = s;
    }
    const auto npts = static_cast<std::size_t>(2.0 * half_width * upsample) + 1;
    std::vector<cplx> cut(npts);
    for (std::size_t t = 0; t < npts; ++t) {
        const double pos = row_center - half_width + static_cast<double>(t) / upsample;
        const auto er = kernel_row(rows_, pos);
        cplx s{};
        for (std::size_t i = 0; i < rows_; ++i) s += a[i] * er[i];
        cut[t] = s;
    }
    return cut;
}

std::vector<cplx> ImpulseAnalyzer::range_cut(double row, double col_center, double half_width, int upsample) const {
    const auto er = kernel_row(rows_, row);
    std::vector<cplx> b(cols_, cplx{});
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) b[j] += spec_(i, j) * er[i];
    const auto npts = static_cast<std::size_t>(2.0 * half_width * upsample) + 1;
    std::vector<cplx> cut(npts);
    for (std::size_t t = 0; t < npts; ++t) {
        const double pos = col_center - half_width + static_cast<double>(t) / upsample;
        const auto ec = kernel_row(cols_, pos);
        cplx s{};
        for (std::size_t j = 0; j < cols_; ++j) s += b[j] * ec[j];
        cut[t] = s;
    }
    return cut;
}

namespace {

/// Offset (in cut samples) of the parabolic maximum of |cut|^2 around the largest sample.
double cut_peak(const std::vector<double>& p) {
    const std::size_t best = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
    if (best == 0 || best + 1 >= p.size()) return static_cast<double>(best);
    const double den = p[best - 1] - 2.0 * p[best] + p[best + 1];
    return static_cast<double>(best) + (den < 0.0 ? 0.5 * (p[best - 1] - p[best + 1]) / den : 0.0);
}

Cut measure_cut(const std::vector<cplx>& cut, int upsample) {
    std::vector<double> p(cut.size());
    for (std::size_t i = 0; i < cut.size(); ++i) p[i] = std::norm(cut[i]);
    const std::size_t pk = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
    const double top = p[pk];
    require(top > 0.0, "point response: zero peak");
    const double half = 0.5 * top;
    std::size_t l = pk, r = pk;
    while (l > 0 && p[l] > half) --l;
    while (r + 1 < p.size() && p[r] > half) ++r;
    require(p[l] <= half && p[r] <= half, "point response: main lobe not contained in the analysis window");
    const double lf = static_cast<double>(l) + (half - p[l]) / (p[l + 1] - p[l]);
    const double rf = static_cast<double>(r) - (half - p[r]) / (p[r - 1] - p[r]);

    // first nulls: local minima walking outwards
    std::size_t nl = pk, nr = pk;
    while (nl > 0 && p[nl - 1] < p[nl]) --nl;
    while (nr + 1 < p.size() && p[nr + 1] < p[nr]) ++nr;
    require(nl > 0 && nr + 1 < p.size(), "point response: no isolated main lobe");
    double side = 0.0;
    for (std::size_t i = 0; i < nl; ++i) side = std::max(side, p[i]);
    for (std::size_t i = nr + 1; i < p.size(); ++i) side = std::max(side, p[i]);
    Cut c;
    c.irw_pixels = (rf - lf) / upsample;
    c.pslr_db = side > 0.0 ? 10.0 * std::log10(side / top) : -300.0;
    return c;
}

}  // namespace

PointResponse ImpulseAnalyzer::analyze(std::size_t row, std::size_t col, std::size_t half_width, int upsample) const {
    require(row < rows_ && col < cols_, "point response: peak outside image");
    require(upsample >= 2 && half_width >= 2, "point response: bad analysis window");
    double r = static_cast<double>(row), c = static_cast<double>(col);
    // Alternate cuts to refine the peak location to a fraction of a pixel.
    const double local = 2.0;
    for (int it = 0; it < 3; ++it) {
        const auto az = azimuth_cut(c, r, local, upsample);
        std::vector<double> pa(az.size());
        for (std::size_t i = 0; i < az.size(); ++i) pa[i] = std::norm(az[i]);
        r = r - local + cut_peak(pa) / upsample;
        const auto rg = range_cut(r, c, local, upsample);
        std::vector<double> pr(rg.size());
        for (std::size_t i = 0; i < rg.size(); ++i) pr[i] = std::norm(rg[i]);
        c = c - local + cut_peak(pr) / upsample;
    }
    const double hw = static_cast<double>(half_width);
    PointResponse out;
    out.row = r;
    out.col = c;
    out.azimuth = measure_cut(azimuth_cut(c, r, hw, upsample), upsample);
    out.range = measure_cut(range_cut(r, c, hw, upsample), upsample);
    out.peak_magnitude = std::abs(at(r, c));
    return out;
}

PointResponse point_response_metrics(const ComplexMatrix& img, std::size_t row, std::size_t col,
                                     std::size_t half_width, int upsample) {
    return ImpulseAnalyzer(img).analyze(row, col, half_width, upsample);
}

double registered_correlation(const ComplexMatrix& a, const ComplexMatrix& b) {
    require(a.same_shape(b) && !a.empty(), "registered_correlation: shape mismatch");
    const std::size_t n = a.rows(), m = a.cols();
    ComplexMatrix fa = a, fb = b;
    fft::centered_rows(fa, fft::Direction::forward);
    fft::centered_cols(fa, fft::Direction::forward);
    fft::centered_rows(fb, fft::Direction::forward);
    fft::centered_cols(fb, fft::Direction::forward);
    // A sub-pixel shift is ambiguous on the Nyquist row and column, so both images
    // are compared without them.
    for (ComplexMatrix* f : {&fa, &fb}) {
        if (n % 2 == 0)
            for (std::size_t j = 0; j < m; ++j) (*f)(0, j) = 0.0;
        if (m % 2 == 0)
            for (std::size_t i = 0; i < n; ++i) (*f)(i, 0) = 0.0;
    }
    ComplexMatrix cross(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) cross(i, j) = fa(i, j) * std::conj(fb(i, j));
    // r(s) = sum_k R(k) exp(-j 2 pi k s / N) peaks at the shift d with b(x) = a(x - d).
    ComplexMatrix r = cross;
    fft::centered_rows(r, fft::Direction::forward);
    fft::centered_cols(r, fft::Direction::forward);

    Eigen::MatrixXcd rr(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            rr(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cross(i, j);
    // Upsampled |r| over +-span/up pixels around (dr, dc); moves to the best sample.
    auto refine = [&](double& dr, double& dc, int up, int span) {
        const int np = 2 * span + 1;
        Eigen::MatrixXcd er(np, static_cast<Eigen::Index>(n)), ec(static_cast<Eigen::Index>(m), np);
        for (int p = 0; p < np; ++p) {
            const double s = dr + static_cast<double>(p - span) / up;
            for (std::size_t k = 0; k < n; ++k)
                er(p, static_cast<Eigen::Index>(k)) = std::polar(
                    1.0, -kTwoPi * (static_cast<double>(k) - static_cast<double>(n / 2)) * s / static_cast<double>(n));
            const double t = dc + static_cast<double>(p - span) / up;
            for (std::size_t k = 0; k < m; ++k)
                ec(static_cast<Eigen::Index>(k), p) = std::polar(
                    1.0, -kTwoPi * (static_cast<double>(k) - static_cast<double>(m / 2)) * t / static_cast<double>(m));
        }
        const Eigen::MatrixXd fine = (er * rr * ec).cwiseAbs();
        Eigen::Index pi = 0, pj = 0;
        const double best = fine.maxCoeff(&pi, &pj);
        dr += static_cast<double>(pi - span) / up;
        dc += static_cast<double>(pj - span) / up;
        return best;
    };

    // Sparse scenes give cross-target peaks that can beat a scalloped true peak on the
    // integer lattice, so the strongest few lattice maxima are all refined.
    struct Candidate {
        double mag;
        std::size_t i, j;
    };
    std::vector<Candidate> cand;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const double v = std::abs(r(i, j));
            bool peak = true;
            for (int di = -1; di <= 1 && peak; ++di)
                for (int dj = -1; dj <= 1 && peak; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const std::size_t ii = (i + n + static_cast<std::size_t>(di + 1) - 1) % n;  // i + di, wrapped
                    const std::size_t jj = (j + m + static_cast<std::size_t>(dj + 1) - 1) % m;
                    if (std::abs(r(ii, jj)) > v) peak = false;
                }
            if (peak) cand.push_back({v, i, j});
        }
    const std::size_t keep = std::min<std::size_t>(cand.size(), 6);
    std::partial_sort(cand.begin(), cand.begin() + static_cast<long>(keep), cand.end(),
                      [](const Candidate& x, const Candidate& y) { return x.mag > y.mag; });
    double dr = 0.0, dc = 0.0, best = -1.0;
    for (std::size_t k = 0; k < keep; ++k) {
        double cr = static_cast<double>(cand[k].i) - static_cast<double>(n / 2);
        double cc = static_cast<double>(cand[k].j) - static_cast<double>(m / 2);
        const double v = refine(cr, cc, 20, 30);
        if (v > best) {
            best = v;
            dr = cr;
            dc = cc;
        }
    }
    refine(dr, dc, 1000, 50);

    // b(x + d) via the shift theorem.
    for (std::size_t i = 0; i < n; ++i) {
        const double kr = static_cast<double>(i) - static_cast<double>(n / 2);
        for (std::size_t j = 0; j < m; ++j) {
            const double kc = static_cast<double>(j) - static_cast<double>(m / 2);
            fb(i, j) *= std::polar(1.0, kTwoPi * (kr * dr / static_cast<double>(n) + kc * dc / static_cast<double>(m)));
        }
    }
    for (ComplexMatrix* f : {&fa, &fb}) {
        fft::centered_cols(*f, fft::Direction::inverse);
        fft::centered_rows(*f, fft::Direction::inverse);
    }

    const double count = static_cast<double>(n * m);
    double ma = 0.0, mb = 0.0;
    for (std::size_t k = 0; k < n * m; ++k) {
        ma += std::abs(fa.data()[k]);
        mb += std::abs(fb.data()[k]);
    }
    ma /= count;
    mb /= count;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t k = 0; k < n * m; ++k) {
        const double x = std::abs(fa.data()[k]) - ma, y = std::abs(fb.data()[k]) - mb;
        sab += x * y;
        saa += x * x;
        sbb += y * y;
    }
    require(saa > 0.0 && sbb > 0.0, "registered_correlation: constant image");
    return sab / std::sqrt(saa * sbb);
}

FocusMetrics focus_metrics(const pfa::ComplexImage& img, std::size_t max_targets) {
    FocusMetrics fm;
    fm.entropy = image_entropy(img.data);
    fm.contrast = image_contrast(img.data);
    const auto peaks = find_peaks(img.data, max_targets);
    const ImpulseAnalyzer an(img.data);
    double sa = 0.0, sr = 0.0, pa = 0.0, pr = 0.0;
    for (const Peak& p : peaks) {
        try {
            const PointResponse resp = an.analyze(p.row, p.col);
            TargetMetrics t;
            t.row = resp.row;
            t.col = resp.col;
            t.irw_azimuth_m = resp.azimuth.irw_pixels * img.pixel_x();
            t.irw_range_m = resp.range.irw_pixels * img.pixel_y();
            t.pslr_azimuth_db = resp.azimuth.pslr_db;
            t.pslr_range_db = resp.range.pslr_db;
            sa += t.irw_azimuth_m;
            sr += t.irw_range_m;
            pa += t.pslr_azimuth_db;
            pr += t.pslr_range_db;
            fm.targets.push_back(t);
        } catch (const InputError&) {
            // not an isolated response; skipped
        }
    }
    if (!fm.targets.empty()) {
        const double k = static_cast<double>(fm.targets.size());
        fm.mean_irw_azimuth_m = sa / k;
        fm.mean_irw_range_m = sr / k;
        fm.mean_pslr_azimuth_db = pa / k;
        fm.mean_pslr_range_db = pr / k;
    }
    return fm;
}

}  // namespace kasar::io
