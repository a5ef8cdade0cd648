#include "kasar/sim/radar.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "kasar/core/error.hpp"

namespace kasar::sim {

UniformAxis RadarParams::range_freq_axis() const {
    const double n = static_cast<double>(range_freq_samples);
    return {0.0, bandwidth / n, range_freq_samples};
}

void RadarParams::validate() const {
    require(std::isfinite(center_frequency) && center_frequency > 0.0, "radar: center frequency must be > 0");
    require(std::isfinite(bandwidth) && bandwidth > 0.0, "radar: bandwidth must be > 0");
    require(bandwidth < 2.0 * center_frequency, "radar: bandwidth must be below 2 fc");
    require(range_freq_samples >= 2, "radar: need at least 2 range frequency samples");
    require(pulse_count >= 2, "radar: need at least 2 pulses");
    require(c > 0.0, "radar: propagation speed must be > 0");
}

void FlightGeometry::validate() const {
    const std::size_t n = apc.size();
    require(n >= 2, "geometry: need at least 2 pulses");
    require(slow_time.size == n && range.size() == n && theta.size() == n && phi.size() == n,
            "geometry: sample counts disagree");
    require(slow_time.center == 0.0, "geometry: slow-time axis must be centered on t = 0");
    for (std::size_t i = 0; i < n; ++i)
        require(std::isfinite(range[i]) && range[i] > 0.0 && std::isfinite(theta[i]) && std::isfinite(phi[i]),
                "geometry: non-finite or non-positive range");
}

namespace {

void fill_angles(FlightGeometry& g) {
    const std::size_t n = g.apc.size();
    g.range.resize(n);
    g.theta.resize(n);
    g.phi.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3& p = g.apc[i];
        const double r = std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
        require(r > 0.0, "geometry: antenna at scene center");
        g.range[i] = r;
        g.theta[i] = std::atan2(-p.x, -p.y);
        g.phi[i] = std::atan2(std::hypot(p.x, p.y), p.z);
    }
    g.phi_ref = g.phi[g.slow_time.center_index()];
}

}  // namespace

FlightGeometry make_linear_geometry(const RadarParams& radar, double velocity, double altitude,
                                    double scene_center_slant_range, double squint, double aperture_length,
                                    std::size_t pulse_count) {
    radar.validate();
    require(velocity > 0.0 && std::isfinite(velocity), "geometry: velocity must be > 0");
    require(altitude >= 0.0 && std::isfinite(altitude), "geometry: altitude must be >= 0");
    require(scene_center_slant_range > altitude, "geometry: slant range must exceed altitude");
    require(aperture_length > 0.0 && std::isfinite(aperture_length), "geometry: aperture length must be > 0");
    require(std::abs(squint) < std::numbers::pi / 2, "geometry: |squint| must be below 90 deg");
    require(pulse_count >= 2, "geometry: need at least 2 pulses");

    const double ground = std::sqrt(scene_center_slant_range * scene_center_slant_range - altitude * altitude);
    const double dt = aperture_length / (velocity * static_cast<double>(pulse_count));
    FlightGeometry g;
    g.slow_time = {0.0, dt, pulse_count};
    g.squint = squint;
    // Line of sight at t = 0 is +y on the ground; the track is tilted by the squint so that
    // broadside and the line of sight differ by exactly that angle.
    const Vec3 dir{-std::cos(squint), std::sin(squint), 0.0};
    g.apc.resize(pulse_count);
    for (std::size_t i = 0; i < pulse_count; ++i) {
        const double t = g.slow_time.value(i);
        const double s = velocity * t;
        g.apc[i] = {dir.x * s, -ground + dir.y * s, altitude};
    }
    fill_angles(g);
    for (std::size_t i = 1; i < pulse_count; ++i)
        require(g.theta[i] > g.theta[i - 1], "geometry: azimuth angle must increase monotonically");
    return g;
}

FlightGeometry geometry_from_positions(const UniformAxis& slow_time, const std::vector<Vec3>& positions,
                                       double squint) {
    require(slow_time.size == positions.size(), "geometry: one position per slow-time sample");
    require(slow_time.size >= 2 && slow_time.step > 0.0, "geometry: bad slow-time axis");
    require(slow_time.center == 0.0, "geometry: slow-time axis must be centered on t = 0");
    const Vec3 p0 = positions[slow_time.center_index()];
    const double rot = std::atan2(-p0.x, -p0.y);  // rotate so that theta(0) = 0
    const double cr = std::cos(rot), sr = std::sin(rot);
    FlightGeometry g;
    g.slow_time = slow_time;
    g.squint = squint;
    g.apc.reserve(positions.size());
    for (const Vec3& p : positions) g.apc.push_back({cr * p.x - sr * p.y, sr * p.x + cr * p.y, p.z});
    g.apc[slow_time.center_index()].x = 0.0;
    fill_angles(g);
    g.validate();
    return g;
}

void TargetScene::validate() const {
    for (const Target& t : targets)
        require(std::isfinite(t.x) && std::isfinite(t.y) && std::isfinite(t.amplitude.real()) &&
                    std::isfinite(t.amplitude.imag()),
                "scene: non-finite target");
}

std::string to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::quadratic: return "quadratic";
        case ErrorKind::sinusoid: return "sinusoid";
        case ErrorKind::random_walk: return "random-walk";
        case ErrorKind::tabulated: return "tabulated";
    }
    return "unknown";
}

ErrorKind error_kind_from_string(const std::string& s) {
    if (s == "quadratic") return ErrorKind::quadratic;
    if (s == "sinusoid") return ErrorKind::sinusoid;
    if (s == "random-walk") return ErrorKind::random_walk;
    if (s == "tabulated") return ErrorKind::tabulated;
    throw InputError("unknown range error kind '" + s + "'");
}

RangeErrorProfile make_error_profile(ErrorKind kind, const ErrorParams& p, const UniformAxis& slow_time) {
    const std::size_t n = slow_time.size;
    require(n >= 1, "error profile: empty slow-time axis");
    RangeErrorProfile out{kind, std::vector<double>(n, 0.0)};
    switch (kind) {
        case ErrorKind::quadratic:
            require(std::isfinite(p.kappa2), "error profile: non-finite kappa2");
            for (std::size_t i = 0; i < n; ++i) {
                const double t = slow_time.value(i);
                out.values[i] = p.kappa2 * t * t;
            }
            break;
        case ErrorKind::sinusoid: {
            require(p.amplitude >= 0.0 && std::isfinite(p.amplitude), "error profile: amplitude must be >= 0");
            require(std::isfinite(p.cycles) && std::isfinite(p.phase), "error profile: non-finite sinusoid");
            const double span = slow_time.span();
            for (std::size_t i = 0; i < n; ++i) {
                const double u = slow_time.value(i) / span;
                out.values[i] = p.amplitude * std::sin(2.0 * std::numbers::pi * p.cycles * u + p.phase);
            }
            break;
        }
        case ErrorKind::random_walk: {
            require(p.step_std >= 0.0 && std::isfinite(p.step_std), "error profile: step_std must be >= 0");
            std::mt19937_64 rng(p.seed);
            std::normal_distribution<double> step(0.0, p.step_std);
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += step(rng);
                out.values[i] = acc;
            }
            const double anchor = out.values[slow_time.center_index()];
            for (double& v : out.values) v -= anchor;
            break;
        }
        case ErrorKind::tabulated:
            require(p.table.size() == n, "error profile: table length must equal pulse count");
            for (double v : p.table) require(std::isfinite(v), "error profile: non-finite table value");
            out.values = p.table;
            break;
    }
    return out;
}

RangeErrorProfile make_error_profile(const std::string& kind, const ErrorParams& p, const UniformAxis& slow_time) {
    return make_error_profile(error_kind_from_string(kind), p, slow_time);
}

RangeErrorProfile zero_error(const UniformAxis& slow_time) {
    return {ErrorKind::tabulated, std::vector<double>(slow_time.size, 0.0)};
}

PhaseHistory synth_phase_history(const TargetScene& scene, const FlightGeometry& geometry, const RadarParams& radar,
                                 const RangeErrorProfile& err) {
    radar.validate();
    geometry.validate();
    scene.validate();
    require(geometry.size() == radar.pulse_count, "synth: geometry pulse count differs from radar");
    require(err.values.size() == geometry.size(), "synth: error profile not on the slow-time axis");
    for (double v : err.values) require(std::isfinite(v), "synth: non-finite range error");

    const UniformAxis fr = radar.range_freq_axis();
    PhaseHistory ph{ComplexMatrix(radar.pulse_count, radar.range_freq_samples), radar, geometry};
    const double k = 4.0 * std::numbers::pi / radar.c;
    std::vector<double> freq(fr.size);
    for (std::size_t j = 0; j < fr.size; ++j) freq[j] = radar.center_frequency + fr.value(j);
    for (std::size_t i = 0; i < radar.pulse_count; ++i) {
        const double sp = std::sin(geometry.phi[i]);
        const double st = std::sin(geometry.theta[i]), ct = std::cos(geometry.theta[i]);
        auto row = ph.data.row(i);
        for (const Target& tg : scene.targets) {
            const double path = sp * (tg.x * st + tg.y * ct) + err.values[i];
            for (std::size_t j = 0; j < fr.size; ++j) row[j] += tg.amplitude * std::polar(1.0, k * freq[j] * path);
        }
    }
    return ph;
}

void add_complex_noise(ComplexMatrix& m, double snr_db, std::uint64_t seed) {
    require(std::isfinite(snr_db), "noise: snr must be finite");
    const double sigma = std::sqrt(0.5 / std::pow(10.0, snr_db / 10.0));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, sigma);
    for (cplx& v : m) {
        const double re = g(rng);
        const double im = g(rng);
        v += cplx(re, im);
    }
}

}  // namespace kasar::sim
