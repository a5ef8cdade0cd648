#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "kasar/core/error.hpp"
#include "kasar/io/metrics.hpp"
#include "kasar/pfa/image.hpp"
#include "kasar/pipeline/pipeline.hpp"
#include "kasar/sim/radar.hpp"
#include "kasar/sim/spectrum.hpp"
#include "support/scenario.hpp"

using namespace kasar;
using namespace kasar::sim;

namespace {

RadarParams small_radar() {
    RadarParams r;
    r.range_freq_samples = 64;
    r.pulse_count = 64;
    return r;
}

FlightGeometry small_geometry(double squint = 0.0, std::size_t pulses = 64) {
    return make_linear_geometry(small_radar(), 120.0, 0.0, 8000.0, squint, 540.0, pulses);
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST(Geometry, CenterSampleMatchesReference) {
    for (double squint : {0.0, 0.26}) {
        const auto g = make_linear_geometry(small_radar(), 120.0, 3000.0, 8000.0, squint, 540.0, 64);
        const std::size_t c = g.slow_time.center_index();
        EXPECT_EQ(g.slow_time.value(c), 0.0);
        EXPECT_EQ(g.theta[c], 0.0);
        EXPECT_DOUBLE_EQ(g.phi[c], g.phi_ref);
        EXPECT_NEAR(g.range[c], 8000.0, 1e-9);
        EXPECT_NEAR(std::cos(g.phi_ref), 3000.0 / 8000.0, 1e-14);
    }
}

TEST(Geometry, AnglesAgreeWithPositions) {
    const auto g = make_linear_geometry(small_radar(), 120.0, 5000.0, 8000.0, 0.2, 1760.0, 257);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Vec3 p = g.apc[i];
        const double r = std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
        EXPECT_LT(rel(g.range[i], r), 1e-12);
        EXPECT_LT(std::abs(g.theta[i] - std::atan2(-p.x, -p.y)), 1e-12 * std::max(1.0, std::abs(g.theta[i])));
        EXPECT_LT(rel(g.phi[i], std::acos(p.z / r)), 1e-12);
    }
}

TEST(Geometry, LongApertureAtAltitudeMatchesHandGeometry) {
    const auto g = make_linear_geometry(small_radar(), 120.0, 5000.0, 8000.0, 0.0, 1760.0, 1024);
    const double ground = std::sqrt(8000.0 * 8000.0 - 5000.0 * 5000.0);
    // The first sample sits a full half aperture before center, the last one step short of it.
    const double first = 880.0;
    const double last = 880.0 - 1760.0 / 1024.0;
    EXPECT_NEAR(g.theta.front(), -std::atan(first / ground), 1e-12);
    EXPECT_NEAR(g.theta.back(), std::atan(last / ground), 1e-12);
    const double r_end = std::sqrt(first * first + 8000.0 * 8000.0);
    EXPECT_NEAR(g.range.front(), r_end, 1e-8);
    EXPECT_NEAR(g.phi.front(), std::acos(5000.0 / r_end), 1e-12);
}

TEST(Geometry, DoublingPulsesHalvesSpacing) {
    const auto a = small_geometry(0.1, 64);
    const auto b = small_geometry(0.1, 128);
    EXPECT_NEAR(b.slow_time.step, a.slow_time.step / 2.0, 1e-15);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_NEAR(a.slow_time.value(i), b.slow_time.value(2 * i), 1e-14);
        EXPECT_NEAR(a.theta[i], b.theta[2 * i], 1e-14);
        EXPECT_NEAR(a.phi[i], b.phi[2 * i], 1e-14);
        EXPECT_NEAR(a.range[i], b.range[2 * i], 1e-8);
    }
}

TEST(Geometry, DegenerateInputsRejected) {
    EXPECT_THROW(make_linear_geometry(small_radar(), 0.0, 0.0, 8000.0, 0.0, 540.0, 64), InputError);
    EXPECT_THROW(make_linear_geometry(small_radar(), 120.0, 0.0, 0.0, 0.0, 540.0, 64), InputError);
    EXPECT_THROW(make_linear_geometry(small_radar(), 120.0, 0.0, 8000.0, 0.0, 0.0, 64), InputError);
}

TEST(PhaseHistory, SceneCenterTargetIsConstant) {
    const auto g = small_geometry(0.26);
    const cplx a{0.6, -0.3};
    const auto ph = synth_phase_history({{{0.0, 0.0, a}}}, g, small_radar(), zero_error(g.slow_time));
    for (const cplx& v : ph.data) EXPECT_EQ(v, a);
}

TEST(PhaseHistory, MatchesDirectFormula) {
    const auto g = small_geometry(0.26);
    const RadarParams radar = small_radar();
    ErrorParams ep;
    ep.amplitude = 0.05;
    ep.cycles = 2.0;
    const auto err = make_error_profile(ErrorKind::sinusoid, ep, g.slow_time);
    const Target t{12.5, -7.25, {1.0, 0.0}};
    const auto ph = synth_phase_history({{t}}, g, radar, err);
    const auto fr = radar.range_freq_axis();
    for (std::size_t i : {0u, 17u, 32u, 63u}) {
        for (std::size_t k : {0u, 31u, 63u}) {
            const double f = radar.center_frequency + fr.value(k);
            const double phase = 4.0 * std::numbers::pi / radar.c * f *
                                 (std::sin(g.phi[i]) * (t.x * std::sin(g.theta[i]) + t.y * std::cos(g.theta[i])) +
                                  err.values[i]);
            const cplx want = std::polar(1.0, phase);
            EXPECT_LT(std::abs(std::arg(ph.data(i, k) / want)), 1e-12 * std::max(1.0, std::abs(phase)) + 1e-9);
        }
    }
}

TEST(PhaseHistory, Superposition) {
    const auto g = small_geometry(0.1);
    const auto z = zero_error(g.slow_time);
    const Target a{3.0, 4.0, {1.0, 0.2}}, b{-8.0, 1.5, {0.4, -0.9}};
    const auto pa = synth_phase_history({{a}}, g, small_radar(), z);
    const auto pb = synth_phase_history({{b}}, g, small_radar(), z);
    const auto pab = synth_phase_history({{a, b}}, g, small_radar(), z);
    for (std::size_t k = 0; k < pab.data.size(); ++k)
        EXPECT_LT(std::abs(pab.data.data()[k] - pa.data.data()[k] - pb.data.data()[k]), 1e-12);
}

TEST(PhaseHistory, RangeErrorIsPurePhase) {
    const auto g = small_geometry();
    ErrorParams ep;
    ep.step_std = 0.01;
    ep.seed = 3;
    const TargetScene scene{{{5.0, 2.0, {1.0, 0.0}}, {-3.0, -6.0, {0.5, 0.5}}}};
    const auto a = synth_phase_history(scene, g, small_radar(), zero_error(g.slow_time));
    const auto b = synth_phase_history(scene, g, small_radar(), make_error_profile(ErrorKind::random_walk, ep, g.slow_time));
    for (std::size_t k = 0; k < a.data.size(); ++k)
        EXPECT_NEAR(std::abs(a.data.data()[k]), std::abs(b.data.data()[k]), 1e-12);
}

TEST(PhaseHistory, Deterministic) {
    const auto g = small_geometry(0.2);
    const TargetScene scene{{{5.0, 2.0, {1.0, 0.0}}}};
    auto a = synth_phase_history(scene, g, small_radar(), zero_error(g.slow_time));
    auto b = synth_phase_history(scene, g, small_radar(), zero_error(g.slow_time));
    add_complex_noise(a.data, 10.0, 5);
    add_complex_noise(b.data, 10.0, 5);
    EXPECT_EQ(a.data, b.data);
}

TEST(ErrorProfile, Kinds) {
    const UniformAxis t{0.0, 0.01, 200};
    ErrorParams q;
    q.kappa2 = 0.0;
    for (double v : make_error_profile(ErrorKind::quadratic, q, t).values) EXPECT_EQ(v, 0.0);
    q.kappa2 = 2.5;
    const auto quad = make_error_profile("quadratic", q, t);
    for (std::size_t i = 0; i < t.size; ++i) EXPECT_DOUBLE_EQ(quad.values[i], 2.5 * t.value(i) * t.value(i));

    ErrorParams s;
    s.amplitude = 0.3;
    s.cycles = 2.0;
    s.phase = std::numbers::pi / 2;
    double peak = 0.0;
    for (double v : make_error_profile(ErrorKind::sinusoid, s, t).values) peak = std::max(peak, std::abs(v));
    EXPECT_NEAR(peak, 0.3, 1e-12);

    ErrorParams w;
    w.step_std = 0.002;
    w.seed = 42;
    const auto r1 = make_error_profile(ErrorKind::random_walk, w, t);
    const auto r2 = make_error_profile(ErrorKind::random_walk, w, t);
    EXPECT_EQ(r1.values, r2.values);
    w.seed = 43;
    EXPECT_NE(make_error_profile(ErrorKind::random_walk, w, t).values, r1.values);

    EXPECT_THROW(make_error_profile("chirp", s, t), InputError);
    EXPECT_THROW(error_kind_from_string("bogus"), InputError);
}

TEST(InjectError, ZeroSurfaceIsIdentity) {
    const auto grid = testkit::test_grid(64, 64);
    const auto spec = synth_cartesian_spectrum({{{1.2, -3.4, {1.0, 0.0}}}}, grid);
    const auto out = inject_spectrum_error(spec, structure::PhaseErrorSurface::zeros(grid));
    EXPECT_EQ(out.data, spec.data);
}

TEST(InjectError, CompensationRecoversInput) {
    const auto grid = testkit::test_grid(64, 64);
    const auto spec = synth_cartesian_spectrum({{{1.2, -3.4, {1.0, 0.0}}, {-5.0, 2.0, {0.3, 0.4}}}}, grid);
    auto surf = structure::PhaseErrorSurface::zeros(grid);
    for (std::size_t i = 0; i < 64; ++i)
        for (std::size_t j = 0; j < 64; ++j) surf.values(i, j) = 3.0 * std::sin(0.1 * i) * std::cos(0.07 * j) + 0.01 * j;
    const auto hit = inject_spectrum_error(spec, surf);
    for (std::size_t k = 0; k < spec.data.size(); ++k)
        EXPECT_NEAR(std::abs(hit.data.data()[k]), std::abs(spec.data.data()[k]), 1e-12);
    const auto back = pipeline::compensate_surface(hit, surf).spectrum;
    for (std::size_t k = 0; k < spec.data.size(); ++k)
        EXPECT_LE(std::abs(back.data.data()[k] - spec.data.data()[k]), 1e-12 * std::abs(spec.data.data()[k]) + 1e-15);
}

TEST(InjectError, PlaneOnlyShiftsImage) {
    const auto grid = testkit::test_grid(128, 128);
    const auto spec = synth_cartesian_spectrum({{{1.2, -3.4, {1.0, 0.0}}, {-5.0, 2.0, {0.3, 0.4}}}}, grid);
    auto surf = structure::PhaseErrorSurface::zeros(grid);
    for (std::size_t i = 0; i < 128; ++i)
        for (std::size_t j = 0; j < 128; ++j) surf.values(i, j) = 2.3 * grid.x.value(i) - 1.7 * grid.y.value(j);
    const auto a = pfa::form_image(spec);
    const auto b = pfa::form_image(inject_spectrum_error(spec, surf));
    EXPECT_GE(io::registered_correlation(a.data, b.data), 0.999);
}

TEST(InjectError, GridMismatchRejected) {
    const auto spec = synth_cartesian_spectrum({{{0.0, 0.0, {1.0, 0.0}}}}, testkit::test_grid(64, 64));
    EXPECT_THROW(inject_spectrum_error(spec, structure::PhaseErrorSurface::zeros(testkit::test_grid(32, 64))),
                 InputError);
}
