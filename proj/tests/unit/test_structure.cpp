#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kasar/structure/limits.hpp"
#include "kasar/structure/surface.hpp"
#include "support/scenario.hpp"

using namespace kasar;
using namespace kasar::structure;

namespace {

ApeProfile profile(const UniformAxis& x, const std::function<double(double)>& f) {
    ApeProfile p{x, std::vector<double>(x.size)};
    for (std::size_t i = 0; i < x.size; ++i) p.values[i] = f(x.value(i));
    return p;
}

/// Largest |a - b| over cells valid in both, after a least-squares plane fit to the difference.
double plane_free_difference(const PhaseErrorSurface& a, const PhaseErrorSurface& b) {
    PhaseErrorSurface d = PhaseErrorSurface::zeros([&] {
        CartesianGrid g;
        g.x = a.x;
        g.y = a.y;
        g.y0 = a.y0;
        return g;
    }());
    for (std::size_t k = 0; k < d.values.size(); ++k) {
        d.valid.data()[k] = a.valid.data()[k] && b.valid.data()[k];
        d.values.data()[k] = d.valid.data()[k] ? a.values.data()[k] - b.values.data()[k] : 0.0;
    }
    remove_plane(d);
    double worst = 0.0;
    for (std::size_t k = 0; k < d.values.size(); ++k)
        if (d.valid.data()[k]) worst = std::max(worst, std::abs(d.values.data()[k]));
    return worst;
}

double max_abs(const PhaseErrorSurface& s) {
    double m = 0.0;
    for (std::size_t k = 0; k < s.values.size(); ++k)
        if (s.valid.data()[k]) m = std::max(m, std::abs(s.values.data()[k]));
    return m;
}

}  // namespace

TEST(ApeToSurface, ZeroProfileGivesZeroSurface) {
    const auto g = testkit::test_grid(64, 64);
    const auto s = ape_to_surface(profile(g.x, [](double) { return 0.0; }), g);
    EXPECT_EQ(max_abs(s), 0.0);
}

TEST(ApeToSurface, CenterRowReproducesProfile) {
    const auto g = testkit::test_grid(128, 64);
    std::mt19937_64 rng(1);
    const ApeProfile p{g.x, testkit::random_smooth_profile(g.x, rng)};
    const auto s = ape_to_surface(p, g);
    const std::size_t c = g.y.center_index();
    for (std::size_t i = 0; i < g.rows(); ++i) {
        ASSERT_TRUE(s.valid(i, c));
        EXPECT_NEAR(s.values(i, c), p.values[i], 1e-12);
    }
}

TEST(ApeToSurface, QuadraticSpotValue) {
    CartesianGrid g;
    g.y0 = 419.169;
    g.x = UniformAxis{0.0, 1.0, 256};
    g.y = UniformAxis{g.y0, 0.1 * g.y0, 4};
    const auto s = ape_to_surface(profile(g.x, [](double x) { return 1e-3 * x * x; }), g);
    const std::size_t row = 128 + 100, col = 1;  // X = 100, Y = 0.9 Y0
    ASSERT_NEAR(g.x.value(row), 100.0, 1e-12);
    ASSERT_NEAR(g.y.value(col), 0.9 * g.y0, 1e-9);
    ASSERT_TRUE(s.valid(row, col));
    EXPECT_NEAR(s.values(row, col), 11.111111111111, 1e-8);
    // (Y0 / Y) X = 100 / 0.8 = 125 is still inside; 120 / 0.8 = 150 is not.
    EXPECT_TRUE(s.valid(128 + 100, 0));
    EXPECT_FALSE(s.valid(128 + 120, 0));
    EXPECT_EQ(s.values(128 + 120, 0), 0.0);
}

TEST(ApeToSurface, AffineAddsExactPlane) {
    const auto g = testkit::test_grid(128, 96);
    std::mt19937_64 rng(2);
    const ApeProfile p{g.x, testkit::random_smooth_profile(g.x, rng)};
    const double a0 = 1.7, a1 = -0.45;
    ApeProfile q = p;
    for (std::size_t i = 0; i < g.rows(); ++i) q.values[i] += a0 + a1 * g.x.value(i);
    const auto sp = ape_to_surface(p, g), sq = ape_to_surface(q, g);
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) {
            ASSERT_EQ(sp.valid(i, j), sq.valid(i, j));
            if (!sp.valid(i, j)) continue;
            const double plane = a0 * g.y.value(j) / g.y0 + a1 * g.x.value(i);
            EXPECT_NEAR(sq.values(i, j) - sp.values(i, j), plane, 1e-9);
        }
}

TEST(RcmToSurface, ZeroAndConstantProfiles) {
    const auto g = testkit::test_grid(128, 64);
    EXPECT_LT(max_abs(rcm_to_surface({g.x, std::vector<double>(g.rows(), 0.0)}, g)), 1e-12);
    EXPECT_LT(max_abs(rcm_to_surface({g.x, std::vector<double>(g.rows(), 0.37)}, g)), 1e-9);
}

TEST(RcmToSurface, QuadraticMatchesApeMapping) {
    const auto g = testkit::test_grid(512, 512);
    const double a = 0.05;
    const auto fam = quadratic_family(a, g.x, g.y0);
    const auto from_ape = ape_to_surface(fam.phi0, g);
    const auto from_rcm = rcm_to_surface(fam.phi1, g);
    EXPECT_GT(max_abs(from_ape), 1.0);
    EXPECT_LT(plane_free_difference(from_ape, from_rcm), 1e-3);
}

TEST(Taylor, ZeroSurface) {
    const auto g = testkit::test_grid(64, 64);
    const auto tc = taylor_decompose(PhaseErrorSurface::zeros(g));
    for (std::size_t i = 0; i < g.rows(); ++i) {
        EXPECT_EQ(tc.phi0[i], 0.0);
        EXPECT_EQ(tc.phi1[i], 0.0);
        EXPECT_EQ(tc.phi2[i], 0.0);
    }
    EXPECT_TRUE(tc.structure_ok);
}

TEST(Taylor, QuadraticCoefficients) {
    const auto g = testkit::test_grid(256, 256);
    for (double a : {1e-4, 1e-3, 1e-2}) {
        const auto fam = quadratic_family(a, g.x, g.y0);
        const auto tc = taylor_decompose(ape_to_surface(fam.phi0, g));
        for (std::size_t i = 0; i < g.rows(); ++i) {
            const double x = g.x.value(i);
            if (x == 0.0) continue;
            EXPECT_NEAR(tc.phi0[i] / (a * x * x), 1.0, 1e-6);
            EXPECT_NEAR(tc.phi1[i] / (-a * x * x / g.y0), 1.0, 1e-6);
            EXPECT_NEAR(tc.phi2[i] / (a * x * x / (g.y0 * g.y0)), 1.0, 1e-6);
        }
    }
}

TEST(Taylor, RandomSmoothXiTruncation) {
    const auto g = testkit::test_grid(256, 256);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n(0.0, 1.0);
    const double u_half = 0.03;
    std::vector<double> c(5), ph(5);
    for (std::size_t k = 0; k < c.size(); ++k) {
        c[k] = 0.02 * n(rng) / static_cast<double>((k + 1) * (k + 1));
        ph[k] = n(rng);
    }
    auto xi = [&](double u) {
        double v = 0.0;
        for (std::size_t k = 0; k < c.size(); ++k)
            v += c[k] * std::cos(std::numbers::pi * static_cast<double>(k + 1) * u / u_half + ph[k]);
        return v;
    };
    const auto surf = surface_from_xi(xi, -u_half, u_half, g);
    const auto tc = taylor_decompose(surf);
    EXPECT_GT(max_abs(surf), 1.0);
    EXPECT_LT(tc.truncation_rms, 1e-3);
    EXPECT_TRUE(tc.structure_ok);
    EXPECT_LT(tc.structure_rms, 1e-3);
}

TEST(Taylor, NonPfaSurfaceFlagged) {
    const auto g = testkit::test_grid(128, 128);
    auto s = PhaseErrorSurface::zeros(g);
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j)
            s.values(i, j) = std::sin(0.3 * g.x.value(i)) * std::cos(2.0 * (g.y.value(j) - g.y0));
    EXPECT_FALSE(taylor_decompose(s).structure_ok);
}

TEST(Taylor, RcmFromApeMatchesQuadraticFamily) {
    const auto g = testkit::test_grid(256, 64);
    const auto fam = quadratic_family(3e-3, g.x, g.y0);
    const auto phi1 = rcm_from_ape(fam.phi0, g.y0);
    for (std::size_t i = 0; i < g.rows(); ++i) EXPECT_NEAR(phi1.values[i], fam.phi1.values[i], 1e-12);
}

TEST(QuadraticFamily, Identities) {
    const UniformAxis x{0.0, 0.1, 101};
    const double y0 = 419.169;
    const auto zero = quadratic_family(0.0, x, y0);
    for (std::size_t i = 0; i < x.size; ++i) {
        EXPECT_EQ(zero.phi0.values[i], 0.0);
        EXPECT_EQ(zero.phi1.values[i], 0.0);
        EXPECT_EQ(zero.phi2[i], 0.0);
    }
    const auto f = quadratic_family(0.02, x, y0);
    for (std::size_t i = 0; i < x.size; ++i) {
        EXPECT_DOUBLE_EQ(f.phi0.values[i], 0.02 * x.value(i) * x.value(i));
        EXPECT_DOUBLE_EQ(f.phi1.values[i], -f.phi0.values[i] / y0);
        EXPECT_NEAR(f.phi2[i] * y0 * y0, f.phi0.values[i], 1e-15);
    }
}

TEST(SurfaceForms, XiAndMuAgree) {
    const auto g = testkit::test_grid(128, 128);
    auto xi = [](double u) { return 0.01 * std::sin(80.0 * u) + 0.5 * u * u; };
    auto mu = [&](double u) { return xi(u) / std::sqrt(1.0 + u * u); };
    const auto a = surface_from_xi(xi, -0.03, 0.03, g);
    const auto b = surface_from_mu(mu, -0.03, 0.03, g);
    for (std::size_t k = 0; k < a.values.size(); ++k) {
        ASSERT_EQ(a.valid.data()[k], b.valid.data()[k]);
        EXPECT_NEAR(a.values.data()[k], b.values.data()[k], 1e-9);
    }
}

TEST(Limits, Thresholds) {
    const double y0 = reference_y0(10e9, 1.0);
    EXPECT_DOUBLE_EQ(y0, 4.0 * std::numbers::pi * 10e9 / kSpeedOfLight);
    EXPECT_NEAR(reference_y0(10e9, 1.0, 3e8), 418.879, 1e-3);
    const auto lim = necessity_limits(0.1, 0.1, y0);
    EXPECT_NEAR(lim.a_ape, 0.01 / (4.0 * std::numbers::pi), 1e-15);
    EXPECT_NEAR(lim.a_ape, 7.96e-4, 1e-6);
    EXPECT_NEAR(lim.a_rcm, y0 * 1e-3 / (2.0 * std::numbers::pi * std::numbers::pi), 1e-12);
    EXPECT_NEAR(lim.a_defocus, y0 * y0 * 1e-4 / (4.0 * std::pow(std::numbers::pi, 3)), 1e-12);
}

TEST(Limits, Regions) {
    const double y0 = reference_y0(10e9, 1.0);
    const auto lim = necessity_limits(0.2, 0.2, y0);
    EXPECT_NEAR(lim.a_rcm, 0.17, 0.005);
    EXPECT_EQ(lim.classify(0.1), Region::one_d);
    EXPECT_EQ(lim.classify(0.5 * lim.a_ape), Region::none);
    EXPECT_EQ(lim.classify(0.5 * (lim.a_rcm + lim.a_defocus)), Region::two_d);
    EXPECT_EQ(lim.classify(2.0 * lim.a_defocus), Region::accurate_two_d);
    EXPECT_EQ(to_string(Region::one_d), "1-D");
}

TEST(Limits, BoundaryResolutionsInvertThresholds) {
    const double y0 = reference_y0(10e9, 1.0);
    const auto b = boundary_resolutions(0.1, y0);
    EXPECT_NEAR(necessity_limits(b.ape, b.ape, y0).a_ape, 0.1, 1e-9);
    EXPECT_NEAR(necessity_limits(b.rcm, b.rcm, y0).a_rcm, 0.1, 1e-9);
    EXPECT_NEAR(necessity_limits(b.defocus, b.defocus, y0).a_defocus, 0.1, 1e-9);
}

TEST(Limits, ProfileClassificationMatchesQuadratic) {
    auto g = testkit::test_grid(256, 256);
    const auto lim = necessity_limits(g.pixel_x(), g.pixel_y(), g.y0);
    for (double a : {0.3 * lim.a_ape, 3.0 * lim.a_ape}) {
        const auto fam = quadratic_family(a, g.x, g.y0);
        const auto pa = classify_profile(fam.phi0, g);
        EXPECT_GT(pa.ape_pp, 0.0);
        EXPECT_EQ(pa.region == Region::none, a < lim.a_ape) << a;
    }
}
