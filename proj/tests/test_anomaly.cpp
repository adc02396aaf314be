#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "biharm/anomaly.hpp"
#include "biharm/scene.hpp"
#include "test_util.hpp"

namespace biharm {
namespace {

using testing::random_integer_raster;
using testing::random_raster;

constexpr BoundaryPolicy kAllPolicies[] = {BoundaryPolicy::Mirror, BoundaryPolicy::Replicate,
                                           BoundaryPolicy::Zero, BoundaryPolicy::Wrap};

// Jacobi update written directly from its definition, for interior pixels.
double jacobi_pixel_oracle(const Raster& f, const Stencil& s, std::size_t x, std::size_t y) {
    const int r = s.radius();
    double neighbours = 0.0;
    for (int q = -r; q <= r; ++q)
        for (int p = -r; p <= r; ++p)
            if (p != 0 || q != 0) neighbours += s(p, q) * f(x + p, y + q);
    return -neighbours / s.center();
}

TEST(SmoothJacobi, ConstantRasterIsFixedPoint) {
    // Zero padding makes the border see a step, so it is excluded
    for (const Stencil& s : {biharmonic_stencil(1, 1), biharmonic_stencil(1, 2)}) {
        for (auto b : {BoundaryPolicy::Mirror, BoundaryPolicy::Replicate, BoundaryPolicy::Wrap}) {
            const Raster r(11, 9, 42.5);
            EXPECT_EQ(smooth_jacobi(r, s, 3, b), r) << to_string(b);
        }
    }
}

TEST(SmoothJacobi, PlanarRampUnchangedInInterior) {
    Raster r(40, 40);
    for (std::size_t y = 0; y < 40; ++y)
        for (std::size_t x = 0; x < 40; ++x) r(x, y) = 3.0 * x - 2.0 * y + 7.0;
    const Raster out = smooth_jacobi(r, biharmonic_stencil(1, 1), 1, BoundaryPolicy::Replicate);
    for (std::size_t y = 2; y < 38; ++y)
        for (std::size_t x = 2; x < 38; ++x) EXPECT_EQ(out(x, y), r(x, y));
}

TEST(SmoothJacobi, MatchesDefinitionOnInterior) {
    std::mt19937_64 rng(4);
    const Raster r = random_raster(16, 14, rng, -3, 3);
    const Stencil s = biharmonic_stencil(1.4, 0.9);
    const Raster out = smooth_jacobi(r, s, 1, BoundaryPolicy::Mirror);
    for (std::size_t y = 2; y < 12; ++y)
        for (std::size_t x = 2; x < 14; ++x)
            EXPECT_LE(testing::ulps_apart(out(x, y), jacobi_pixel_oracle(r, s, x, y), 3.0 * s.center()), 8.0);
}

TEST(SmoothJacobi, ReadsOnlyPreviousIterate) {
    std::mt19937_64 rng(9);
    const Raster r = random_raster(12, 12, rng);
    const Stencil s = biharmonic_stencil(1, 1);
    const Raster once = smooth_jacobi(r, s, 1, BoundaryPolicy::Wrap);
    EXPECT_EQ(smooth_jacobi(r, s, 2, BoundaryPolicy::Wrap), smooth_jacobi(once, s, 1, BoundaryPolicy::Wrap));
}

TEST(SmoothJacobi, Errors) {
    const Raster r(8, 8, 1.0);
    EXPECT_THROW(smooth_jacobi(r, biharmonic_stencil(1, 1), 0, BoundaryPolicy::Mirror), std::invalid_argument);
    EXPECT_THROW(smooth_jacobi(r, Stencil(1, {0, 1, 0, 1, 0, 1, 0, 1, 0}), 1, BoundaryPolicy::Mirror),
                 std::invalid_argument);
    EXPECT_THROW(smooth_jacobi(Raster(4, 8), biharmonic_stencil(1, 1), 1, BoundaryPolicy::Mirror),
                 std::invalid_argument);
}

// The plain Jacobi sweep for the 13-point operator has Fourier factor
// 1 - lambda/20 with lambda in [0, 64]: smooth modes decay, but the
// checkerboard (lambda = 64) is multiplied by -2.2 each sweep.
TEST(SmoothJacobi, SpectralBehaviourOfTheSweep) {
    const Stencil s = biharmonic_stencil(1, 1);
    Raster checker(16, 16);
    for (std::size_t y = 0; y < 16; ++y)
        for (std::size_t x = 0; x < 16; ++x) checker(x, y) = (x + y) % 2 == 0 ? 1.0 : -1.0;
    const Raster out = smooth_jacobi(checker, s, 1, BoundaryPolicy::Wrap);
    for (std::size_t i = 0; i < out.size(); ++i) EXPECT_DOUBLE_EQ(out.samples()[i], -2.2 * checker.samples()[i]);

    Raster wave(32, 32);
    for (std::size_t y = 0; y < 32; ++y)
        for (std::size_t x = 0; x < 32; ++x) wave(x, y) = std::cos(2.0 * std::numbers::pi * x / 32.0);
    const double sin2 = std::sin(std::numbers::pi / 32.0) * std::sin(std::numbers::pi / 32.0);
    const double factor = 1.0 - 16.0 * sin2 * sin2 / 20.0;
    const Raster smoothed = smooth_jacobi(wave, s, 1, BoundaryPolicy::Wrap);
    for (std::size_t i = 0; i < wave.size(); ++i) EXPECT_NEAR(smoothed.samples()[i], factor * wave.samples()[i], 1e-12);
}

TEST(AnomalyResidual, Basics) {
    std::mt19937_64 rng(1);
    const Raster r = random_raster(6, 5, rng);
    const AnomalyMap same = anomaly_residual(r, r, "b1");
    for (double v : same.scores.samples()) EXPECT_EQ(v, 0.0);
    EXPECT_EQ(same.mode, ScoreMode::Residual);
    EXPECT_EQ(same.source_band, "b1");

    const Raster offset(6, 5, 12.0);
    Raster plus5 = offset;
    for (double& v : plus5.samples()) v += 5.0;
    const AnomalyMap shifted = anomaly_residual(offset, plus5);
    for (double v : shifted.scores.samples()) EXPECT_EQ(v, 5.0);
    EXPECT_THROW(anomaly_residual(r, Raster(5, 6)), std::invalid_argument);
}

TEST(AnomalyResidual, ImpulseOnConstantBackground) {
    Raster r(15, 15, 50.0);
    r(7, 7) = 150.0;
    const Stencil s = biharmonic_stencil(1, 1);
    const AnomalyMap m = anomaly_residual(r, smooth_jacobi(r, s, 1, BoundaryPolicy::Mirror));
    EXPECT_EQ(m.scores(7, 7), -100.0);
    EXPECT_EQ(m.scores(8, 7), 40.0);
    EXPECT_EQ(m.scores(7, 6), 40.0);
    EXPECT_EQ(m.scores(8, 8), -10.0);
    EXPECT_EQ(m.scores(9, 7), -5.0);
    EXPECT_EQ(m.scores(9, 8), 0.0);
    // oracle: residual = jacobi(f) - f from the definition
    for (std::size_t y = 4; y < 11; ++y)
        for (std::size_t x = 4; x < 11; ++x) EXPECT_EQ(m.scores(x, y), jacobi_pixel_oracle(r, s, x, y) - r(x, y));
}

TEST(AnomalyHighpass, ConstantAndImpulse) {
    const AnomalyMap flat = anomaly_highpass(Raster(8, 8, 3.0), biharmonic_stencil(1, 1), BoundaryPolicy::Mirror);
    for (double v : flat.scores.samples()) EXPECT_EQ(v, 0.0);

    Raster impulse(5, 5, 0.0);
    impulse(2, 2) = 1.0;
    const AnomalyMap m = anomaly_highpass(impulse, laplacian_baseline(), BoundaryPolicy::Zero);
    EXPECT_EQ(m.mode, ScoreMode::HighPass);
    for (std::size_t y = 0; y < 5; ++y) {
        for (std::size_t x = 0; x < 5; ++x) {
            const bool centre = x == 2 && y == 2;
            const bool ring = !centre && x >= 1 && x <= 3 && y >= 1 && y <= 3;
            EXPECT_EQ(m.scores(x, y), centre ? 8.0 : ring ? -1.0 : 0.0);
        }
    }
}

TEST(AnomalyHighpass, JacobiIdentity) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 12; ++trial) {
        const Stencil s = trial % 2 ? biharmonic_stencil(1, 1) : biharmonic_stencil(0.8, 1.7);
        const Raster r = random_raster(24, 19, rng, -50.0, 50.0);
        for (auto b : kAllPolicies) {
            const AnomalyMap residual = anomaly_residual(r, smooth_jacobi(r, s, 1, b));
            const AnomalyMap highpass = anomaly_highpass(r, s, b);
            for (std::size_t i = 0; i < r.size(); ++i) {
                const double expected = -highpass.scores.samples()[i] / s.center();
                EXPECT_LE(testing::ulps_apart(residual.scores.samples()[i], expected, r.samples()[i]), 4.0);
            }
        }
    }
}

TEST(AnomalyHighpass, CubicPolynomialGivesZeroInterior) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        double c[10];
        for (double& v : c) v = coef(rng);
        Raster r(21, 18);
        double magnitude = 0.0;
        for (std::size_t y = 0; y < 18; ++y) {
            for (std::size_t x = 0; x < 21; ++x) {
                const double X = x, Y = y;
                r(x, y) = c[0] + c[1] * X + c[2] * Y + c[3] * X * X + c[4] * X * Y + c[5] * Y * Y +
                          c[6] * X * X * X + c[7] * X * X * Y + c[8] * X * Y * Y + c[9] * Y * Y * Y;
                magnitude = std::max(magnitude, std::abs(r(x, y)));
            }
        }
        const AnomalyMap m = anomaly_highpass(r, biharmonic_stencil(1, 1), BoundaryPolicy::Mirror);
        for (std::size_t y = 2; y < 16; ++y)
            for (std::size_t x = 2; x < 19; ++x) EXPECT_LE(std::abs(m.scores(x, y)), 1e-8 * magnitude);
    }
}

TEST(AnomalyMaps, ShiftEquivarianceUnderWrap) {
    std::mt19937_64 rng(40);
    const Raster r = random_raster(17, 13, rng);
    const std::size_t dx = 5, dy = 3;
    Raster shifted(17, 13);
    for (std::size_t y = 0; y < 13; ++y)
        for (std::size_t x = 0; x < 17; ++x) shifted((x + dx) % 17, (y + dy) % 13) = r(x, y);
    const Stencil s = biharmonic_stencil(1, 1);
    const auto b = BoundaryPolicy::Wrap;
    const AnomalyMap hp = anomaly_highpass(r, s, b);
    const AnomalyMap hp_shift = anomaly_highpass(shifted, s, b);
    const AnomalyMap res = anomaly_residual(r, smooth_jacobi(r, s, 1, b));
    const AnomalyMap res_shift = anomaly_residual(shifted, smooth_jacobi(shifted, s, 1, b));
    for (std::size_t y = 0; y < 13; ++y) {
        for (std::size_t x = 0; x < 17; ++x) {
            EXPECT_EQ(hp_shift.scores((x + dx) % 17, (y + dy) % 13), hp.scores(x, y));
            EXPECT_EQ(res_shift.scores((x + dx) % 17, (y + dy) % 13), res.scores(x, y));
        }
    }
}

TEST(AnomalyMaps, MaxScoreFollowsBandAmplitude) {
    SceneSpec spec;
    spec.width = spec.height = 48;
    spec.bands = 8;
    spec.background.levels = {100, 95, 90, 85, 80, 75, 70, 65};
    spec.anomalies.push_back({AnomalyShape::Disk, 15, 15, 3, 0, 0, {40, 35, 30, 25, 20, 15, 10, 5}});
    spec.anomalies.push_back({AnomalyShape::Rectangle, 33, 30, 0, 4, 6, {32, 28, 24, 20, 16, 12, 8, 4}});
    const Scene scene = synth_scene(spec);
    double previous = INFINITY;
    for (const auto& band : scene.bands.bands()) {
        const AnomalyMap m =
            anomaly_residual(band, smooth_jacobi(band, biharmonic_stencil(1, 1), 1, BoundaryPolicy::Mirror));
        double peak = 0.0;
        for (double v : m.scores.samples()) peak = std::max(peak, std::abs(v));
        EXPECT_LE(peak, previous);
        EXPECT_GT(peak, 0.0);
        previous = peak;
    }
}

TEST(ThresholdMask, ZeroSpreadGivesEmptyMask) {
    const AnomalyMap m{Raster(10, 10, 0.0), "", ScoreMode::Residual};
    const Raster mask = threshold_mask(m, 3.0);
    for (double v : mask.samples()) EXPECT_EQ(v, 0.0);
    const AnomalyMap c{Raster(7, 3, 0.1), "", ScoreMode::Residual};
    const Raster constant_mask = threshold_mask(c, 1e-9);
    for (double v : constant_mask.samples()) EXPECT_EQ(v, 0.0);
}

TEST(ThresholdMask, SingleOutlier) {
    // mean 10, population sd sqrt(9900) = 99.5; 3 sd = 298.5
    Raster scores(10, 10, 0.0);
    scores(4, 6) = 1000.0;
    const auto stats = score_stats(scores);
    EXPECT_DOUBLE_EQ(stats.mean, 10.0);
    EXPECT_DOUBLE_EQ(stats.stddev, std::sqrt(9900.0));
    const Raster mask = threshold_mask({scores, "", ScoreMode::Residual}, 3.0);
    for (std::size_t y = 0; y < 10; ++y)
        for (std::size_t x = 0; x < 10; ++x) EXPECT_EQ(mask(x, y), (x == 4 && y == 6) ? 1.0 : 0.0);
}

TEST(ThresholdMask, TinyKFlagsEverythingOffMean) {
    Raster scores(4, 4, 2.0);
    for (std::size_t x = 0; x < 4; ++x) scores(x, 0) = 6.0;
    const Raster mask = threshold_mask({scores, "", ScoreMode::Residual}, 1e-12);
    for (double v : mask.samples()) EXPECT_EQ(v, 1.0);
}

TEST(ThresholdMask, RejectsNonPositiveK) {
    const AnomalyMap m{Raster(2, 2), "", ScoreMode::Residual};
    EXPECT_THROW(threshold_mask(m, 0.0), std::invalid_argument);
    EXPECT_THROW(threshold_mask(m, -1.0), std::invalid_argument);
}

TEST(ThresholdMask, InvariantUnderPositiveAffineRescale) {
    // integer scores over 64 pixels with power-of-two scales keep every
    // statistic exact, so the comparison is not at the mercy of rounding
    std::mt19937_64 rng(50);
    for (int trial = 0; trial < 30; ++trial) {
        const Raster scores = random_integer_raster(8, 8, rng, -40, 40);
        const Raster base = threshold_mask({scores, "", ScoreMode::HighPass}, 1.5);
        for (double a : {0.5, 2.0, 8.0}) {
            for (double c : {-100.0, 0.0, 37.0}) {
                Raster moved = scores;
                for (double& v : moved.samples()) v = a * v + c;
                EXPECT_EQ(threshold_mask({moved, "", ScoreMode::HighPass}, 1.5), base) << a << " " << c;
            }
        }
    }
}

}  // namespace
}  // namespace biharm
