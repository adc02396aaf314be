#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

#include "biharm/stencil.hpp"

namespace biharm {
namespace {

// Independent oracle: the 13-point symmetric pattern has six distinct
// coefficients (axis2_x, axis2_y, diag, axis1_x, axis1_y, centre). Requiring
// the stencil to annihilate 1, x^2, y^2 and to return 24, 24, 8 on x^4, y^4,
// x^2 y^2 gives six linear equations, solved here by Gaussian elimination.
std::array<double, 6> solve_moment_system(double lx, double ly) {
    const double X2 = lx * lx, Y2 = ly * ly;
    // columns: axis2_x, axis2_y, diag, axis1_x, axis1_y, centre | rhs
    double m[6][7] = {
        {2, 2, 4, 2, 2, 1, 0},                                            // 1
        {2 * 4 * X2, 0, 4 * X2, 2 * X2, 0, 0, 0},                          // x^2
        {0, 2 * 4 * Y2, 4 * Y2, 0, 2 * Y2, 0, 0},                          // y^2
        {2 * 16 * X2 * X2, 0, 4 * X2 * X2, 2 * X2 * X2, 0, 0, 24},         // x^4
        {0, 2 * 16 * Y2 * Y2, 4 * Y2 * Y2, 0, 2 * Y2 * Y2, 0, 24},         // y^4
        {0, 0, 4 * X2 * Y2, 0, 0, 0, 8},                                   // x^2 y^2
    };
    for (int col = 0; col < 6; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 6; ++r)
            if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
        for (int k = 0; k < 7; ++k) std::swap(m[col][k], m[pivot][k]);
        for (int r = 0; r < 6; ++r) {
            if (r == col) continue;
            const double f = m[r][col] / m[col][col];
            for (int k = 0; k < 7; ++k) m[r][k] -= f * m[col][k];
        }
    }
    std::array<double, 6> x{};
    for (int i = 0; i < 6; ++i) x[i] = m[i][6] / m[i][i];
    return x;
}

void expect_rel(double actual, double expected, double tol) {
    EXPECT_LE(std::abs(actual - expected), tol * std::max(1.0, std::abs(expected)))
        << "actual " << actual << " expected " << expected;
}

TEST(BiharmonicStencil, UnitIncrementsGiveIntegerTemplate) {
    const Stencil s = biharmonic_stencil(1.0, 1.0);
    ASSERT_EQ(s.radius(), 2);
    const double expected[5][5] = {
        {0, 0, 1, 0, 0}, {0, 2, -8, 2, 0}, {1, -8, 20, -8, 1}, {0, 2, -8, 2, 0}, {0, 0, 1, 0, 0},
    };
    for (int q = -2; q <= 2; ++q)
        for (int p = -2; p <= 2; ++p) EXPECT_EQ(s(p, q), expected[q + 2][p + 2]) << p << "," << q;
}

TEST(BiharmonicStencil, EqualIncrementsScaleByFourthPower) {
    const Stencil unit = biharmonic_stencil(1.0, 1.0);
    const Stencil two = biharmonic_stencil(2.0, 2.0);
    EXPECT_EQ(two.center(), 1.25);
    for (int q = -2; q <= 2; ++q)
        for (int p = -2; p <= 2; ++p) EXPECT_EQ(two(p, q), unit(p, q) / 16.0);
}

TEST(BiharmonicStencil, AnisotropicOneByTwo) {
    const Stencil s = biharmonic_stencil(1.0, 2.0);
    EXPECT_DOUBLE_EQ(s.center(), 8.375);
    EXPECT_DOUBLE_EQ(s(2, 0), 1.0);
    EXPECT_DOUBLE_EQ(s(-2, 0), 1.0);
    EXPECT_DOUBLE_EQ(s(0, 2), 0.0625);
    EXPECT_DOUBLE_EQ(s(0, -2), 0.0625);
    for (int p : {-1, 1})
        for (int q : {-1, 1}) EXPECT_DOUBLE_EQ(s(p, q), 0.5);
    EXPECT_DOUBLE_EQ(s(1, 0), -5.0);
    EXPECT_DOUBLE_EQ(s(-1, 0), -5.0);
    EXPECT_DOUBLE_EQ(s(0, 1), -1.25);
    EXPECT_DOUBLE_EQ(s(0, -1), -1.25);
    EXPECT_EQ(s.lx(), 1.0);
    EXPECT_EQ(s.ly(), 2.0);
}

TEST(BiharmonicStencil, MatchesMomentSystemOracle) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> inc(0.25, 8.0);
    for (int trial = 0; trial < 40; ++trial) {
        const double lx = trial == 0 ? 1.0 : inc(rng);
        const double ly = trial == 0 ? 2.0 : inc(rng);
        const auto oracle = solve_moment_system(lx, ly);
        const Stencil s = biharmonic_stencil(lx, ly);
        const double scale = std::abs(s.center());
        EXPECT_NEAR(s(2, 0), oracle[0], 1e-9 * scale);
        EXPECT_NEAR(s(0, 2), oracle[1], 1e-9 * scale);
        EXPECT_NEAR(s(1, 1), oracle[2], 1e-9 * scale);
        EXPECT_NEAR(s(1, 0), oracle[3], 1e-9 * scale);
        EXPECT_NEAR(s(0, 1), oracle[4], 1e-9 * scale);
        EXPECT_NEAR(s.center(), oracle[5], 1e-9 * scale);
    }
}

TEST(BiharmonicStencil, OuterOffAxisOffsetsAreZero) {
    const Stencil s = biharmonic_stencil(1.3, 0.7);
    for (int q = -2; q <= 2; ++q) {
        for (int p = -2; p <= 2; ++p) {
            if ((std::abs(p) == 2 || std::abs(q) == 2) && p != 0 && q != 0) {
                EXPECT_EQ(s(p, q), 0.0);
            }
        }
    }
}

TEST(BiharmonicStencil, RejectsNonPositiveIncrements) {
    EXPECT_THROW(biharmonic_stencil(0.0, 1.0), std::invalid_argument);
    EXPECT_THROW(biharmonic_stencil(1.0, -2.0), std::invalid_argument);
    EXPECT_THROW(biharmonic_stencil(std::nan(""), 1.0), std::invalid_argument);
}

TEST(LaplacianBaseline, CentreEightNeighboursMinusOne) {
    const Stencil s = laplacian_baseline();
    ASSERT_EQ(s.radius(), 1);
    for (int q = -1; q <= 1; ++q)
        for (int p = -1; p <= 1; ++p) EXPECT_EQ(s(p, q), (p == 0 && q == 0) ? 8.0 : -1.0);
    double sum = 0.0;
    for (double c : s.coefficients()) sum += c;
    EXPECT_EQ(sum, 0.0);
    EXPECT_EQ(monomial_response(s, {1, 0}), 0.0);
    EXPECT_EQ(monomial_response(s, {0, 1}), 0.0);
}

TEST(MonomialResponse, UnitTemplateOnQuartics) {
    const Stencil s = biharmonic_stencil(1.0, 1.0);
    EXPECT_EQ(monomial_response(s, {4, 0}), 24.0);
    EXPECT_EQ(monomial_response(s, {0, 4}), 24.0);
    EXPECT_EQ(monomial_response(s, {2, 2}), 8.0);
    for (int d = 0; d <= 3; ++d)
        for (int u = 0; u <= d; ++u) EXPECT_EQ(monomial_response(s, {u, d - u}), 0.0);
}

TEST(MonomialResponse, RejectsDegreeAboveSeven) {
    const Stencil s = biharmonic_stencil(1.0, 1.0);
    EXPECT_NO_THROW(monomial_response(s, {4, 3}));
    EXPECT_THROW(monomial_response(s, {5, 3}), std::invalid_argument);
    EXPECT_THROW(monomial_response(s, {-1, 0}), std::invalid_argument);
}

TEST(ValidateStencil, BiharmonicStencilsPass) {
    EXPECT_TRUE(validate_stencil(biharmonic_stencil(1.0, 1.0)).passed);
    const auto report = validate_stencil(biharmonic_stencil(1.0, 3.0));
    EXPECT_TRUE(report.passed);
    EXPECT_EQ(report.responses.size(), 15u);
}

TEST(ValidateStencil, BaselineIsStructurallySoundButNotBiharmonic) {
    const auto report = validate_stencil(laplacian_baseline());
    EXPECT_EQ(report.zero_sum_residual, 0.0);
    EXPECT_EQ(report.max_symmetry_violation, 0.0);
    // -6 on x^2: the 3x3 high-pass does not annihilate quadratics
    EXPECT_EQ(report.responses[3].value, -6.0);
    EXPECT_FALSE(report.passed);
}

TEST(ValidateStencil, PerturbedCentreFails) {
    const Stencil base = biharmonic_stencil(1.0, 1.0);
    std::vector<double> c(base.coefficients().begin(), base.coefficients().end());
    c[12] += 1.0;
    const auto report = validate_stencil(Stencil(2, c));
    EXPECT_FALSE(report.passed);
    EXPECT_EQ(report.zero_sum_residual, 1.0);
    EXPECT_EQ(report.max_symmetry_violation, 0.0);
}

TEST(ValidateStencil, AsymmetricStencilFails) {
    const auto report = validate_stencil(Stencil(1, {0, 0, 0, -1, 0, 1, 0, 0, 0}));
    EXPECT_FALSE(report.passed);
    EXPECT_EQ(report.zero_sum_residual, 0.0);
    EXPECT_EQ(report.max_symmetry_violation, 2.0);
}

TEST(StencilType, RejectsBadShapes) {
    EXPECT_THROW(Stencil(1, {1, 2, 3}), std::invalid_argument);
    EXPECT_THROW(Stencil(-1, {}), std::invalid_argument);
    EXPECT_THROW(Stencil(0, {1.0}, 0.0, 1.0), std::invalid_argument);
    EXPECT_THROW(biharmonic_stencil(1, 1)(3, 0), std::out_of_range);
}

TEST(StencilCsv, RowsFromTopQToBottom) {
    const Stencil s(1, {1, 2, 3, 4, 5, 6, 7, 8, 9});
    EXPECT_EQ(stencil_to_csv(s), "7,8,9\n4,5,6\n1,2,3\n");
    EXPECT_EQ(stencil_to_csv(Stencil(0, {0.1})), "0.10000000000000001\n");
}

// ---- properties over sampled increments ------------------------------------

class SampledIncrements : public ::testing::Test {
protected:
    std::vector<std::pair<double, double>> pairs() const {
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> inc(0.25, 8.0);
        std::vector<std::pair<double, double>> out{{0.25, 0.25}, {8.0, 8.0}, {0.25, 8.0}, {8.0, 0.25}};
        while (out.size() < 100) out.emplace_back(inc(rng), inc(rng));
        return out;
    }
};

TEST_F(SampledIncrements, ZeroSumAndMirrorSymmetry) {
    for (auto [lx, ly] : pairs()) {
        const Stencil s = biharmonic_stencil(lx, ly);
        double sum = 0.0, biggest = 0.0;
        for (double c : s.coefficients()) {
            sum += c;
            biggest = std::max(biggest, std::abs(c));
        }
        EXPECT_LE(std::abs(sum), 1e-12 * biggest) << lx << "," << ly;
        for (int q = -2; q <= 2; ++q) {
            for (int p = -2; p <= 2; ++p) {
                EXPECT_EQ(s(p, q), s(-p, q));
                EXPECT_EQ(s(p, q), s(p, -q));
            }
        }
    }
}

TEST_F(SampledIncrements, AnnihilatesCubicsAndReproducesQuartics) {
    for (auto [lx, ly] : pairs()) {
        const Stencil s = biharmonic_stencil(lx, ly);
        for (int d = 0; d <= 3; ++d) {
            for (int u = 0; u <= d; ++u) {
                const Monomial m{u, d - u};
                EXPECT_LE(std::abs(monomial_response(s, m)), 1e-10 * monomial_response_scale(s, m))
                    << "x^" << u << " y^" << d - u << " at " << lx << "," << ly;
            }
        }
        expect_rel(monomial_response(s, {4, 0}), 24.0, 1e-9);
        expect_rel(monomial_response(s, {0, 4}), 24.0, 1e-9);
        expect_rel(monomial_response(s, {2, 2}), 8.0, 1e-9);
        EXPECT_LE(std::abs(monomial_response(s, {3, 1})), 1e-10 * monomial_response_scale(s, {3, 1}));
    }
}

TEST_F(SampledIncrements, ScalingLaw) {
    for (auto [lx, ly] : pairs()) {
        for (double a : {0.5, 1.7, 3.0}) {
            const Stencil base = biharmonic_stencil(lx, ly);
            const Stencil scaled = biharmonic_stencil(a * lx, a * ly);
            const double a4 = a * a * a * a;
            for (int q = -2; q <= 2; ++q)
                for (int p = -2; p <= 2; ++p)
                    EXPECT_LE(std::abs(scaled(p, q) - base(p, q) / a4), 1e-12 * std::abs(base(p, q) / a4));
        }
    }
}

}  // namespace
}  // namespace biharm
