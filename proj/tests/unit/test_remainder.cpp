#include "splab/errors.hpp"
#include "splab/remainder.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace splab;
using std::numbers::pi;

TEST(CountingFunction, Examples)
{
    EXPECT_EQ(counting_function(TorusModel(2), 5.0), 81);
    EXPECT_EQ(counting_function(SphereModel{}, 10.5), 121);
    EXPECT_EQ(counting_function(TorusModel(2), 0.0), 1);
    EXPECT_EQ(counting_function(TorusModel(3), 0.0), 1);
    EXPECT_EQ(counting_function(SphereModel{}, 0.0), 1);
    EXPECT_THROW((void)counting_function(SphereModel{}, 2e4), BudgetError);
    EXPECT_THROW((void)counting_function(TorusModel(2), -1.0), ValidationError);
}

TEST(CountingFunction, MatchesBruteForce)
{
    for (int n : {2, 3}) {
        for (int r2 = 0; r2 <= (n == 2 ? 3000 : 300); r2 += (n == 2 ? 7 : 3)) {
            const double lambda = std::sqrt(static_cast<double>(r2));
            EXPECT_EQ(counting_function(TorusModel(n), lambda), oracle::lattice_count_squared(n, r2));
        }
    }
}

TEST(CountingFunction, WindowPartitionAdditivity)
{
    for (const Manifold& m : {Manifold{TorusModel(2)}, Manifold{TorusModel(3)}, Manifold{SphereModel{}}}) {
        for (int trial = 0; trial < 10; ++trial) {
            const double lambda = oracle::uniform(1.0, 25.0);
            std::vector<double> cuts{0.0};
            while (cuts.back() < lambda) {
                cuts.push_back(std::min(lambda, cuts.back() + oracle::uniform(0.05, 3.0)));
            }
            std::int64_t total = 1;
            for (std::size_t i = 1; i < cuts.size(); ++i) {
                total += mode_count(m, SpectralWindow(cuts[i - 1], cuts[i]));
            }
            EXPECT_EQ(total, counting_function(m, lambda));
        }
    }
}

TEST(RemainderField, TorusDiagonalAtFive)
{
    const double r = remainder_field(TorusModel(2), Point{}, Point{}, 5.0, {});
    EXPECT_NEAR(r, (81.0 - 25.0 * pi) / (4 * pi * pi), 1e-13);
}

TEST(RemainderField, BelowFirstFrequency)
{
    for (const Manifold& m : {Manifold{TorusModel(2)}, Manifold{TorusModel(3)}, Manifold{SphereModel{}}}) {
        const Point x = is_torus(m) ? Point{{0.3, 0.2, 0.1}} : north_pole();
        const double lambda = 0.8;
        EXPECT_NEAR(remainder_field(m, x, x, lambda, {}),
                    1.0 / volume(m) - ball_kernel(dimension(m), 0.0, lambda), 1e-14);
    }
}

TEST(RemainderField, SphereJumpAtCluster)
{
    for (int ell : {3, 10, 40}) {
        const double f = sphere_frequency(ell);
        const Point x{oracle::random_unit3()};
        const double below = remainder_field(SphereModel{}, x, x, f - 1e-9, {});
        const double above = remainder_field(SphereModel{}, x, x, f, {});
        // The main-term change over 1e-9 is ~ 2 f 1e-9 / (4 pi).
        EXPECT_NEAR(above - below, (2 * ell + 1) / (4 * pi), 1e-7);
    }
}

TEST(RemainderField, RightContinuousAndSmoothBetweenEigenvalues)
{
    // Between sqrt(25) and sqrt(26) nothing enters; only the main term moves.
    const Manifold t = TorusModel(2);
    const Point x{{0.1, 0.2, 0}};
    const Point y{{0.15, 0.18, 0}};
    const double d = distance(t, x, y);
    const double r0 = remainder_field(t, x, y, 5.0, {});
    for (double l : {5.09, 5.05, 5.001}) {
        EXPECT_NEAR(remainder_field(t, x, y, l, {}) - r0,
                    -(ball_kernel(2, d, l) - ball_kernel(2, d, 5.0)), 1e-12);
    }
}

TEST(RemainderField, TorusTranslationInvariance)
{
    for (int trial = 0; trial < 20; ++trial) {
        const Point x{{oracle::uniform(0, 1), oracle::uniform(0, 1), 0}};
        const Point y{{x.coords[0] + oracle::uniform(-0.5, 0.5), x.coords[1] + oracle::uniform(-0.5, 0.5), 0}};
        const double s0 = oracle::uniform(0, 2 * pi);
        const double s1 = oracle::uniform(0, 2 * pi);
        const Point xs{{std::fmod(x.coords[0] + s0, 2 * pi), std::fmod(x.coords[1] + s1, 2 * pi), 0}};
        const Point ys{{std::fmod(y.coords[0] + s0, 2 * pi), std::fmod(y.coords[1] + s1, 2 * pi), 0}};
        const double lambda = oracle::uniform(5, 60);
        EXPECT_NEAR(remainder_field(TorusModel(2), x, y, lambda, {}),
                    remainder_field(TorusModel(2), xs, ys, lambda, {}), 1e-12);
    }
}

TEST(RemainderField, TorusIntegerRecovery)
{
    for (int trial = 0; trial < 30; ++trial) {
        const double lambda = oracle::uniform(0.0, 150.0);
        const Point x{{oracle::uniform(0, 2 * pi), oracle::uniform(0, 2 * pi), 0}};
        const double rec = remainder_field(TorusModel(2), x, x, lambda, {}) * 4 * pi * pi + pi * lambda * lambda;
        EXPECT_NEAR(rec, static_cast<double>(counting_function(TorusModel(2), lambda)), 1e-8 * lambda * lambda);
        EXPECT_EQ(std::llround(rec), counting_function(TorusModel(2), lambda));
    }
}

TEST(RemainderField, DerivativesAgreeWithFiniteDifferences)
{
    // Torus derivatives are exact; sphere derivatives difference plain values.
    const Manifold t = TorusModel(2);
    const Point x{{0.2, 0.3, 0}};
    const Point y{{0.25, 0.21, 0}};
    const double lambda = 17.3;
    const RemainderEvaluator r(t, lambda);
    for (int j = 0; j <= 1; ++j) {
        for (int k = 0; k <= 1; ++k) {
            for (const auto& a : multi_indices(2, j)) {
                for (const auto& b : multi_indices(2, k)) {
                    const DerivOrder d{a, b};
                    const auto f = [&](const Vec3& s, const Vec3& q) {
                        return r(Point{x.coords + s}, Point{y.coords + q}, {});
                    };
                    EXPECT_NEAR(r(x, y, d), central_difference(f, 2, Vec3{}, Vec3{}, d, 1e-3),
                                1e-6 * std::pow(lambda, 2 + d.total()));
                }
            }
        }
    }
}

TEST(RemainderField, DomainRestriction)
{
    EXPECT_THROW((void)remainder_field(TorusModel(2), Point{}, Point{{2.0, 0, 0}}, 10.0, {}), DomainError);
    EXPECT_THROW((void)remainder_field(SphereModel{}, north_pole(), Point{{1, 0, 0}}, 10.0, {}), DomainError);
}

TEST(ScalingFit, ExactPowerLaw)
{
    std::vector<PowerSample> s;
    for (double l : {10.0, 20.0, 40.0, 80.0, 160.0}) {
        s.push_back({l, 7.0 * std::pow(l, 1.5)});
    }
    const auto fit = scaling_exponent_fit(s);
    EXPECT_NEAR(fit.exponent, 1.5, 1e-12);
    EXPECT_NEAR(fit.prefactor, 7.0, 1e-10);
    EXPECT_LT(fit.residual, 1e-12);
    EXPECT_EQ(fit.dropped_zeros, 0);
}

TEST(ScalingFit, RandomPowerLawsRecovered)
{
    for (int trial = 0; trial < 50; ++trial) {
        const double p = oracle::uniform(-3.0, 4.0);
        const double c = std::exp(oracle::uniform(-5.0, 5.0));
        std::vector<PowerSample> s;
        double l = oracle::uniform(1.0, 10.0);
        for (int i = 0; i < 6; ++i) {
            s.push_back({l, c * std::pow(l, p)});
            l *= oracle::uniform(1.2, 3.0);
        }
        const auto fit = scaling_exponent_fit(s);
        EXPECT_NEAR(fit.exponent, p, 1e-10);
        EXPECT_NEAR(fit.prefactor / c, 1.0, 1e-9);
    }
}

TEST(ScalingFit, SublinearCurvatureAndConstant)
{
    std::vector<PowerSample> s;
    std::vector<PowerSample> flat;
    for (double l : {10.0, 20.0, 40.0, 80.0}) {
        s.push_back({l, l + 100.0});
        flat.push_back({l, 3.0});
    }
    EXPECT_LT(scaling_exponent_fit(s).exponent, 1.0);
    EXPECT_NEAR(scaling_exponent_fit(flat).exponent, 0.0, 1e-14);
}

TEST(ScalingFit, ZerosDroppedAndDegenerateInputs)
{
    std::vector<PowerSample> s{{1, 1}, {2, 0}, {3, 9}, {4, 16}, {5, 25}};
    const auto fit = scaling_exponent_fit(s);
    EXPECT_EQ(fit.dropped_zeros, 1);
    EXPECT_NEAR(fit.exponent, 2.0, 1e-12);
    std::vector<PowerSample> few{{1, 1}, {2, 0}, {3, 9}, {4, 16}};
    EXPECT_THROW((void)scaling_exponent_fit(few), DegenerateInputError);
    std::vector<PowerSample> unsorted{{1, 1}, {3, 2}, {2, 3}, {4, 4}};
    EXPECT_THROW((void)scaling_exponent_fit(unsorted), ValidationError);
}

TEST(RemainderSweep, TorusBelowBaselineExponent)
{
    const std::vector<double> lambdas{25, 50, 100, 200, 400};
    ProbeGrid g;
    const auto rep = remainder_sweep(TorusModel(2), Point{}, g, lambdas, DerivOrder{});
    ASSERT_EQ(rep.samples.size(), lambdas.size());
    for (const auto& s : rep.samples) {
        EXPECT_GE(s.value, 0.0);
    }
    EXPECT_LT(rep.fit.exponent, 0.9);
    EXPECT_EQ(rep.alpha, "0:0");
}

TEST(RemainderSweep, SphereAboveClustersHasLinearGrowth)
{
    std::vector<double> lambdas;
    for (int ell : {25, 50, 100, 200, 400}) {
        lambdas.push_back(sphere_frequency(ell) + 0.01);
    }
    ProbeGrid g;
    g.diagonal_only = true;
    const auto rep = remainder_sweep(SphereModel{}, north_pole(), g, lambdas, DerivOrder{});
    EXPECT_GE(rep.fit.exponent, 0.9);
}

TEST(RemainderSweep, Errors)
{
    const std::vector<double> lambdas{25, 50, 100, 200};
    ProbeGrid empty;
    empty.points_per_axis = 0;
    EXPECT_THROW((void)remainder_sweep(TorusModel(2), Point{}, empty, lambdas, DerivOrder{}),
                 DegenerateInputError);
    ProbeGrid wide;
    wide.radius = 1.0;
    EXPECT_THROW((void)remainder_sweep(TorusModel(2), Point{}, wide, lambdas, DerivOrder{}), ValidationError);
    const std::vector<double> unsorted{25, 20, 100, 200};
    EXPECT_THROW((void)remainder_sweep(TorusModel(2), Point{}, ProbeGrid{}, unsorted, DerivOrder{}),
                 ValidationError);
    EXPECT_THROW((void)remainder_sweep(TorusModel(2), Point{}, ProbeGrid{}, lambdas, 3, 2), OrderError);
}
