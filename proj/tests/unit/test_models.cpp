#include "splab/errors.hpp"
#include "splab/models.hpp"
#include "splab/remainder.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <set>

using namespace splab;
using std::numbers::pi;

TEST(TorusModes, DiscOfRadiusFiveHasEightyModes)
{
    const auto modes = torus_modes(TorusModel(2), SpectralWindow(0.0, 5.0));
    EXPECT_EQ(modes.size(), 80u);
    std::set<std::array<int, 3>> seen;
    for (const auto& m : modes) {
        EXPECT_TRUE(seen.insert(m.k).second);
        EXPECT_GT(m.frequency, 0.0);
        EXPECT_LE(m.frequency, 5.0);
        EXPECT_EQ(m.norm2, m.k[0] * m.k[0] + m.k[1] * m.k[1]);
    }
}

TEST(TorusModes, TinyWindowIsEmpty)
{
    EXPECT_TRUE(torus_modes(TorusModel(2), SpectralWindow(0.0, 0.5)).empty());
}

TEST(TorusModes, ThreeTorusBallOfRadiusTwo)
{
    EXPECT_EQ(torus_modes(TorusModel(3), SpectralWindow(0.0, 2.0)).size(), 32u);
}

TEST(TorusModes, EndpointConvention)
{
    // |k| = 5 sits on hi of (4, 5] and on lo of (5, 6].
    const auto upper = torus_modes(TorusModel(2), SpectralWindow(4.0, 5.0));
    const auto lower = torus_modes(TorusModel(2), SpectralWindow(5.0, 6.0));
    auto has_norm25 = [](const std::vector<LatticeMode>& ms) {
        for (const auto& m : ms) {
            if (m.norm2 == 25) {
                return true;
            }
        }
        return false;
    };
    EXPECT_TRUE(has_norm25(upper));
    EXPECT_FALSE(has_norm25(lower));
}

TEST(TorusModes, BudgetExceeded)
{
    EXPECT_THROW((void)torus_modes(TorusModel(2), SpectralWindow(0.0, 2e4)), BudgetError);
    EXPECT_THROW((void)torus_modes(TorusModel(3), SpectralWindow(0.0, 1e4)), BudgetError);
}

TEST(TorusModes, RandomWindowsMatchBruteForce)
{
    for (int trial = 0; trial < 40; ++trial) {
        const int n = trial % 2 == 0 ? 2 : 3;
        const double lo = oracle::uniform(0.0, n == 2 ? 30.0 : 8.0);
        const double hi = lo + oracle::uniform(0.01, 3.0);
        const SpectralWindow w(lo, hi);
        EXPECT_EQ(static_cast<std::int64_t>(torus_modes(TorusModel(n), w).size()),
                  oracle::lattice_window_count(n, lo, hi))
            << "n=" << n << " window (" << lo << ", " << hi << "]";
    }
    // Integer and sqrt-of-integer endpoints exercise the threshold rounding.
    for (int m2 = 1; m2 < 200; ++m2) {
        const double hi = std::sqrt(static_cast<double>(m2));
        EXPECT_EQ(static_cast<std::int64_t>(torus_modes(TorusModel(2), SpectralWindow(0.0, hi)).size()),
                  oracle::lattice_window_count(2, 0.0, hi));
    }
}

TEST(SphereClusters, Examples)
{
    const SphereModel s;
    const auto a = sphere_clusters(s, SpectralWindow(10.0, 11.0));
    ASSERT_EQ(a.size(), 1u);
    EXPECT_EQ(a[0].ell, 10);
    EXPECT_EQ(a[0].multiplicity, 21);
    EXPECT_NEAR(a[0].frequency, std::sqrt(110.0), 1e-15);

    EXPECT_TRUE(sphere_clusters(s, SpectralWindow(10.5, 10.6)).empty());

    const auto c = sphere_clusters(s, SpectralWindow(0.0, 1.5));
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0].ell, 1);
    EXPECT_EQ(c[0].multiplicity, 3);
}

TEST(SphereClusters, RandomWindowsMatchBruteForce)
{
    for (int trial = 0; trial < 100; ++trial) {
        const double lo = oracle::uniform(0.0, 500.0);
        const double hi = lo + oracle::uniform(0.01, 10.0);
        EXPECT_EQ(mode_count(SphereModel{}, SpectralWindow(lo, hi)), oracle::sphere_window_count(lo, hi));
    }
}

TEST(SpectralWindow, RejectsBadIntervals)
{
    EXPECT_THROW(SpectralWindow(2.0, 2.0), ValidationError);
    EXPECT_THROW(SpectralWindow(3.0, 2.0), ValidationError);
    EXPECT_THROW(SpectralWindow(-1.0, 2.0), ValidationError);
    EXPECT_DOUBLE_EQ(SpectralWindow(1.0, 3.5).width(), 2.5);
}

TEST(TorusModel, DimensionRange)
{
    EXPECT_THROW(TorusModel(1), ValidationError);
    EXPECT_THROW(TorusModel(4), ValidationError);
    EXPECT_NEAR(volume(TorusModel(3)), std::pow(2.0 * pi, 3), 1e-9);
    EXPECT_NEAR(volume(SphereModel{}), 4.0 * pi, 1e-15);
}

TEST(ExpMap, Examples)
{
    const Manifold t = TorusModel(2);
    const Point p = exp_map(t, Point{}, Tangent{{pi / 2, 0.0, 0.0}});
    EXPECT_NEAR(p.coords[0], pi / 2, 1e-15);
    EXPECT_EQ(p.coords[1], 0.0);

    const Manifold s = SphereModel{};
    const Point q = exp_map(s, north_pole(), Tangent{{0.0, pi / 2, 0.0}});
    EXPECT_NEAR(q.coords[2], 0.0, 1e-15);
    EXPECT_NEAR(norm(q.coords), 1.0, 1e-15);

    for (int i = 0; i < 10; ++i) {
        const Point x{oracle::random_unit3()};
        EXPECT_EQ(exp_map(s, x, Tangent{}), x);
    }
}

TEST(ExpMap, DomainError)
{
    EXPECT_THROW((void)exp_map(SphereModel{}, north_pole(), Tangent{{pi, 0.0, 0.0}}), DomainError);
    EXPECT_THROW((void)exp_map(TorusModel(2), Point{}, Tangent{{3.0, 1.0, 0.0}}), DomainError);
}

TEST(ExpMap, DistanceRecoversLength)
{
    for (int i = 0; i < 200; ++i) {
        const bool torus = i % 2 == 0;
        const Manifold m = torus ? Manifold{TorusModel(2)} : Manifold{SphereModel{}};
        const Point x0 = torus ? Point{{oracle::uniform(0, 2 * pi), oracle::uniform(0, 2 * pi), 0}}
                               : Point{oracle::random_unit3()};
        const double r = oracle::uniform(0.0, 0.999 * pi);
        const double a = oracle::uniform(0.0, 2 * pi);
        const Tangent u{{r * std::cos(a), r * std::sin(a), 0.0}};
        EXPECT_NEAR(distance(m, x0, exp_map(m, x0, u)), r, 1e-10);
    }
}

TEST(Distance, Examples)
{
    const Manifold t = TorusModel(2);
    EXPECT_NEAR(distance(t, Point{{0.1, 0, 0}}, Point{{2 * pi - 0.1, 0, 0}}), 0.2, 1e-14);
    EXPECT_NEAR(distance(t, Point{}, Point{{pi, pi, 0}}), pi * std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(distance(SphereModel{}, north_pole(), Point{{0, 0, -1}}), pi, 1e-15);
}

TEST(Distance, TriangleInequalityAndSymmetry)
{
    for (int i = 0; i < 100; ++i) {
        const Point a{oracle::random_unit3()};
        const Point b{oracle::random_unit3()};
        const Point c{oracle::random_unit3()};
        const Manifold s = SphereModel{};
        EXPECT_LE(distance(s, a, c), distance(s, a, b) + distance(s, b, c) + 1e-12);
        EXPECT_EQ(distance(s, a, b), distance(s, b, a));

        const Manifold t = TorusModel(3);
        auto rp = [] {
            return Point{{oracle::uniform(0, 2 * pi), oracle::uniform(0, 2 * pi), oracle::uniform(0, 2 * pi)}};
        };
        const Point x = rp();
        const Point y = rp();
        const Point z = rp();
        EXPECT_LE(distance(t, x, z), distance(t, x, y) + distance(t, y, z) + 1e-12);
        EXPECT_NEAR(distance(t, x, y), distance(t, y, x), 1e-15);
        EXPECT_EQ(distance(t, x, x), 0.0);
    }
}

TEST(ModeCount, PlusConstantModeIsCountingFunction)
{
    for (double lambda : {0.5, 1.0, 3.3, 7.0, 12.25, 40.0}) {
        for (const Manifold& m : {Manifold{TorusModel(2)}, Manifold{TorusModel(3)}, Manifold{SphereModel{}}}) {
            EXPECT_EQ(mode_count(m, SpectralWindow(0.0, lambda)) + 1, counting_function(m, lambda))
                << model_id(m) << " lambda=" << lambda;
        }
    }
}
