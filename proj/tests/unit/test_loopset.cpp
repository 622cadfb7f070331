#include "splab/errors.hpp"
#include "splab/loopset.hpp"

#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace splab;
using std::numbers::pi;

namespace {

Vec3 random_tangent(const Vec3& x0)
{
    const auto [e1, e2] = surface_tangent_frame(RoundSphereSurface{}, x0);
    const double a = oracle::uniform(0, 2 * pi);
    return std::cos(a) * e1 + std::sin(a) * e2;
}

} // namespace

TEST(Geodesic, SphereClosesAtTwoPi)
{
    for (int i = 0; i < 5; ++i) {
        const Vec3 x0 = oracle::random_unit3();
        const Vec3 xi = random_tangent(x0);
        const auto traj = integrate_geodesic(RoundSphereSurface{}, x0, xi, 2 * pi);
        EXPECT_LE(norm(traj.positions.back() - x0), 1e-6);
        EXPECT_NEAR(traj.times.back(), 2 * pi, 1e-12);
    }
}

TEST(Geodesic, TorusWrapsAfterOnePeriod)
{
    const auto traj = integrate_geodesic(FlatTorusSurface{}, Vec3{}, Vec3{1, 0, 0}, 2 * pi);
    EXPECT_NEAR(traj.positions.back()[0], 2 * pi, 1e-12);
    EXPECT_NEAR(surface_distance(FlatTorusSurface{}, traj.positions.back(), Vec3{}), 0.0, 1e-12);
}

TEST(Geodesic, OracleAgreementOverLongHorizon)
{
    for (int i = 0; i < 4; ++i) {
        const Vec3 x0 = oracle::random_unit3();
        const Vec3 xi = random_tangent(x0);
        const auto traj = integrate_geodesic(RoundSphereSurface{}, x0, xi, 20.0);
        double worst = 0.0;
        for (std::size_t k = 0; k < traj.times.size(); k += 97) {
            worst = std::max(worst, norm(traj.positions[k] - closed_form_geodesic(RoundSphereSurface{}, x0, xi,
                                                                                  traj.times[k])));
        }
        EXPECT_LE(worst, 1e-6);
        EXPECT_LE(traj.max_energy_drift, 1e-6);

        const Vec3 t0{oracle::uniform(0, 2 * pi), oracle::uniform(0, 2 * pi), 0};
        const double a = oracle::uniform(0, 2 * pi);
        const Vec3 d{std::cos(a), std::sin(a), 0};
        const auto flat = integrate_geodesic(FlatTorusSurface{}, t0, d, 20.0);
        EXPECT_LE(norm(flat.positions.back() - closed_form_geodesic(FlatTorusSurface{}, t0, d, 20.0)), 1e-6);
    }
}

TEST(Geodesic, EllipsoidStaysOnSurfaceAndConservesSpeed)
{
    for (double c : {0.5, 0.8, 1.5, 2.0}) {
        const EllipsoidSurface e{c};
        const double th = 0.7;
        const Vec3 x0{std::sin(th), 0.0, c * std::cos(th)};
        const Vec3 xi = surface_direction(e, x0, 0.4);
        const auto traj = integrate_geodesic(e, x0, xi, 20.0);
        EXPECT_LE(traj.max_energy_drift, 1e-6) << c;
        const Vec3& p = traj.positions.back();
        EXPECT_NEAR(p[0] * p[0] + p[1] * p[1] + p[2] * p[2] / (c * c), 1.0, 1e-8) << c;
        // Clairaut: r * cos(angle with parallel) = x vy - y vx is conserved.
        const Vec3& v = traj.velocities.back();
        EXPECT_NEAR(p[0] * v[1] - p[1] * v[0], x0[0] * xi[1] - x0[1] * xi[0], 1e-8) << c;
    }
}

TEST(Geodesic, UnitSphereEllipsoidMatchesSphere)
{
    const Vec3 x0{0, 0, 1};
    const Vec3 xi{0.6, 0.8, 0};
    const auto a = integrate_geodesic(EllipsoidSurface{1.0}, x0, xi, 5.0);
    const auto b = integrate_geodesic(RoundSphereSurface{}, x0, xi, 5.0);
    EXPECT_LE(norm(a.positions.back() - b.positions.back()), 1e-14);
}

TEST(Geodesic, Errors)
{
    EXPECT_THROW((void)integrate_geodesic(RoundSphereSurface{}, Vec3{0, 0, 1}, Vec3{1.001, 0, 0}, 1.0), DomainError);
    EXPECT_THROW((void)integrate_geodesic(RoundSphereSurface{}, Vec3{0, 0, 1}, Vec3{0, 0.6, 0.8}, 1.0), DomainError);
    EXPECT_THROW((void)integrate_geodesic(RoundSphereSurface{}, Vec3{0, 0, 1.1}, Vec3{1, 0, 0}, 1.0), DomainError);
    EXPECT_THROW((void)integrate_geodesic(RoundSphereSurface{}, Vec3{0, 0, 1}, Vec3{1, 0, 0}, 1.0, 2e-3),
                 ValidationError);
    EXPECT_THROW((void)integrate_geodesic(EllipsoidSurface{3.0}, Vec3{0, 0, 3}, Vec3{1, 0, 0}, 1.0), ValidationError);
    EXPECT_THROW((void)closed_form_geodesic(EllipsoidSurface{1.5}, Vec3{0, 0, 1.5}, Vec3{1, 0, 0}, 1.0),
                 std::invalid_argument);
}

TEST(Loopset, SphereEveryDirectionLoops)
{
    LoopsetOptions opt;
    opt.seed = 3;
    const auto est = loopset_fraction(RoundSphereSurface{}, oracle::random_unit3(), 200, 7.0, 1e-3, opt);
    EXPECT_EQ(est.fraction, 1.0);
    for (const auto& r : est.results) {
        EXPECT_NEAR(r.first_return_time, 2 * pi, 2e-3);
        EXPECT_GT(r.first_return_time, 0.0);
        EXPECT_LE(r.first_return_time, 7.0);
    }
    EXPECT_LE(est.max_energy_drift, 1e-6);
}

TEST(Loopset, DegenerateEllipsoidIsSphere)
{
    const auto est = loopset_fraction(EllipsoidSurface{1.0}, Vec3{0, 0, 1}, 100, 7.0, 1e-3);
    EXPECT_EQ(est.fraction, 1.0);
}

TEST(Loopset, TorusMatchesRationalSlopeOracle)
{
    LoopsetOptions opt;
    opt.seed = 8;
    const double t_max = 20.0;
    const auto est = loopset_fraction(FlatTorusSurface{}, Vec3{}, 400, t_max, 1e-3, opt);
    for (const auto& r : est.results) {
        EXPECT_NEAR(r.min_distance, oracle::torus_line_min_distance(r.angle, opt.t_min, t_max), 1e-9)
            << "angle " << r.angle;
    }
    // Tolerances stay below t_min: the origin itself sits at distance t_min.
    for (double tol : {0.09, 0.05, 0.03, 0.01}) {
        int expect = 0;
        for (const auto& r : est.results) {
            expect += oracle::torus_line_min_distance(r.angle, opt.t_min, t_max) <= tol ? 1 : 0;
        }
        EXPECT_DOUBLE_EQ(flagged_fraction(est, tol), expect / 400.0) << tol;
    }
}

TEST(Loopset, FractionNonIncreasingInTolerance)
{
    for (const SurfaceSpec& s : {SurfaceSpec{FlatTorusSurface{}}, SurfaceSpec{EllipsoidSurface{0.7}}}) {
        const Vec3 x0 = std::holds_alternative<FlatTorusSurface>(s) ? Vec3{} : Vec3{std::sin(1.0), 0, 0.7 * std::cos(1.0)};
        const auto est = loopset_fraction(s, x0, 150, 15.0, 0.5);
        double prev = 1.0;
        for (double tol = 0.5; tol > 1e-5; tol *= 0.5) {
            const double f = flagged_fraction(est, tol);
            EXPECT_LE(f, prev);
            EXPECT_GE(f, 0.0);
            prev = f;
        }
        EXPECT_EQ(flagged_fraction(est, 0.5), est.fraction);
    }
}

TEST(Loopset, TorusFractionDecaysLinearlyInTol)
{
    // Each rational direction flags a band whose angular width is
    // proportional to tol, so fraction(tol) / tol stays bounded.
    LoopsetOptions opt;
    opt.t_min = 0.5;
    const auto est = loopset_fraction(FlatTorusSurface{}, Vec3{}, 2000, 20.0, 0.2, opt);
    const double f1 = flagged_fraction(est, 0.2);
    const double f2 = flagged_fraction(est, 0.1);
    const double f4 = flagged_fraction(est, 0.05);
    ASSERT_GT(f4, 0.0);
    EXPECT_NEAR(f1 / f2, 2.0, 0.5);
    EXPECT_NEAR(f2 / f4, 2.0, 0.5);
}

TEST(Loopset, StratifiedDirectionsAndReproducibility)
{
    LoopsetOptions opt;
    opt.seed = 77;
    const auto a = loopset_fraction(FlatTorusSurface{}, Vec3{}, 100, 1.0, 1e-3, opt);
    const auto b = loopset_fraction(FlatTorusSurface{}, Vec3{}, 100, 1.0, 1e-3, opt);
    for (std::size_t i = 0; i < 100; ++i) {
        EXPECT_GE(a.results[i].angle, 2 * pi * i / 100.0);
        EXPECT_LT(a.results[i].angle, 2 * pi * (i + 1) / 100.0);
        EXPECT_EQ(a.results[i].angle, b.results[i].angle);
        EXPECT_EQ(a.results[i].first_return_time, -1.0);
    }
}

TEST(Loopset, Errors)
{
    EXPECT_THROW((void)loopset_fraction(FlatTorusSurface{}, Vec3{}, 99, 7.0, 1e-3), ValidationError);
    EXPECT_THROW((void)loopset_fraction(FlatTorusSurface{}, Vec3{}, 100, 7.0, -1e-3), ValidationError);
    EXPECT_THROW((void)loopset_fraction(EllipsoidSurface{0.4}, Vec3{0, 0, 0.4}, 100, 7.0, 1e-3), ValidationError);
}
