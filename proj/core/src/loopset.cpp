#include "splab/loopset.hpp"

#include "splab/errors.hpp"
#include "splab/parallel.hpp"
#include "splab/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace splab {

namespace {

constexpr double kUnitTol = 1e-10;

double axis_c(const SurfaceSpec& s)
{
    if (const auto* e = std::get_if<EllipsoidSurface>(&s)) {
        return e->c;
    }
    return 1.0;
}

// F = x^2 + y^2 + (z / c)^2 - 1 and its gradient; Hessian is diag(2, 2, 2 / c^2).
Vec3 level_gradient(double c, const Vec3& p)
{
    return {2.0 * p[0], 2.0 * p[1], 2.0 * p[2] / (c * c)};
}

double level_value(double c, const Vec3& p)
{
    return p[0] * p[0] + p[1] * p[1] + p[2] * p[2] / (c * c) - 1.0;
}

Vec3 acceleration(const SurfaceSpec& s, const Vec3& p, const Vec3& v)
{
    if (std::holds_alternative<FlatTorusSurface>(s)) {
        return {};
    }
    const double c = axis_c(s);
    const Vec3 grad = level_gradient(c, p);
    const double vhv = 2.0 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2] / (c * c));
    return (-vhv / dot(grad, grad)) * grad;
}

double speed2(const Vec3& v)
{
    return dot(v, v);
}

void check_base_point(const SurfaceSpec& s, const Vec3& x0)
{
    if (std::holds_alternative<FlatTorusSurface>(s)) {
        if (!std::isfinite(x0[0]) || !std::isfinite(x0[1])) {
            throw DomainError("loopset: base point must be finite");
        }
        return;
    }
    if (!(std::abs(level_value(axis_c(s), x0)) <= 1e-10)) {
        throw DomainError("loopset: base point is not on the surface");
    }
}

void check_direction(const SurfaceSpec& s, const Vec3& x0, const Vec3& xi)
{
    if (!(std::abs(norm(xi) - 1.0) <= kUnitTol)) {
        throw DomainError("integrate_geodesic: direction must have unit length");
    }
    if (std::holds_alternative<FlatTorusSurface>(s)) {
        if (xi[2] != 0.0) {
            throw DomainError("integrate_geodesic: torus direction must lie in the chart plane");
        }
        return;
    }
    const Vec3 grad = level_gradient(axis_c(s), x0);
    if (!(std::abs(dot(grad, xi)) <= kUnitTol * norm(grad))) {
        throw DomainError("integrate_geodesic: direction is not tangent");
    }
}

// Distance from the origin to the segment d + tau s, tau in [0, 1].
std::pair<double, double> closest_on_segment(const Vec3& d, const Vec3& s)
{
    const double ss = dot(s, s);
    double tau = ss > 0.0 ? -dot(d, s) / ss : 0.0;
    tau = std::clamp(tau, 0.0, 1.0);
    const Vec3 q = d + tau * s;
    return {std::sqrt(dot(q, q)), tau};
}

} // namespace

std::string surface_id(const SurfaceSpec& s)
{
    if (std::holds_alternative<FlatTorusSurface>(s)) {
        return "flat_torus";
    }
    if (std::holds_alternative<RoundSphereSurface>(s)) {
        return "round_sphere";
    }
    return "ellipsoid";
}

void validate_surface(const SurfaceSpec& s)
{
    if (const auto* e = std::get_if<EllipsoidSurface>(&s)) {
        if (!(e->c >= 0.5 && e->c <= 2.0)) {
            throw ValidationError("ellipsoid: c must lie in [0.5, 2]");
        }
    }
}

std::pair<Vec3, Vec3> surface_tangent_frame(const SurfaceSpec& s, const Vec3& x0)
{
    validate_surface(s);
    check_base_point(s, x0);
    if (std::holds_alternative<FlatTorusSurface>(s)) {
        return {Vec3{1.0, 0.0, 0.0}, Vec3{0.0, 1.0, 0.0}};
    }
    const Vec3 grad = level_gradient(axis_c(s), x0);
    const Vec3 n = (1.0 / norm(grad)) * grad;
    // Seed with the coordinate axis least aligned with the normal.
    Vec3 seed{};
    std::size_t best = 0;
    for (std::size_t i = 1; i < 3; ++i) {
        if (std::abs(n[i]) < std::abs(n[best])) {
            best = i;
        }
    }
    seed[best] = 1.0;
    Vec3 e1 = seed - dot(seed, n) * n;
    e1 = (1.0 / norm(e1)) * e1;
    return {e1, cross(n, e1)};
}

Vec3 surface_direction(const SurfaceSpec& s, const Vec3& x0, double angle)
{
    const auto [e1, e2] = surface_tangent_frame(s, x0);
    return std::cos(angle) * e1 + std::sin(angle) * e2;
}

double surface_distance(const SurfaceSpec& s, const Vec3& a, const Vec3& b)
{
    if (std::holds_alternative<FlatTorusSurface>(s)) {
        const Vec3 d = torus_difference(2, Point{a}, Point{b});
        return std::hypot(d[0], d[1]);
    }
    if (std::holds_alternative<RoundSphereSurface>(s)) {
        return std::atan2(norm(cross(a, b)), dot(a, b));
    }
    return norm(a - b);
}

Vec3 closed_form_geodesic(const SurfaceSpec& s, const Vec3& x0, const Vec3& xi, double t)
{
    if (std::holds_alternative<FlatTorusSurface>(s)) {
        return x0 + t * xi;
    }
    if (std::holds_alternative<RoundSphereSurface>(s)) {
        return std::cos(t) * x0 + std::sin(t) * xi;
    }
    throw std::invalid_argument("closed_form_geodesic: no closed form for the ellipsoid");
}

Trajectory integrate_geodesic(const SurfaceSpec& s, const Vec3& x0, const Vec3& xi, double t_max,
                              double step)
{
    validate_surface(s);
    check_base_point(s, x0);
    check_direction(s, x0, xi);
    if (!(step > 0.0 && step <= 1e-3)) {
        throw ValidationError("integrate_geodesic: step must lie in (0, 1e-3]");
    }
    if (!(t_max > 0.0) || !std::isfinite(t_max)) {
        throw ValidationError("integrate_geodesic: T_max must be positive");
    }

    const auto steps = static_cast<std::size_t>(std::ceil(t_max / step - 1e-9));
    const double h = t_max / static_cast<double>(steps);
    Trajectory traj;
    traj.step = h;
    traj.times.reserve(steps + 1);
    traj.positions.reserve(steps + 1);
    traj.velocities.reserve(steps + 1);

    Vec3 p = x0;
    Vec3 v = xi;
    const double e0 = speed2(xi);
    traj.times.push_back(0.0);
    traj.positions.push_back(p);
    traj.velocities.push_back(v);
    for (std::size_t k = 1; k <= steps; ++k) {
        const Vec3 a1 = acceleration(s, p, v);
        const Vec3 p2 = p + (0.5 * h) * v;
        const Vec3 v2 = v + (0.5 * h) * a1;
        const Vec3 a2 = acceleration(s, p2, v2);
        const Vec3 p3 = p + (0.5 * h) * v2;
        const Vec3 v3 = v + (0.5 * h) * a2;
        const Vec3 a3 = acceleration(s, p3, v3);
        const Vec3 p4 = p + h * v3;
        const Vec3 v4 = v + h * a3;
        const Vec3 a4 = acceleration(s, p4, v4);
        p = p + (h / 6.0) * (v + 2.0 * v2 + 2.0 * v3 + v4);
        v = v + (h / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
        traj.max_energy_drift = std::max(traj.max_energy_drift, std::abs(speed2(v) - e0));
        traj.times.push_back(static_cast<double>(k) * h);
        traj.positions.push_back(p);
        traj.velocities.push_back(v);
    }
    if (!(traj.max_energy_drift <= kMaxEnergyDrift)) {
        throw NumericalError("integrate_geodesic: energy drift exceeds 1e-6");
    }
    return traj;
}

LoopsetEstimate loopset_fraction(const SurfaceSpec& s, const Vec3& x0, std::size_t directions,
                                 double t_max, double tol, const LoopsetOptions& options)
{
    validate_surface(s);
    if (directions < 100) {
        throw ValidationError("loopset_fraction: need at least 100 directions");
    }
    if (!(tol >= 0.0)) {
        throw ValidationError("loopset_fraction: tol must be >= 0");
    }
    if (!(options.t_min > 0.0 && options.t_min < t_max)) {
        throw ValidationError("loopset_fraction: need 0 < t_min < T_max");
    }
    check_base_point(s, x0);
    const auto [e1, e2] = surface_tangent_frame(s, x0);
    const bool torus = std::holds_alternative<FlatTorusSurface>(s);

    LoopsetEstimate est;
    est.surface = surface_id(s);
    est.x0 = x0;
    est.directions = directions;
    est.t_max = t_max;
    est.tol = tol;
    est.t_min = options.t_min;
    est.step = options.step;
    est.seed = options.seed;
    est.results.resize(directions);
    std::vector<double> drift(directions, 0.0);

    parallel_for(directions, [&](std::size_t i) {
        const double jitter = uniform01(options.seed, i, 0);
        const double angle = 2.0 * std::numbers::pi * (static_cast<double>(i) + jitter) /
                             static_cast<double>(directions);
        Vec3 xi = std::cos(angle) * e1 + std::sin(angle) * e2;
        xi = (1.0 / norm(xi)) * xi;
        const Trajectory traj = integrate_geodesic(s, x0, xi, t_max, options.step);

        DirectionResult r;
        r.angle = angle;
        r.min_distance = std::numeric_limits<double>::infinity();
        const auto& pos = traj.positions;
        for (std::size_t k = 0; k + 1 < pos.size(); ++k) {
            if (traj.times[k] < options.t_min) {
                continue;
            }
            // Offset of the segment start from x0 (minimal image on the torus).
            const Vec3 d = torus ? torus_difference(2, Point{pos[k]}, Point{x0}) : pos[k] - x0;
            const auto [chord, tau] = closest_on_segment(d, pos[k + 1] - pos[k]);
            // Chord to geodesic distance on the sphere; chord elsewhere.
            double dist = chord;
            if (std::holds_alternative<RoundSphereSurface>(s)) {
                dist = 2.0 * std::asin(std::min(1.0, 0.5 * chord));
            }
            if (dist < r.min_distance) {
                r.min_distance = dist;
            }
            if (r.first_return_time < 0.0 && dist <= tol) {
                r.first_return_time = traj.times[k] + tau * traj.step;
            }
        }
        est.results[i] = r;
        drift[i] = traj.max_energy_drift;
    });

    std::size_t flagged = 0;
    for (const auto& r : est.results) {
        flagged += r.first_return_time > 0.0 ? 1 : 0;
    }
    est.fraction = static_cast<double>(flagged) / static_cast<double>(directions);
    est.max_energy_drift = *std::max_element(drift.begin(), drift.end());
    return est;
}

double flagged_fraction(const LoopsetEstimate& est, double tol) noexcept
{
    if (est.results.empty()) {
        return 0.0;
    }
    std::size_t flagged = 0;
    for (const auto& r : est.results) {
        flagged += r.min_distance <= tol ? 1 : 0;
    }
    return static_cast<double>(flagged) / static_cast<double>(est.results.size());
}

} // namespace splab
