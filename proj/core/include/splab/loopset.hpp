#pragma once

#include "splab/models.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace splab {

//! Flat torus (R / 2pi Z)^2; positions are chart angles (theta1, theta2, 0).
struct FlatTorusSurface {};

//! Round unit sphere in R^3.
struct RoundSphereSurface {};

//! Ellipsoid of revolution x^2 + y^2 + (z / c)^2 = 1, c in [0.5, 2].
struct EllipsoidSurface {
    double c = 1.0;
};

using SurfaceSpec = std::variant<FlatTorusSurface, RoundSphereSurface, EllipsoidSurface>;

[[nodiscard]] std::string surface_id(const SurfaceSpec& s);
void validate_surface(const SurfaceSpec& s);

//! Orthonormal basis of the tangent plane at x0 (torus: chart axes).
[[nodiscard]] std::pair<Vec3, Vec3> surface_tangent_frame(const SurfaceSpec& s, const Vec3& x0);

//! Unit tangent direction at x0 making `angle` with the first frame vector.
[[nodiscard]] Vec3 surface_direction(const SurfaceSpec& s, const Vec3& x0, double angle);

//! Geodesic distance for torus and sphere; chordal distance for the
//! ellipsoid (agrees with d_g to second order near the diagonal).
[[nodiscard]] double surface_distance(const SurfaceSpec& s, const Vec3& a, const Vec3& b);

//! Closed-form geodesic for the torus (straight line, unwrapped) and the
//! sphere (great circle). Throws std::invalid_argument for the ellipsoid.
[[nodiscard]] Vec3 closed_form_geodesic(const SurfaceSpec& s, const Vec3& x0, const Vec3& xi,
                                        double t);

struct Trajectory {
    double step = 1e-3;
    std::vector<double> times;
    std::vector<Vec3> positions;  // torus positions are unwrapped
    std::vector<Vec3> velocities;
    double max_energy_drift = 0.0; // max |g(v, v) - 1|
};

inline constexpr double kMaxEnergyDrift = 1e-6;

//! Fixed-step classical RK4 for the geodesic equation. Sphere and ellipsoid
//! are integrated in R^3 with the constraint acceleration
//! -(v^T H v / |grad F|^2) grad F of the level set F = 0; the torus is flat.
//! Throws DomainError for a non-unit or non-tangent xi, and NumericalError
//! if the speed drifts by more than kMaxEnergyDrift.
[[nodiscard]] Trajectory integrate_geodesic(const SurfaceSpec& s, const Vec3& x0, const Vec3& xi,
                                            double t_max, double step = 1e-3);

struct DirectionResult {
    double angle = 0.0;
    double first_return_time = -1.0; // -1 when no return within tol
    double min_distance = 0.0;       // over t in [t_min, t_max]
};

struct LoopsetEstimate {
    std::string surface;
    Vec3 x0{};
    std::size_t directions = 0;
    double t_max = 0.0;
    double tol = 0.0;
    double t_min = 0.1;
    double step = 1e-3;
    std::uint64_t seed = 0;
    double fraction = 0.0;
    double max_energy_drift = 0.0;
    std::vector<DirectionResult> results;
};

struct LoopsetOptions {
    double step = 1e-3;
    double t_min = 0.1;
    std::uint64_t seed = 0;
};

//! Directions are stratified: angle_i = 2pi (i + U_i) / N with U_i uniform
//! from the seeded generator. A direction loops if the geodesic comes within
//! tol of x0 at some t in [t_min, t_max] (closest approach on each step
//! segment). Since a geodesic sits at distance t_min from x0 at t = t_min,
//! tol >= t_min flags every direction.
[[nodiscard]] LoopsetEstimate loopset_fraction(const SurfaceSpec& s, const Vec3& x0,
                                               std::size_t directions, double t_max, double tol,
                                               const LoopsetOptions& options = {});

//! Fraction of the estimate's directions whose min distance is <= tol.
[[nodiscard]] double flagged_fraction(const LoopsetEstimate& est, double tol) noexcept;

} // namespace splab
