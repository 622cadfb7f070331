#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace splab {

using Vec3 = std::array<double, 3>;

//! A point on a model manifold. Torus: n angles in [0, 2pi), unused
//! trailing entries zero. Sphere: a unit vector in R^3.
struct Point {
    Vec3 coords{};
    friend bool operator==(const Point&, const Point&) = default;
};

//! Tangent vector in normal coordinates at some base point. Only the first
//! dimension() components are meaningful.
struct Tangent {
    Vec3 comps{};
    friend bool operator==(const Tangent&, const Tangent&) = default;
};

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

//! Flat torus (R / 2pi Z)^n with unit dual lattice, n in {2, 3}.
class TorusModel {
  public:
    explicit TorusModel(int dim);
    [[nodiscard]] int dim() const noexcept { return dim_; }

  private:
    int dim_;
};

//! Round unit sphere S^2.
class SphereModel {
  public:
    [[nodiscard]] static constexpr int dim() noexcept { return 2; }
};

using Manifold = std::variant<TorusModel, SphereModel>;

[[nodiscard]] int dimension(const Manifold& m) noexcept;
[[nodiscard]] double volume(const Manifold& m) noexcept;
[[nodiscard]] double injectivity_radius(const Manifold& m) noexcept;
[[nodiscard]] std::string model_id(const Manifold& m);
[[nodiscard]] inline bool is_torus(const Manifold& m) noexcept
{
    return std::holds_alternative<TorusModel>(m);
}

//! Frequency interval lo < lambda <= hi.
class SpectralWindow {
  public:
    SpectralWindow(double lo, double hi);

    [[nodiscard]] double lo() const noexcept { return lo_; }
    [[nodiscard]] double hi() const noexcept { return hi_; }
    [[nodiscard]] double width() const noexcept { return hi_ - lo_; }
    [[nodiscard]] bool contains(double frequency) const noexcept
    {
        return lo_ < frequency && frequency <= hi_;
    }

  private:
    double lo_;
    double hi_;
};

//! Largest frequency any window may reach.
inline constexpr double kMaxFrequency = 1.0e4;
//! Largest integer bounding box scanned by torus_modes.
inline constexpr std::uint64_t kMaxLatticeCandidates = 1'000'000'000ULL;

struct LatticeMode {
    std::array<int, 3> k{};
    std::int64_t norm2 = 0;
    double frequency = 0.0;
};

struct SphereCluster {
    int ell = 0;
    int multiplicity = 1;
    double frequency = 0.0;
};

[[nodiscard]] inline double sphere_frequency(int ell) noexcept
{
    const double l = ell;
    return std::sqrt(l * (l + 1.0));
}

//! All k in Z^n with lo < |k| <= hi. The comparison is done on the integer
//! |k|^2 against thresholds consistent with the correctly rounded sqrt, so
//! the selection agrees with frequency = sqrt(|k|^2) and window.contains().
[[nodiscard]] std::vector<LatticeMode> torus_modes(const TorusModel& model,
                                                   const SpectralWindow& window);

//! All l >= 0 with lo < sqrt(l(l+1)) <= hi.
[[nodiscard]] std::vector<SphereCluster> sphere_clusters(const SphereModel& model,
                                                         const SpectralWindow& window);

//! Number of real eigenfunctions (with multiplicity) with frequency in the
//! window.
[[nodiscard]] std::int64_t mode_count(const Manifold& m, const SpectralWindow& window);

//! Orthonormal tangent frame used as normal coordinates on the sphere.
//! Deterministic in x0; for the north pole it is (e_x, e_y).
[[nodiscard]] std::pair<Vec3, Vec3> sphere_tangent_frame(const Vec3& x0) noexcept;

[[nodiscard]] Point exp_map(const Manifold& m, const Point& x0, const Tangent& u);
[[nodiscard]] double distance(const Manifold& m, const Point& x, const Point& y) noexcept;

//! Minimal-norm representative of x - y on the torus, componentwise in
//! [-pi, pi].
[[nodiscard]] Vec3 torus_difference(int dim, const Point& x, const Point& y) noexcept;

[[nodiscard]] Point north_pole() noexcept;

// Small vector helpers shared by the geometry code.
[[nodiscard]] inline double dot(const Vec3& a, const Vec3& b) noexcept
{
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
[[nodiscard]] inline Vec3 cross(const Vec3& a, const Vec3& b) noexcept
{
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
[[nodiscard]] inline double norm(const Vec3& a) noexcept { return std::sqrt(dot(a, a)); }
[[nodiscard]] inline Vec3 operator+(const Vec3& a, const Vec3& b) noexcept
{
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
[[nodiscard]] inline Vec3 operator-(const Vec3& a, const Vec3& b) noexcept
{
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
[[nodiscard]] inline Vec3 operator*(double s, const Vec3& a) noexcept
{
    return {s * a[0], s * a[1], s * a[2]};
}

} // namespace splab
