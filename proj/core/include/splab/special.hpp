#pragma once

#include "splab/models.hpp"

#include <span>
#include <vector>

namespace splab {

//! Bessel order nu = twice/2, a non-negative integer or half-integer.
//! Kernels use (n-2)/2 and n/2; radial derivatives of the Weyl main term
//! reach n/2 + (derivative order), so up to nu = 8 is supported.
class BesselOrder {
  public:
    static constexpr int kMaxTwice = 16;

    [[nodiscard]] static BesselOrder from_twice(int twice);
    [[nodiscard]] static BesselOrder integer(int nu) { return from_twice(2 * nu); }

    [[nodiscard]] int twice() const noexcept { return twice_; }
    [[nodiscard]] double value() const noexcept { return 0.5 * twice_; }
    [[nodiscard]] bool is_integer() const noexcept { return twice_ % 2 == 0; }

  private:
    explicit BesselOrder(int twice) : twice_(twice) {}
    int twice_;
};

//! Argument beyond which the power series hands over to the large-argument
//! expansion (integer orders) or closed forms (half-integer orders).
inline constexpr double kBesselSeriesLimit = 12.0;

//! J_nu(x) for x >= 0.
[[nodiscard]] double bessel_j(BesselOrder order, double x);

//! x^{-nu} J_nu(x), continuous at 0 with value 1 / (2^nu Gamma(nu + 1)).
[[nodiscard]] double bessel_j_scaled(BesselOrder order, double x);

struct LegendreValue {
    double value = 0.0;
    double derivative = 0.0;
};

//! P_l(t) and P_l'(t). |t| may exceed 1 by at most 1e-12 (clamped).
[[nodiscard]] LegendreValue legendre_p(int ell, double t);

//! Fills out[l] = P_l(t) for l = 0 .. out.size() - 1.
void legendre_table(double t, std::span<double> out);

struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

//! Gauss-Legendre rule on [-1, 1], exact for polynomials of degree 2*points - 1.
[[nodiscard]] GaussLegendreRule gauss_legendre(int points);

//! Nodes and weights on S^{n-1}; weights sum to its surface area.
struct SphereQuadrature {
    int dim = 2;
    int degree = 0;
    std::vector<Vec3> nodes;
    std::vector<double> weights;
};

inline constexpr int kMaxQuadratureDegree = 200;

//! n = 2: uniform rule on the circle with max(degree + 1, 64) nodes.
//! n = 3: Gauss-Legendre in cos(polar) times uniform azimuth, exact for
//! spherical polynomials of degree <= degree.
[[nodiscard]] SphereQuadrature sphere_quadrature(int n, int degree);

//! Surface area of the unit sphere S^{n-1}.
[[nodiscard]] double unit_sphere_area(int n);

} // namespace splab
