#pragma once

#include "splab/finite_difference.hpp"
#include "splab/models.hpp"
#include "splab/special.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace splab {

//! Finite-difference step for sphere kernel derivatives.
inline constexpr double kSphereDiffStep = 1e-4;

//! Spectral projector kernel E_I(x, y) = sum_{lambda_j in I} phi_j(x) phi_j(y)
//! for one window, with the window's modes enumerated once up front.
//!
//! Torus kernels are evaluated as (2pi)^{-n} sum_k cos<k, x - y> with every
//! lattice vector counted separately; sums use pairwise accumulation.
//! Sphere kernels use the addition theorem, sum_l (2l+1)/(4pi) P_l(cos d).
class WindowKernel {
  public:
    WindowKernel(const Manifold& model, const SpectralWindow& window);

    [[nodiscard]] const Manifold& model() const noexcept { return model_; }
    [[nodiscard]] const SpectralWindow& window() const noexcept { return window_; }
    [[nodiscard]] int dim() const noexcept { return dimension(model_); }
    [[nodiscard]] std::int64_t mode_count() const noexcept { return mode_count_; }
    [[nodiscard]] bool empty() const noexcept { return mode_count_ == 0; }

    [[nodiscard]] double value(const Point& x, const Point& y) const;

    //! d^alpha_u d^beta_v of E(exp_x0(u), exp_x0(v)) in normal coordinates.
    //! Torus: exact. Sphere: central differences, step kSphereDiffStep, one
    //! Richardson level.
    [[nodiscard]] double deriv(const Point& x0, const Tangent& u, const Tangent& v,
                               const DerivOrder& d) const;

    //! Torus only: d^alpha_x d^beta_y E at flat difference w = x - y. Exact.
    [[nodiscard]] double torus_deriv_at(const Vec3& w, const DerivOrder& d) const;

    //! Sphere only: kernel as a function of t = cos d(x, y).
    [[nodiscard]] double sphere_at_cosine(double t) const;

    [[nodiscard]] const std::vector<LatticeMode>& lattice_modes() const noexcept { return modes_; }
    [[nodiscard]] const std::vector<SphereCluster>& clusters() const noexcept { return clusters_; }

  private:
    // sum_k k^gamma e^{i<k,w>} over the window's lattice modes.
    [[nodiscard]] std::complex<double> lattice_sum(const Vec3& w, const MultiIndex& gamma) const;

    Manifold model_;
    SpectralWindow window_;
    std::int64_t mode_count_ = 0;
    std::vector<LatticeMode> modes_;
    int max_component_ = 0;
    std::vector<SphereCluster> clusters_;
};

[[nodiscard]] double projector_kernel(const Manifold& model, const SpectralWindow& window,
                                      const Point& x, const Point& y);

[[nodiscard]] double projector_kernel_deriv(const Manifold& model, const SpectralWindow& window,
                                            const Point& x0, const Tangent& u, const Tangent& v,
                                            const DerivOrder& d);

//! d^alpha_u d^beta_v [lambda^{-(n-1)} E_{(lambda, lambda + delta]}(exp_x0(u/lambda),
//! exp_x0(v/lambda))]. Differentiation happens after the 1/lambda rescaling,
//! so each derivative contributes a factor 1/lambda.
class RescaledKernel {
  public:
    RescaledKernel(const Manifold& model, const Point& x0, double lambda, double delta);

    [[nodiscard]] double operator()(const Tangent& u, const Tangent& v, const DerivOrder& d) const;
    [[nodiscard]] const WindowKernel& window_kernel() const noexcept { return kernel_; }
    [[nodiscard]] double lambda() const noexcept { return lambda_; }

  private:
    WindowKernel kernel_;
    Point x0_;
    double lambda_;
};

[[nodiscard]] double rescaled_kernel(const Manifold& model, const Point& x0, double lambda,
                                     double delta, const Tangent& u, const Tangent& v,
                                     const DerivOrder& d);

//! Quadrature degree that resolves e^{i<w, omega>} and its derivatives to
//! about 1e-8: 2 (|w| + order + 10).
[[nodiscard]] int limit_kernel_degree(double r, int order);

//! Frequency-1 flat projector kernel and derivatives by quadrature:
//! Re (2pi)^{-n} sum_w weight (i omega)^alpha (-i omega)^beta e^{i<u - v, omega>}.
//! Throws NumericalError if the imaginary residue exceeds 1e-10.
[[nodiscard]] double limit_kernel(int n, const Tangent& u, const Tangent& v, const DerivOrder& d,
                                  const SphereQuadrature& quad);

//! Closed form of the underived limit kernel at r = |u - v|:
//! (2pi)^{-n/2} J_{(n-2)/2}(r) / r^{(n-2)/2}.
[[nodiscard]] double limit_kernel_closed(int n, double r);

//! Weyl main term: (2pi)^{-n} times the Fourier transform of the ball of
//! radius lambda, at distance d. Equal to (2pi)^{-n/2} lambda^{n/2}
//! d^{-n/2} J_{n/2}(lambda d); lambda^n vol(B^n) / (2pi)^n at d = 0.
[[nodiscard]] double ball_kernel(int n, double d, double lambda);

//! d^gamma_w of the main term as a function of w in R^n (|w| = d). Exact,
//! via expanding the radial function in powers of w times
//! (1/r d/dr)^m derivatives, which are themselves scaled Bessel functions.
[[nodiscard]] double ball_kernel_deriv(int n, const Vec3& w, double lambda, const MultiIndex& gamma);

//! Regular grid of tangent offsets: points_per_axis^n points spaced
//! uniformly on [-radius, radius]^n.
[[nodiscard]] std::vector<Tangent> offset_grid(int n, double radius, int points_per_axis);

//! One kernel value at an offset pair.
struct KernelSample {
    Tangent u;
    Tangent v;
    DerivOrder order;
    double value = 0.0;
};

struct KernelField {
    std::string model;
    int dim = 2;
    SpectralWindow window{0.0, 1.0};
    Point x0;
    double lambda = 0.0;
    bool rescaled = false;
    std::vector<KernelSample> samples;
};

enum class PairMode { all, diagonal, second_at_origin };

//! Evaluates the kernel (rescaled or plain) over offset pairs drawn from
//! `offsets` according to `pairs`, for each requested order.
[[nodiscard]] KernelField kernel_field(const Manifold& model, const Point& x0, double lambda,
                                       double delta, bool rescaled, std::span<const Tangent> offsets,
                                       PairMode pairs, std::span<const DerivOrder> orders);

} // namespace splab
