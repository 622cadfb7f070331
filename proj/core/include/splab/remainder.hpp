#pragma once

#include "splab/finite_difference.hpp"
#include "splab/kernels.hpp"
#include "splab/models.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace splab {

//! Weyl remainder R(x, y, lambda) = E_{[0, lambda]}(x, y) - main term, and
//! its derivatives, for one lambda. E_{[0, lambda]} includes the constant
//! eigenfunction 1/sqrt(vol M).
class RemainderEvaluator {
  public:
    RemainderEvaluator(const Manifold& model, double lambda);

    //! d^alpha_x d^beta_y R(x, y, lambda). Torus derivatives are exact in the
    //! flat coordinates; sphere derivatives are central differences in
    //! normal coordinates at x (first slot) and y (second slot).
    [[nodiscard]] double operator()(const Point& x, const Point& y, const DerivOrder& d) const;

    [[nodiscard]] double lambda() const noexcept { return lambda_; }
    [[nodiscard]] const Manifold& model() const noexcept { return model_; }

  private:
    [[nodiscard]] double plain(const Point& x, const Point& y) const;

    Manifold model_;
    double lambda_;
    std::optional<WindowKernel> kernel_; // window (0, lambda]; empty at lambda = 0
};

[[nodiscard]] double remainder_field(const Manifold& model, const Point& x, const Point& y,
                                     double lambda, const DerivOrder& d);

//! #{j : lambda_j <= lambda}, counted with multiplicity, constant mode included.
[[nodiscard]] std::int64_t counting_function(const Manifold& model, double lambda);

struct PowerSample {
    double lambda = 0.0;
    double value = 0.0;
};

struct PowerLawFit {
    double exponent = 0.0;  // slope of log value against log lambda
    double prefactor = 0.0; // exp(intercept)
    double residual = 0.0;  // max |log-log deviation|
    int dropped_zeros = 0;
};

//! Least-squares line through (log lambda, log value). Non-positive values
//! are dropped and counted; fewer than 4 survivors is a DegenerateInputError.
[[nodiscard]] PowerLawFit scaling_exponent_fit(std::span<const PowerSample> samples);

//! Probe points exp_x0(u) for u on a points_per_axis^n grid in [-radius, radius]^n.
struct ProbeGrid {
    double radius = 0.1;
    int points_per_axis = 5;
    bool diagonal_only = false; // pairs (x, x) only, instead of all (x, y)
};

[[nodiscard]] std::vector<Point> probe_points(const Manifold& model, const Point& x0,
                                              const ProbeGrid& grid);

struct RemainderReport {
    std::string model;
    int dim = 2;
    Point x0;
    std::string alpha; // multi-index label, or total order for a family sweep
    std::string beta;
    std::vector<PowerSample> samples; // (lambda, sup |R|)
    PowerLawFit fit;
};

//! For each lambda, sup of |d R| over all probe pairs; then the power-law fit.
[[nodiscard]] RemainderReport remainder_sweep(const Manifold& model, const Point& x0,
                                              const ProbeGrid& grid,
                                              std::span<const double> lambdas,
                                              const DerivOrder& d);

//! Same, but the sup also runs over every (alpha, beta) with |alpha| = j and
//! |beta| = k, i.e. the C^j x C^k seminorm of R on the probe set.
[[nodiscard]] RemainderReport remainder_sweep(const Manifold& model, const Point& x0,
                                              const ProbeGrid& grid,
                                              std::span<const double> lambdas, int j, int k);

} // namespace splab
