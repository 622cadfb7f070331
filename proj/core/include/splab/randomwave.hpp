#pragma once

#include "splab/models.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace splab {

//! m independent draws of the monochromatic random wave
//! sum_{lambda_j in window} a_j phi_j, a_j ~ N(0, 1), evaluated on a grid.
//!
//! Torus waves use the real basis sqrt(2)/(2pi)^{n/2} {cos, sin}<k, x> over
//! the half lattice (first nonzero component of k positive). Sphere waves
//! are drawn per eigenvalue cluster from a factorization of the cluster's
//! grid covariance (2l+1)/(4pi) P_l(cos d): same law on the grid, with
//! 2l+1 coefficients per cluster.
struct WaveEnsemble {
    std::string model;
    SpectralWindow window{0.0, 1.0};
    std::uint64_t seed = 0;
    std::size_t samples = 0;
    std::size_t coefficient_count = 0;
    std::vector<Point> grid;
    std::vector<double> values; // samples x grid, row-major

    [[nodiscard]] double value(std::size_t sample, std::size_t point) const noexcept
    {
        return values[sample * grid.size() + point];
    }
};

//! Draw i uses Philox stream i of `seed`, so the ensemble is bit-identical
//! for a given seed regardless of thread count.
[[nodiscard]] WaveEnsemble sample_ensemble(const Manifold& model, const SpectralWindow& window,
                                           std::size_t samples, std::uint64_t seed,
                                           std::span<const Point> grid);

struct CovarianceEstimate {
    double estimate = 0.0;
    double standard_error = 0.0;
};

//! (1/m) sum_i phi_i(x) phi_i(y), with the Gaussian-product standard error
//! sqrt((v_xx v_yy + v_xy^2) / m) from empirical second moments.
[[nodiscard]] CovarianceEstimate empirical_covariance(const WaveEnsemble& ens, std::size_t x,
                                                      std::size_t y);

//! Sample mean at a grid point.
[[nodiscard]] double empirical_mean(const WaveEnsemble& ens, std::size_t x);

//! Standardized third moment at a grid point (mean-centred).
[[nodiscard]] double empirical_skewness(const WaveEnsemble& ens, std::size_t x);

} // namespace splab
