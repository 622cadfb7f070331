#pragma once

#include "splab/finite_difference.hpp"
#include "splab/models.hpp"

#include <span>
#include <string>
#include <vector>

namespace splab {

struct ConvergenceRow {
    double lambda = 0.0;
    MultiIndex alpha;
    MultiIndex beta;
    double sup_error = 0.0;
};

struct ConvergenceOptions {
    double delta = 1.0;
    int max_alpha = 1;         // |alpha| <= max_alpha
    int max_beta = 1;          // |beta| <= max_beta
    int max_total = kMaxDerivOrder;
    double radius = 2.0;       // probe offsets in [-radius, radius]^n
    int points_per_axis = 9;
};

struct ConvergenceReport {
    std::string model;
    int dim = 2;
    Point x0;
    ConvergenceOptions options;
    std::vector<ConvergenceRow> rows; // lambda-major, then (alpha, beta)
};

//! For each lambda and each (alpha, beta) in range, the sup over probe
//! offset pairs (u, v) of |rescaled kernel - delta * limit kernel|.
[[nodiscard]] ConvergenceReport convergence_report(const Manifold& model, const Point& x0,
                                                   std::span<const double> lambdas,
                                                   const ConvergenceOptions& options = {});

} // namespace splab
