#include "splab/scaling.hpp"

#include "splab/errors.hpp"
#include "splab/kernels.hpp"
#include "splab/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace splab {

ConvergenceReport convergence_report(const Manifold& model, const Point& x0,
                                     std::span<const double> lambdas,
                                     const ConvergenceOptions& options)
{
    const int n = dimension(model);
    for (std::size_t i = 1; i < lambdas.size(); ++i) {
        if (!(lambdas[i] > lambdas[i - 1])) {
            throw ValidationError("convergence report: lambda grid must be strictly increasing");
        }
    }
    if (!(options.delta > 0.0)) {
        throw ValidationError("convergence report: delta must be positive");
    }
    if (!(options.radius > 0.0) || options.points_per_axis < 1) {
        throw ValidationError("convergence report: bad probe grid");
    }
    if (options.max_alpha < 0 || options.max_beta < 0) {
        throw OrderError("convergence report: negative derivative order");
    }

    std::vector<DerivOrder> orders;
    for (int j = 0; j <= options.max_alpha; ++j) {
        for (int k = 0; k <= options.max_beta; ++k) {
            if (j + k > std::min(options.max_total, kMaxDerivOrder)) {
                continue;
            }
            for (const auto& a : multi_indices(n, j)) {
                for (const auto& b : multi_indices(n, k)) {
                    orders.push_back({a, b});
                }
            }
        }
    }

    const auto offsets = offset_grid(n, options.radius, options.points_per_axis);
    const std::size_t pairs = offsets.size() * offsets.size();

    // The limit kernel does not depend on lambda.
    std::vector<double> limit(pairs * orders.size());
    parallel_for(pairs, [&](std::size_t p) {
        const Tangent& u = offsets[p / offsets.size()];
        const Tangent& v = offsets[p % offsets.size()];
        double r2 = 0.0;
        for (int i = 0; i < n; ++i) {
            r2 += (u.comps[i] - v.comps[i]) * (u.comps[i] - v.comps[i]);
        }
        for (std::size_t o = 0; o < orders.size(); ++o) {
            const auto quad =
                sphere_quadrature(n, limit_kernel_degree(std::sqrt(r2), orders[o].total()));
            limit[p * orders.size() + o] = options.delta * limit_kernel(n, u, v, orders[o], quad);
        }
    });

    ConvergenceReport report;
    report.model = model_id(model);
    report.dim = n;
    report.x0 = x0;
    report.options = options;
    for (double lambda : lambdas) {
        const RescaledKernel kernel(model, x0, lambda, options.delta);
        std::vector<double> err(pairs * orders.size(), 0.0);
        parallel_for(pairs, [&](std::size_t p) {
            const Tangent& u = offsets[p / offsets.size()];
            const Tangent& v = offsets[p % offsets.size()];
            for (std::size_t o = 0; o < orders.size(); ++o) {
                const double value = kernel.window_kernel().empty() ? 0.0 : kernel(u, v, orders[o]);
                err[p * orders.size() + o] = std::abs(value - limit[p * orders.size() + o]);
            }
        });
        for (std::size_t o = 0; o < orders.size(); ++o) {
            double sup = 0.0;
            for (std::size_t p = 0; p < pairs; ++p) {
                sup = std::max(sup, err[p * orders.size() + o]);
            }
            report.rows.push_back({lambda, orders[o].alpha, orders[o].beta, sup});
        }
    }
    return report;
}

} // namespace splab
