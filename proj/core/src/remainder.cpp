#include "splab/remainder.hpp"

#include "splab/errors.hpp"
#include "splab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace splab {

namespace {

std::int64_t isqrt(std::int64_t m)
{
    if (m < 0) {
        return -1;
    }
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(m)));
    while (r * r > m) {
        --r;
    }
    while ((r + 1) * (r + 1) <= m) {
        ++r;
    }
    return r;
}

std::vector<DerivOrder> order_family(int dim, int j, int k)
{
    std::vector<DerivOrder> out;
    for (const auto& a : multi_indices(dim, j)) {
        for (const auto& b : multi_indices(dim, k)) {
            out.push_back({a, b});
        }
    }
    return out;
}

RemainderReport sweep(const Manifold& model, const Point& x0, const ProbeGrid& grid,
                      std::span<const double> lambdas, std::span<const DerivOrder> orders)
{
    const int n = dimension(model);
    for (const auto& d : orders) {
        check_order(d, n);
    }
    for (std::size_t i = 1; i < lambdas.size(); ++i) {
        if (!(lambdas[i] > lambdas[i - 1])) {
            throw ValidationError("remainder sweep: lambda grid must be strictly increasing");
        }
    }
    const auto points = probe_points(model, x0, grid);
    if (points.empty()) {
        throw DegenerateInputError("remainder sweep: empty probe grid");
    }

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < points.size(); ++a) {
        if (grid.diagonal_only) {
            pairs.emplace_back(a, a);
            continue;
        }
        for (std::size_t b = 0; b < points.size(); ++b) {
            pairs.emplace_back(a, b);
        }
    }

    // The torus remainder depends on x - y only; evaluate each distinct
    // difference once. Keys are differences rounded to 1e-12.
    std::vector<std::size_t> representative;
    if (is_torus(model)) {
        std::map<std::array<long long, 3>, std::size_t> seen;
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            const Vec3 w = torus_difference(n, points[pairs[p].first], points[pairs[p].second]);
            std::array<long long, 3> key{};
            for (int i = 0; i < 3; ++i) {
                key[i] = std::llround(w[i] * 1e12);
            }
            if (seen.emplace(key, p).second) {
                representative.push_back(p);
            }
        }
    } else {
        representative.resize(pairs.size());
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            representative[p] = p;
        }
    }

    RemainderReport report;
    report.model = model_id(model);
    report.dim = n;
    report.x0 = x0;
    for (double lambda : lambdas) {
        const RemainderEvaluator remainder(model, lambda);
        std::vector<double> local(representative.size(), 0.0);
        parallel_for(representative.size(), [&](std::size_t i) {
            const auto& [a, b] = pairs[representative[i]];
            double best = 0.0;
            for (const auto& d : orders) {
                best = std::max(best, std::abs(remainder(points[a], points[b], d)));
            }
            local[i] = best;
        });
        const double sup = local.empty() ? 0.0 : *std::max_element(local.begin(), local.end());
        report.samples.push_back({lambda, sup});
    }
    report.fit = scaling_exponent_fit(report.samples);
    return report;
}

} // namespace

RemainderEvaluator::RemainderEvaluator(const Manifold& model, double lambda)
    : model_(model), lambda_(lambda)
{
    if (!(lambda >= 0.0)) {
        throw ValidationError("remainder: lambda must be >= 0");
    }
    if (lambda > 0.0) {
        kernel_.emplace(model_, SpectralWindow(0.0, lambda));
    }
}

double RemainderEvaluator::plain(const Point& x, const Point& y) const
{
    const double full = 1.0 / volume(model_) + (kernel_ ? kernel_->value(x, y) : 0.0);
    return full - ball_kernel(dimension(model_), distance(model_, x, y), lambda_);
}

double RemainderEvaluator::operator()(const Point& x, const Point& y, const DerivOrder& d) const
{
    const int n = dimension(model_);
    check_order(d, n);
    if (!(distance(model_, x, y) < 0.5 * injectivity_radius(model_))) {
        throw DomainError("remainder: points must be within half the injectivity radius");
    }

    if (is_torus(model_)) {
        const Vec3 w = torus_difference(n, x, y);
        MultiIndex gamma;
        for (int i = 0; i < 3; ++i) {
            gamma.e[i] = d.alpha.e[i] + d.beta.e[i];
        }
        double spectral = kernel_ ? kernel_->torus_deriv_at(w, d) : 0.0;
        if (d.total() == 0) {
            spectral += 1.0 / volume(model_);
        }
        // Main term is B(x - y): d_y contributes a sign per derivative.
        const double sign = d.beta.order() % 2 == 0 ? 1.0 : -1.0;
        return spectral - sign * ball_kernel_deriv(n, w, lambda_, gamma);
    }

    if (d.total() == 0) {
        return plain(x, y);
    }
    const auto f = [&](const Vec3& s, const Vec3& t) {
        return plain(exp_map(model_, x, Tangent{s}), exp_map(model_, y, Tangent{t}));
    };
    return central_difference(f, n, Vec3{}, Vec3{}, d, kSphereDiffStep);
}

double remainder_field(const Manifold& model, const Point& x, const Point& y, double lambda,
                       const DerivOrder& d)
{
    return RemainderEvaluator(model, lambda)(x, y, d);
}

std::int64_t counting_function(const Manifold& model, double lambda)
{
    if (!(lambda >= 0.0)) {
        throw ValidationError("counting_function: lambda must be >= 0");
    }
    if (!(lambda <= kMaxFrequency)) {
        throw BudgetError("counting_function: lambda exceeds budget");
    }
    if (const auto* t = std::get_if<TorusModel>(&model)) {
        // Largest M with sqrt(M) <= lambda, then count rows of the disc/ball.
        auto bound = static_cast<std::int64_t>(std::floor(lambda * lambda));
        while (bound >= 0 && std::sqrt(static_cast<double>(bound)) > lambda) {
            --bound;
        }
        while (std::sqrt(static_cast<double>(bound + 1)) <= lambda) {
            ++bound;
        }
        const std::int64_t r = isqrt(bound);
        std::int64_t count = 0;
        for (std::int64_t a = -r; a <= r; ++a) {
            const std::int64_t rest = bound - a * a;
            if (t->dim() == 2) {
                count += 2 * isqrt(rest) + 1;
                continue;
            }
            const std::int64_t rb = isqrt(rest);
            for (std::int64_t b = -rb; b <= rb; ++b) {
                count += 2 * isqrt(rest - b * b) + 1;
            }
        }
        return count;
    }
    // sum_{l <= L} (2l + 1) = (L + 1)^2 for the largest L with lambda_L <= lambda.
    std::int64_t ell = static_cast<std::int64_t>(lambda);
    while (ell >= 0 && sphere_frequency(static_cast<int>(ell)) > lambda) {
        --ell;
    }
    while (sphere_frequency(static_cast<int>(ell + 1)) <= lambda) {
        ++ell;
    }
    return (ell + 1) * (ell + 1);
}

PowerLawFit scaling_exponent_fit(std::span<const PowerSample> samples)
{
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (!(samples[i].lambda > samples[i - 1].lambda)) {
            throw ValidationError("scaling fit: lambda must be strictly increasing");
        }
    }
    PowerLawFit fit;
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& s : samples) {
        if (!(s.lambda > 0.0)) {
            throw ValidationError("scaling fit: lambda must be positive");
        }
        if (!(s.value > 0.0)) {
            ++fit.dropped_zeros;
            continue;
        }
        xs.push_back(std::log(s.lambda));
        ys.push_back(std::log(s.value));
    }
    if (xs.size() < 4) {
        throw DegenerateInputError("scaling fit: fewer than 4 positive samples");
    }
    const auto m = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    fit.exponent = sxy / sxx;
    const double intercept = my - fit.exponent * mx;
    fit.prefactor = std::exp(intercept);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        fit.residual = std::max(fit.residual, std::abs(ys[i] - (intercept + fit.exponent * xs[i])));
    }
    return fit;
}

std::vector<Point> probe_points(const Manifold& model, const Point& x0, const ProbeGrid& grid)
{
    if (grid.points_per_axis <= 0) {
        return {};
    }
    const int n = dimension(model);
    if (!(grid.radius * std::sqrt(static_cast<double>(n)) < 0.25 * injectivity_radius(model))) {
        // Any two probe points then stay within half the injectivity radius.
        throw ValidationError("probe grid radius too large for the model");
    }
    std::vector<Point> points;
    for (const auto& u : offset_grid(n, grid.radius, grid.points_per_axis)) {
        points.push_back(exp_map(model, x0, u));
    }
    return points;
}

RemainderReport remainder_sweep(const Manifold& model, const Point& x0, const ProbeGrid& grid,
                                std::span<const double> lambdas, const DerivOrder& d)
{
    const std::vector<DerivOrder> orders{d};
    auto report = sweep(model, x0, grid, lambdas, orders);
    report.alpha = format_multi_index(d.alpha, report.dim);
    report.beta = format_multi_index(d.beta, report.dim);
    return report;
}

RemainderReport remainder_sweep(const Manifold& model, const Point& x0, const ProbeGrid& grid,
                                std::span<const double> lambdas, int j, int k)
{
    if (j < 0 || k < 0 || j + k > kMaxDerivOrder) {
        throw OrderError("remainder sweep: derivative orders out of range");
    }
    const auto orders = order_family(dimension(model), j, k);
    auto report = sweep(model, x0, grid, lambdas, orders);
    report.alpha = std::to_string(j);
    report.beta = std::to_string(k);
    return report;
}

} // namespace splab
