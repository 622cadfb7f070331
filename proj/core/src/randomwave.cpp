#include "splab/randomwave.hpp"

#include "splab/errors.hpp"
#include "splab/parallel.hpp"
#include "splab/random.hpp"
#include "splab/special.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace splab {

namespace {

bool in_half_lattice(const LatticeMode& m)
{
    for (int c : m.k) {
        if (c != 0) {
            return c > 0;
        }
    }
    return false;
}

// Columns of the returned matrix map coefficient vectors to grid values.
Eigen::MatrixXd torus_basis(const TorusModel& model, const SpectralWindow& window,
                            std::span<const Point> grid)
{
    const int n = model.dim();
    const double c = std::sqrt(2.0) / std::pow(kTwoPi, 0.5 * n);
    std::vector<LatticeMode> half;
    for (const auto& m : torus_modes(model, window)) {
        if (in_half_lattice(m)) {
            half.push_back(m);
        }
    }
    Eigen::MatrixXd basis(static_cast<Eigen::Index>(grid.size()),
                          static_cast<Eigen::Index>(2 * half.size()));
    for (std::size_t g = 0; g < grid.size(); ++g) {
        for (std::size_t h = 0; h < half.size(); ++h) {
            double phase = 0.0;
            for (int i = 0; i < n; ++i) {
                phase += half[h].k[i] * grid[g].coords[i];
            }
            basis(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(2 * h)) = c * std::cos(phase);
            basis(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(2 * h + 1)) =
                c * std::sin(phase);
        }
    }
    return basis;
}

// Per cluster: C = V diag(s) V^T, keep the min(G, 2l+1) leading eigenpairs
// (C has rank <= 2l+1), padded to 2l+1 columns so every cluster consumes
// exactly its multiplicity in coefficients.
Eigen::MatrixXd sphere_factor(const SphereModel& model, const SpectralWindow& window,
                              std::span<const Point> grid)
{
    const auto g = static_cast<Eigen::Index>(grid.size());
    const auto clusters = sphere_clusters(model, window);
    Eigen::Index total = 0;
    for (const auto& c : clusters) {
        total += c.multiplicity;
    }
    Eigen::MatrixXd factor = Eigen::MatrixXd::Zero(g, total);
    Eigen::Index column = 0;
    for (const auto& c : clusters) {
        Eigen::MatrixXd cov(g, g);
        const double scale = c.multiplicity / (4.0 * std::numbers::pi);
        for (Eigen::Index a = 0; a < g; ++a) {
            for (Eigen::Index b = a; b < g; ++b) {
                const double t = dot(grid[a].coords, grid[b].coords);
                const double v = scale * legendre_p(c.ell, std::clamp(t, -1.0, 1.0)).value;
                cov(a, b) = v;
                cov(b, a) = v;
            }
        }
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
        if (eig.info() != Eigen::Success) {
            throw NumericalError("sphere covariance factorization failed");
        }
        const Eigen::Index keep = std::min<Eigen::Index>(g, c.multiplicity);
        for (Eigen::Index j = 0; j < keep; ++j) {
            const Eigen::Index src = g - 1 - j; // eigenvalues ascend
            const double s = std::max(0.0, eig.eigenvalues()(src));
            factor.col(column + j) = std::sqrt(s) * eig.eigenvectors().col(src);
        }
        column += c.multiplicity;
    }
    return factor;
}

} // namespace

WaveEnsemble sample_ensemble(const Manifold& model, const SpectralWindow& window,
                             std::size_t samples, std::uint64_t seed, std::span<const Point> grid)
{
    if (samples < 1) {
        throw DegenerateInputError("sample_ensemble: need at least one sample");
    }
    if (grid.empty()) {
        throw DegenerateInputError("sample_ensemble: empty evaluation grid");
    }
    const Eigen::MatrixXd map = is_torus(model)
                                    ? torus_basis(std::get<TorusModel>(model), window, grid)
                                    : sphere_factor(std::get<SphereModel>(model), window, grid);
    if (map.cols() == 0) {
        throw DegenerateInputError("sample_ensemble: window contains no eigenfrequency");
    }

    WaveEnsemble ens;
    ens.model = model_id(model);
    ens.window = window;
    ens.seed = seed;
    ens.samples = samples;
    ens.coefficient_count = static_cast<std::size_t>(map.cols());
    ens.grid.assign(grid.begin(), grid.end());
    ens.values.assign(samples * grid.size(), 0.0);

    const auto gsize = static_cast<Eigen::Index>(grid.size());
    parallel_for(samples, [&](std::size_t i) {
        const NormalStream normals(seed, i);
        Eigen::VectorXd coeff(map.cols());
        for (Eigen::Index j = 0; j < map.cols(); ++j) {
            coeff(j) = normals(static_cast<std::uint64_t>(j));
        }
        // Fixed-order dot products keep results independent of threading.
        for (Eigen::Index g = 0; g < gsize; ++g) {
            double acc = 0.0;
            for (Eigen::Index j = 0; j < map.cols(); ++j) {
                acc += map(g, j) * coeff(j);
            }
            ens.values[i * grid.size() + static_cast<std::size_t>(g)] = acc;
        }
    });
    return ens;
}

CovarianceEstimate empirical_covariance(const WaveEnsemble& ens, std::size_t x, std::size_t y)
{
    if (ens.samples < 2) {
        throw DegenerateInputError("empirical_covariance: need at least two samples");
    }
    if (x >= ens.grid.size() || y >= ens.grid.size()) {
        throw std::out_of_range("empirical_covariance: grid index out of range");
    }
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < ens.samples; ++i) {
        const double a = ens.value(i, x);
        const double b = ens.value(i, y);
        sxy += a * b;
        sxx += a * a;
        syy += b * b;
    }
    const auto m = static_cast<double>(ens.samples);
    const double vxy = sxy / m;
    const double vxx = sxx / m;
    const double vyy = syy / m;
    return {vxy, std::sqrt((vxx * vyy + vxy * vxy) / m)};
}

double empirical_mean(const WaveEnsemble& ens, std::size_t x)
{
    double s = 0.0;
    for (std::size_t i = 0; i < ens.samples; ++i) {
        s += ens.value(i, x);
    }
    return s / static_cast<double>(ens.samples);
}

double empirical_skewness(const WaveEnsemble& ens, std::size_t x)
{
    const double mean = empirical_mean(ens, x);
    double m2 = 0.0;
    double m3 = 0.0;
    for (std::size_t i = 0; i < ens.samples; ++i) {
        const double d = ens.value(i, x) - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    const auto m = static_cast<double>(ens.samples);
    m2 /= m;
    m3 /= m;
    return m3 / std::pow(m2, 1.5);
}

} // namespace splab
