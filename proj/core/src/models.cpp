#include "splab/models.hpp"

#include "splab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace splab {

namespace {

std::int64_t isqrt(std::int64_t m)
{
    if (m <= 0) {
        return 0;
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

// Largest m >= -1 with sqrt(double(m)) <= f; -1 when f < 0.
std::int64_t norm2_threshold(double f)
{
    if (f < 0.0) {
        return -1;
    }
    auto m = static_cast<std::int64_t>(std::floor(f * f));
    while (m >= 0 && std::sqrt(static_cast<double>(m)) > f) {
        --m;
    }
    while (std::sqrt(static_cast<double>(m + 1)) <= f) {
        ++m;
    }
    return m;
}

void check_budget(double hi)
{
    if (!(hi <= kMaxFrequency)) {
        throw BudgetError("window upper frequency " + std::to_string(hi) + " exceeds budget " +
                          std::to_string(kMaxFrequency));
    }
}

double wrap_angle(double a)
{
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) {
        r += kTwoPi;
    }
    if (r >= kTwoPi) {
        r = 0.0;
    }
    return r;
}

} // namespace

TorusModel::TorusModel(int dim) : dim_(dim)
{
    if (dim < 2 || dim > 3) {
        throw ValidationError("torus dimension must be 2 or 3, got " + std::to_string(dim));
    }
}

SpectralWindow::SpectralWindow(double lo, double hi) : lo_(lo), hi_(hi)
{
    if (!(lo >= 0.0) || !(hi > lo) || !std::isfinite(hi)) {
        throw ValidationError("spectral window requires 0 <= lo < hi, got (" + std::to_string(lo) +
                              ", " + std::to_string(hi) + "]");
    }
}

int dimension(const Manifold& m) noexcept
{
    return std::visit([](const auto& model) { return model.dim(); }, m);
}

double volume(const Manifold& m) noexcept
{
    if (const auto* t = std::get_if<TorusModel>(&m)) {
        return std::pow(kTwoPi, t->dim());
    }
    return 4.0 * std::numbers::pi;
}

double injectivity_radius(const Manifold&) noexcept { return std::numbers::pi; }

std::string model_id(const Manifold& m)
{
    if (const auto* t = std::get_if<TorusModel>(&m)) {
        return "torus" + std::to_string(t->dim());
    }
    return "sphere2";
}

std::vector<LatticeMode> torus_modes(const TorusModel& model, const SpectralWindow& window)
{
    check_budget(window.hi());
    const int n = model.dim();
    const auto box = static_cast<std::int64_t>(std::ceil(window.hi()));
    const double side = 2.0 * static_cast<double>(box) + 1.0;
    if (std::pow(side, n) > static_cast<double>(kMaxLatticeCandidates)) {
        throw BudgetError("lattice bounding box exceeds " + std::to_string(kMaxLatticeCandidates) +
                          " candidates");
    }

    const std::int64_t hi2 = norm2_threshold(window.hi());
    const std::int64_t lo2 = norm2_threshold(window.lo());
    std::vector<LatticeMode> modes;

    auto emit = [&](int k1, int k2, int k3) {
        const std::int64_t m = std::int64_t{k1} * k1 + std::int64_t{k2} * k2 + std::int64_t{k3} * k3;
        if (m > lo2 && m <= hi2) {
            modes.push_back({{k1, k2, k3}, m, std::sqrt(static_cast<double>(m))});
        }
    };

    // Scan the box row by row; the last coordinate range is cut to the
    // feasible |k_n| <= sqrt(hi2 - rest) since nothing outside can pass.
    for (std::int64_t a = -box; a <= box; ++a) {
        const std::int64_t ra = hi2 - a * a;
        if (ra < 0) {
            continue;
        }
        if (n == 2) {
            const std::int64_t b_max = std::min(box, isqrt(ra));
            for (std::int64_t b = -b_max; b <= b_max; ++b) {
                emit(static_cast<int>(a), static_cast<int>(b), 0);
            }
            continue;
        }
        const std::int64_t b_lim = std::min(box, isqrt(ra));
        for (std::int64_t b = -b_lim; b <= b_lim; ++b) {
            const std::int64_t c_max = std::min(box, isqrt(ra - b * b));
            for (std::int64_t c = -c_max; c <= c_max; ++c) {
                emit(static_cast<int>(a), static_cast<int>(b), static_cast<int>(c));
            }
        }
    }
    return modes;
}

std::vector<SphereCluster> sphere_clusters(const SphereModel&, const SpectralWindow& window)
{
    check_budget(window.hi());
    std::vector<SphereCluster> clusters;
    // sqrt(l(l+1)) lies in (l, l + 1/2), so start one below floor(lo).
    int ell = std::max(0, static_cast<int>(std::floor(window.lo())) - 1);
    for (;; ++ell) {
        const double f = sphere_frequency(ell);
        if (f > window.hi()) {
            break;
        }
        if (window.contains(f)) {
            clusters.push_back({ell, 2 * ell + 1, f});
        }
    }
    return clusters;
}

std::int64_t mode_count(const Manifold& m, const SpectralWindow& window)
{
    if (const auto* t = std::get_if<TorusModel>(&m)) {
        return static_cast<std::int64_t>(torus_modes(*t, window).size());
    }
    std::int64_t count = 0;
    for (const auto& c : sphere_clusters(std::get<SphereModel>(m), window)) {
        count += c.multiplicity;
    }
    return count;
}

std::pair<Vec3, Vec3> sphere_tangent_frame(const Vec3& x0) noexcept
{
    const Vec3 axis = std::abs(x0[0]) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
    Vec3 e1 = axis - dot(axis, x0) * x0;
    e1 = (1.0 / norm(e1)) * e1;
    const Vec3 e2 = cross(x0, e1);
    return {e1, e2};
}

Point exp_map(const Manifold& m, const Point& x0, const Tangent& u)
{
    const int n = dimension(m);
    double len2 = 0.0;
    for (int i = 0; i < n; ++i) {
        len2 += u.comps[i] * u.comps[i];
    }
    const double len = std::sqrt(len2);
    if (!(len < injectivity_radius(m))) {
        throw DomainError("exp_map: |u| = " + std::to_string(len) +
                          " is not below the injectivity radius");
    }

    if (const auto* t = std::get_if<TorusModel>(&m)) {
        Point p;
        for (int i = 0; i < t->dim(); ++i) {
            p.coords[i] = wrap_angle(x0.coords[i] + u.comps[i]);
        }
        return p;
    }

    if (len == 0.0) {
        return x0;
    }
    const auto [e1, e2] = sphere_tangent_frame(x0.coords);
    const Vec3 dir = (1.0 / len) * (u.comps[0] * e1 + u.comps[1] * e2);
    Point p{std::cos(len) * x0.coords + std::sin(len) * dir};
    p.coords = (1.0 / norm(p.coords)) * p.coords;
    return p;
}

Vec3 torus_difference(int dim, const Point& x, const Point& y) noexcept
{
    Vec3 d{};
    for (int i = 0; i < dim; ++i) {
        const double delta = std::fmod(x.coords[i] - y.coords[i], kTwoPi);
        double best = delta;
        for (double shifted : {delta - kTwoPi, delta + kTwoPi}) {
            if (std::abs(shifted) < std::abs(best)) {
                best = shifted;
            }
        }
        d[i] = best;
    }
    return d;
}

double distance(const Manifold& m, const Point& x, const Point& y) noexcept
{
    if (const auto* t = std::get_if<TorusModel>(&m)) {
        return norm(torus_difference(t->dim(), x, y));
    }
    // Same angle as arccos(<x,y>) but accurate for nearby points.
    return std::atan2(norm(cross(x.coords, y.coords)), dot(x.coords, y.coords));
}

Point north_pole() noexcept { return Point{{0.0, 0.0, 1.0}}; }

} // namespace splab
