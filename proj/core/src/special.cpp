#include "splab/special.hpp"

#include "splab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace splab {

namespace {

constexpr double kPi = std::numbers::pi;

// sum_k (-1)^k (x/2)^{2k} / (k! Gamma(k + nu + 1)), i.e. (x/2)^{-nu} J_nu(x).
long double reduced_series(double nu, double x)
{
    const long double q = -0.25L * static_cast<long double>(x) * x;
    long double term = 1.0L / std::tgamma(static_cast<long double>(nu) + 1.0L);
    long double sum = term;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<long double>(k) * (k + nu));
        sum += term;
        if (std::abs(term) < 1e-22L * std::abs(sum) && k > x) {
            break;
        }
    }
    return sum;
}

// Hankel large-argument expansion for J_nu, valid for x well above nu^2.
double bessel_asymptotic(double nu, double x)
{
    const double mu = 4.0 * nu * nu;
    double p = 1.0;
    double q = 0.0;
    double term = 1.0;
    double last = 1.0;
    for (int k = 1; k < 60; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (8.0 * k * x);
        const double mag = std::abs(term);
        if (mag > last) {
            break; // series starts to diverge
        }
        last = mag;
        // Powers k = 1, 2, 3, 4, ... carry signs +, -, -, +, ...
        switch (k % 4) {
        case 0: p += term; break;
        case 1: q += term; break;
        case 2: p -= term; break;
        case 3: q -= term; break;
        }
        if (mag < 1e-17) {
            break;
        }
    }
    const double phase = (0.5 * nu + 0.25) * kPi;
    const double c = std::cos(x) * std::cos(phase) + std::sin(x) * std::sin(phase);
    const double s = std::sin(x) * std::cos(phase) - std::cos(x) * std::sin(phase);
    return std::sqrt(2.0 / (kPi * x)) * (p * c - q * s);
}

// Upward recurrence J_{nu+1} = (2 nu / x) J_nu - J_{nu-1}; stable for x > nu.
double recur_up(double nu0, double j_prev, double j_curr, int steps, double x)
{
    double nu = nu0 + 1.0;
    for (int i = 0; i < steps; ++i) {
        const double next = (2.0 * nu / x) * j_curr - j_prev;
        j_prev = j_curr;
        j_curr = next;
        nu += 1.0;
    }
    return j_curr;
}

double bessel_large(BesselOrder order, double x)
{
    if (order.is_integer()) {
        const double j0 = bessel_asymptotic(0.0, x);
        if (order.twice() == 0) {
            return j0;
        }
        const double j1 = bessel_asymptotic(1.0, x);
        return recur_up(0.0, j0, j1, order.twice() / 2 - 1, x);
    }
    const double amp = std::sqrt(2.0 / (kPi * x));
    const double jm = amp * std::cos(x);
    const double jh = amp * std::sin(x);
    return recur_up(-0.5, jm, jh, (order.twice() - 1) / 2, x);
}

void check_argument(double x)
{
    if (!(x >= 0.0)) {
        throw DomainError("bessel_j: argument must be >= 0, got " + std::to_string(x));
    }
}

} // namespace

BesselOrder BesselOrder::from_twice(int twice)
{
    if (twice < 0 || twice > kMaxTwice) {
        throw DomainError("unsupported Bessel order " + std::to_string(twice) + "/2");
    }
    return BesselOrder(twice);
}

double bessel_j(BesselOrder order, double x)
{
    check_argument(x);
    const double nu = order.value();
    if (x == 0.0) {
        return order.twice() == 0 ? 1.0 : 0.0;
    }
    if (order.twice() == 1) {
        return std::sqrt(2.0 / (kPi * x)) * std::sin(x);
    }
    if (x <= kBesselSeriesLimit) {
        const long double half = 0.5L * x;
        return static_cast<double>(reduced_series(nu, x) * std::pow(half, static_cast<long double>(nu)));
    }
    return bessel_large(order, x);
}

double bessel_j_scaled(BesselOrder order, double x)
{
    check_argument(x);
    const double nu = order.value();
    if (x <= kBesselSeriesLimit) {
        return static_cast<double>(reduced_series(nu, x) /
                                   std::pow(2.0L, static_cast<long double>(nu)));
    }
    return bessel_large(order, x) / std::pow(x, nu);
}

LegendreValue legendre_p(int ell, double t)
{
    if (ell < 0) {
        throw DomainError("legendre_p: degree must be >= 0");
    }
    if (!(std::abs(t) <= 1.0 + 1e-12)) {
        throw DomainError("legendre_p: |t| > 1 (t = " + std::to_string(t) + ")");
    }
    t = std::clamp(t, -1.0, 1.0);
    if (ell == 0) {
        return {1.0, 0.0};
    }
    double p_prev = 1.0;
    double p_curr = t;
    double d_prev = 0.0; // P'_{j-1}
    double d_curr = 1.0; // P'_j
    for (int j = 1; j < ell; ++j) {
        const double p_next = ((2.0 * j + 1.0) * t * p_curr - j * p_prev) / (j + 1.0);
        const double d_next = d_prev + (2.0 * j + 1.0) * p_curr;
        p_prev = p_curr;
        p_curr = p_next;
        d_prev = d_curr;
        d_curr = d_next;
    }
    return {p_curr, d_curr};
}

void legendre_table(double t, std::span<double> out)
{
    if (out.empty()) {
        return;
    }
    if (!(std::abs(t) <= 1.0 + 1e-12)) {
        throw DomainError("legendre_table: |t| > 1");
    }
    t = std::clamp(t, -1.0, 1.0);
    out[0] = 1.0;
    if (out.size() > 1) {
        out[1] = t;
    }
    for (std::size_t j = 1; j + 1 < out.size(); ++j) {
        const double jd = static_cast<double>(j);
        out[j + 1] = ((2.0 * jd + 1.0) * t * out[j] - jd * out[j - 1]) / (jd + 1.0);
    }
}

GaussLegendreRule gauss_legendre(int points)
{
    if (points < 1) {
        throw DomainError("gauss_legendre: need at least one node");
    }
    GaussLegendreRule rule;
    rule.nodes.resize(points);
    rule.weights.resize(points);
    for (int i = 0; i < (points + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (points + 0.5));
        LegendreValue p{};
        for (int iter = 0; iter < 100; ++iter) {
            p = legendre_p(points, x);
            const double dx = p.value / p.derivative;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        p = legendre_p(points, x);
        const double w = 2.0 / ((1.0 - x * x) * p.derivative * p.derivative);
        rule.nodes[i] = -x;
        rule.nodes[points - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[points - 1 - i] = w;
    }
    if (points % 2 == 1) {
        rule.nodes[points / 2] = 0.0;
    }
    return rule;
}

double unit_sphere_area(int n)
{
    // 2 pi^{n/2} / Gamma(n/2)
    return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

SphereQuadrature sphere_quadrature(int n, int degree)
{
    if (degree < 0 || degree > kMaxQuadratureDegree) {
        throw ValidationError("sphere_quadrature: degree must be in [0, " +
                              std::to_string(kMaxQuadratureDegree) + "]");
    }
    SphereQuadrature quad;
    quad.dim = n;
    quad.degree = degree;
    if (n == 2) {
        const int count = std::max(degree + 1, 64);
        quad.nodes.reserve(count);
        quad.weights.assign(count, kTwoPi / count);
        for (int j = 0; j < count; ++j) {
            const double phi = kTwoPi * j / count;
            quad.nodes.push_back({std::cos(phi), std::sin(phi), 0.0});
        }
        return quad;
    }
    if (n == 3) {
        const auto polar = gauss_legendre(degree / 2 + 1);
        const int azimuth = degree + 1;
        for (std::size_t i = 0; i < polar.nodes.size(); ++i) {
            const double z = polar.nodes[i];
            const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            for (int j = 0; j < azimuth; ++j) {
                const double phi = kTwoPi * j / azimuth;
                quad.nodes.push_back({rho * std::cos(phi), rho * std::sin(phi), z});
                quad.weights.push_back(polar.weights[i] * kTwoPi / azimuth);
            }
        }
        return quad;
    }
    throw ValidationError("sphere_quadrature: unsupported dimension " + std::to_string(n));
}

} // namespace splab
