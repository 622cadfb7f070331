#include "splab/kernels.hpp"

#include "splab/errors.hpp"
#include "splab/summation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

namespace splab {

namespace {

constexpr double kPi = std::numbers::pi;

double norm_n(const Vec3& v, int n)
{
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        s += v[i] * v[i];
    }
    return std::sqrt(s);
}

void check_offset(const Manifold& m, const Tangent& u, const char* what)
{
    if (!(norm_n(u.comps, dimension(m)) < injectivity_radius(m))) {
        throw DomainError(std::string(what) + " offset is not inside the injectivity radius");
    }
}

// Real part of i^power * z.
double real_of_i_power(int power, std::complex<double> z)
{
    switch (((power % 4) + 4) % 4) {
    case 0: return z.real();
    case 1: return -z.imag();
    case 2: return -z.real();
    default: return z.imag();
    }
}

double ipow(double base, int e)
{
    double r = 1.0;
    for (int i = 0; i < e; ++i) {
        r *= base;
    }
    return r;
}

} // namespace

// ----------------------------------------------------------------------------
// Multi-index helpers

void check_order(const DerivOrder& d, int dim)
{
    for (int i = 0; i < 3; ++i) {
        if (d.alpha.e[i] < 0 || d.beta.e[i] < 0) {
            throw OrderError("negative derivative index");
        }
        if (i >= dim && (d.alpha.e[i] != 0 || d.beta.e[i] != 0)) {
            throw OrderError("derivative index beyond the model dimension");
        }
    }
    if (d.total() > kMaxDerivOrder) {
        throw OrderError("total derivative order " + std::to_string(d.total()) + " exceeds " +
                         std::to_string(kMaxDerivOrder));
    }
}

std::vector<MultiIndex> multi_indices(int dim, int order)
{
    std::vector<MultiIndex> out;
    if (dim == 2) {
        for (int a = order; a >= 0; --a) {
            out.push_back({{a, order - a, 0}});
        }
        return out;
    }
    for (int a = order; a >= 0; --a) {
        for (int b = order - a; b >= 0; --b) {
            out.push_back({{a, b, order - a - b}});
        }
    }
    return out;
}

std::string format_multi_index(const MultiIndex& a, int dim)
{
    std::string s;
    for (int i = 0; i < dim; ++i) {
        if (i > 0) {
            s += ':';
        }
        s += std::to_string(a.e[i]);
    }
    return s;
}

MultiIndex parse_multi_index(const std::string& text, int dim)
{
    MultiIndex m;
    std::stringstream in(text);
    std::string part;
    int i = 0;
    while (std::getline(in, part, ':')) {
        if (i >= dim || part.empty() ||
            part.find_first_not_of("0123456789") != std::string::npos) {
            throw ValidationError("malformed multi-index '" + text + "'");
        }
        m.e[i++] = std::stoi(part);
    }
    if (i != dim) {
        throw ValidationError("multi-index '" + text + "' needs " + std::to_string(dim) +
                              " components");
    }
    return m;
}

// ----------------------------------------------------------------------------
// WindowKernel

WindowKernel::WindowKernel(const Manifold& model, const SpectralWindow& window)
    : model_(model), window_(window)
{
    if (const auto* t = std::get_if<TorusModel>(&model_)) {
        modes_ = torus_modes(*t, window_);
        mode_count_ = static_cast<std::int64_t>(modes_.size());
        for (const auto& m : modes_) {
            for (int c : m.k) {
                max_component_ = std::max(max_component_, std::abs(c));
            }
        }
    } else {
        clusters_ = sphere_clusters(std::get<SphereModel>(model_), window_);
        for (const auto& c : clusters_) {
            mode_count_ += c.multiplicity;
        }
    }
}

std::complex<double> WindowKernel::lattice_sum(const Vec3& w, const MultiIndex& gamma) const
{
    const int n = dim();
    const int kmax = max_component_;
    const std::size_t span_len = 2 * static_cast<std::size_t>(kmax) + 1;

    // Per-axis tables of e^{i m w_d} and m^gamma_d for m in [-kmax, kmax].
    std::vector<std::complex<double>> phase(3 * span_len, {1.0, 0.0});
    std::vector<double> power(3 * span_len, 1.0);
    for (int d = 0; d < n; ++d) {
        for (int m = -kmax; m <= kmax; ++m) {
            const double arg = m * w[d];
            const std::size_t idx = d * span_len + static_cast<std::size_t>(m + kmax);
            phase[idx] = {std::cos(arg), std::sin(arg)};
            power[idx] = ipow(static_cast<double>(m), gamma.e[d]);
        }
    }
    const bool plain = gamma.order() == 0;

    PairwiseAccumulator re;
    PairwiseAccumulator im;
    for (const auto& mode : modes_) {
        std::complex<double> z{1.0, 0.0};
        double weight = 1.0;
        for (int d = 0; d < n; ++d) {
            const std::size_t idx = d * span_len + static_cast<std::size_t>(mode.k[d] + kmax);
            z *= phase[idx];
            if (!plain) {
                weight *= power[idx];
            }
        }
        re.add(weight * z.real());
        im.add(weight * z.imag());
    }
    return {re.sum(), im.sum()};
}

double WindowKernel::torus_deriv_at(const Vec3& w, const DerivOrder& d) const
{
    const int n = dim();
    check_order(d, n);
    if (modes_.empty()) {
        return 0.0;
    }
    MultiIndex gamma;
    for (int i = 0; i < 3; ++i) {
        gamma.e[i] = d.alpha.e[i] + d.beta.e[i];
    }
    // d_x^alpha d_y^beta e^{i<k, x-y>} = i^Omega (-1)^{|beta|} k^gamma e^{i<k, x-y>}
    const double sign = d.beta.order() % 2 == 0 ? 1.0 : -1.0;
    const double s = sign * real_of_i_power(d.total(), lattice_sum(w, gamma));
    return s / std::pow(kTwoPi, n);
}

double WindowKernel::sphere_at_cosine(double t) const
{
    if (clusters_.empty()) {
        return 0.0;
    }
    const int lmax = clusters_.back().ell;
    std::vector<double> p(static_cast<std::size_t>(lmax) + 1);
    legendre_table(t, p);
    double sum = 0.0;
    for (const auto& c : clusters_) {
        sum += c.multiplicity * p[static_cast<std::size_t>(c.ell)];
    }
    return sum / (4.0 * kPi);
}

double WindowKernel::value(const Point& x, const Point& y) const
{
    if (is_torus(model_)) {
        return torus_deriv_at(torus_difference(dim(), x, y), DerivOrder{});
    }
    return sphere_at_cosine(dot(x.coords, y.coords));
}

double WindowKernel::deriv(const Point& x0, const Tangent& u, const Tangent& v,
                           const DerivOrder& d) const
{
    const int n = dim();
    check_order(d, n);
    check_offset(model_, u, "first");
    check_offset(model_, v, "second");
    if (is_torus(model_)) {
        // Torus kernels depend only on x - y = u - v; no wrapping needed.
        return torus_deriv_at(u.comps - v.comps, d);
    }
    if (clusters_.empty()) {
        return 0.0;
    }
    if (d.total() == 0) {
        return value(exp_map(model_, x0, u), exp_map(model_, x0, v));
    }
    const auto f = [&](const Vec3& s, const Vec3& t) {
        return value(exp_map(model_, x0, Tangent{s}), exp_map(model_, x0, Tangent{t}));
    };
    return central_difference(f, n, u.comps, v.comps, d, kSphereDiffStep);
}

double projector_kernel(const Manifold& model, const SpectralWindow& window, const Point& x,
                        const Point& y)
{
    return WindowKernel(model, window).value(x, y);
}

double projector_kernel_deriv(const Manifold& model, const SpectralWindow& window, const Point& x0,
                              const Tangent& u, const Tangent& v, const DerivOrder& d)
{
    return WindowKernel(model, window).deriv(x0, u, v, d);
}

// ----------------------------------------------------------------------------
// Rescaled and limit kernels

RescaledKernel::RescaledKernel(const Manifold& model, const Point& x0, double lambda, double delta)
    : kernel_(model, SpectralWindow(lambda, lambda + delta)), x0_(x0), lambda_(lambda)
{
    if (!(lambda > 0.0)) {
        throw ValidationError("rescaled kernel needs lambda > 0");
    }
}

double RescaledKernel::operator()(const Tangent& u, const Tangent& v, const DerivOrder& d) const
{
    const int n = kernel_.dim();
    const Tangent us{(1.0 / lambda_) * u.comps};
    const Tangent vs{(1.0 / lambda_) * v.comps};
    const double scale = std::pow(lambda_, -(n - 1) - d.total());
    return scale * kernel_.deriv(x0_, us, vs, d);
}

double rescaled_kernel(const Manifold& model, const Point& x0, double lambda, double delta,
                       const Tangent& u, const Tangent& v, const DerivOrder& d)
{
    return RescaledKernel(model, x0, lambda, delta)(u, v, d);
}

int limit_kernel_degree(double r, int order)
{
    return static_cast<int>(std::ceil(2.0 * (r + order + 10.0)));
}

double limit_kernel(int n, const Tangent& u, const Tangent& v, const DerivOrder& d,
                    const SphereQuadrature& quad)
{
    check_order(d, n);
    if (quad.dim != n) {
        throw ValidationError("limit_kernel: quadrature dimension mismatch");
    }
    const Vec3 w = u.comps - v.comps;
    MultiIndex gamma;
    for (int i = 0; i < 3; ++i) {
        gamma.e[i] = d.alpha.e[i] + d.beta.e[i];
    }
    PairwiseAccumulator re;
    PairwiseAccumulator im;
    PairwiseAccumulator mag;
    for (std::size_t q = 0; q < quad.nodes.size(); ++q) {
        const Vec3& om = quad.nodes[q];
        double mono = quad.weights[q];
        for (int i = 0; i < n; ++i) {
            mono *= ipow(om[i], gamma.e[i]);
        }
        double arg = 0.0;
        for (int i = 0; i < n; ++i) {
            arg += w[i] * om[i];
        }
        re.add(mono * std::cos(arg));
        im.add(mono * std::sin(arg));
        mag.add(std::abs(mono));
    }
    // (i omega)^alpha (-i omega)^beta = i^Omega (-1)^{|beta|} omega^gamma
    const std::complex<double> z{re.sum(), im.sum()};
    const double sign = d.beta.order() % 2 == 0 ? 1.0 : -1.0;
    const double real = sign * real_of_i_power(d.total(), z);
    const double imag = sign * real_of_i_power(d.total() + 3, z); // Im(i^O z) = Re(i^{O-1} z)
    if (std::abs(imag) > 1e-10 * std::max(1.0, mag.sum())) {
        throw NumericalError("limit_kernel: imaginary residue " + std::to_string(imag));
    }
    return real / std::pow(kTwoPi, n);
}

double limit_kernel_closed(int n, double r)
{
    const auto order = BesselOrder::from_twice(n - 2);
    return bessel_j_scaled(order, r) / std::pow(kTwoPi, 0.5 * n);
}

// ----------------------------------------------------------------------------
// Weyl main term

double ball_kernel(int n, double d, double lambda)
{
    if (!(d >= 0.0) || !(lambda >= 0.0)) {
        throw DomainError("ball_kernel: need d >= 0 and lambda >= 0");
    }
    const auto order = BesselOrder::from_twice(n);
    return std::pow(lambda, n) * bessel_j_scaled(order, lambda * d) / std::pow(kTwoPi, 0.5 * n);
}

double ball_kernel_deriv(int n, const Vec3& w, double lambda, const MultiIndex& gamma)
{
    if (gamma.order() > kMaxDerivOrder) {
        throw OrderError("ball_kernel_deriv: order too high");
    }
    // The main term is Phi(s) with s = |w|^2 / 2, and
    // Phi^{(m)}(s) = (2pi)^{-n/2} (-lambda^2)^m lambda^n g_{n/2+m}(lambda r),
    // g_nu(z) = z^{-nu} J_nu(z). Track terms c * w^e * Phi^{(m)}.
    struct Term {
        double coef;
        std::array<int, 3> e;
        int m;
    };
    std::vector<Term> terms{{1.0, {0, 0, 0}, 0}};
    for (int axis = 0; axis < n; ++axis) {
        for (int rep = 0; rep < gamma.e[axis]; ++rep) {
            std::vector<Term> next;
            for (const auto& t : terms) {
                if (t.e[axis] > 0) {
                    Term a = t;
                    a.coef *= t.e[axis];
                    a.e[axis] -= 1;
                    next.push_back(a);
                }
                Term b = t;
                b.e[axis] += 1;
                b.m += 1;
                next.push_back(b);
            }
            terms = std::move(next);
        }
    }

    const double r = norm_n(w, n);
    const double z = lambda * r;
    std::array<double, kMaxDerivOrder + 1> phi{};
    for (int m = 0; m <= gamma.order(); ++m) {
        const auto order = BesselOrder::from_twice(n + 2 * m);
        const double sign = m % 2 == 0 ? 1.0 : -1.0;
        phi[m] = sign * std::pow(lambda, n + 2 * m) * bessel_j_scaled(order, z) /
                 std::pow(kTwoPi, 0.5 * n);
    }
    double sum = 0.0;
    for (const auto& t : terms) {
        double mono = t.coef;
        for (int i = 0; i < n; ++i) {
            mono *= ipow(w[i], t.e[i]);
        }
        sum += mono * phi[t.m];
    }
    return sum;
}

// ----------------------------------------------------------------------------
// Fields

std::vector<Tangent> offset_grid(int n, double radius, int points_per_axis)
{
    if (points_per_axis < 1) {
        throw DegenerateInputError("offset grid needs at least one point per axis");
    }
    if (!(radius >= 0.0)) {
        throw ValidationError("offset grid radius must be >= 0");
    }
    std::vector<double> axis(points_per_axis, 0.0);
    if (points_per_axis > 1) {
        for (int i = 0; i < points_per_axis; ++i) {
            axis[i] = -radius + 2.0 * radius * i / (points_per_axis - 1);
        }
    }
    std::vector<Tangent> grid;
    if (n == 2) {
        for (double a : axis) {
            for (double b : axis) {
                grid.push_back(Tangent{{a, b, 0.0}});
            }
        }
    } else {
        for (double a : axis) {
            for (double b : axis) {
                for (double c : axis) {
                    grid.push_back(Tangent{{a, b, c}});
                }
            }
        }
    }
    return grid;
}

KernelField kernel_field(const Manifold& model, const Point& x0, double lambda, double delta,
                         bool rescaled, std::span<const Tangent> offsets, PairMode pairs,
                         std::span<const DerivOrder> orders)
{
    KernelField field;
    field.model = model_id(model);
    field.dim = dimension(model);
    field.window = SpectralWindow(lambda, lambda + delta);
    field.x0 = x0;
    field.lambda = lambda;
    field.rescaled = rescaled;

    std::vector<std::pair<Tangent, Tangent>> uv;
    for (std::size_t i = 0; i < offsets.size(); ++i) {
        switch (pairs) {
        case PairMode::all:
            for (const auto& v : offsets) {
                uv.emplace_back(offsets[i], v);
            }
            break;
        case PairMode::diagonal: uv.emplace_back(offsets[i], offsets[i]); break;
        case PairMode::second_at_origin: uv.emplace_back(offsets[i], Tangent{}); break;
        }
    }

    std::optional<WindowKernel> plain;
    std::optional<RescaledKernel> scaled;
    if (rescaled) {
        scaled.emplace(model, x0, lambda, delta);
    } else {
        plain.emplace(model, field.window);
    }
    for (const auto& d : orders) {
        for (const auto& [u, v] : uv) {
            const double value = rescaled ? (*scaled)(u, v, d) : plain->deriv(x0, u, v, d);
            field.samples.push_back({u, v, d, value});
        }
    }
    return field;
}

} // namespace splab
