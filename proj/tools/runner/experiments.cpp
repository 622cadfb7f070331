#include "runner/experiments.hpp"

#include "splab/errors.hpp"
#include "splab/io.hpp"
#include "splab/parallel.hpp"
#include "splab/version.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

namespace splab::runner {

namespace fs = std::filesystem;

namespace {

using Writer = std::function<std::vector<std::string>(const fs::path&)>;

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) {
        out.push_back(trim(item));
    }
    return out;
}

Manifold read_model(Config& cfg)
{
    const std::string name = cfg.require_string("model.name");
    const auto dim = cfg.get_int("model.dim", 2);
    if (name == "torus") {
        return TorusModel(static_cast<int>(dim));
    }
    if (name == "sphere") {
        if (dim != 2) {
            throw ValidationError("model.dim: only the 2-sphere is supported");
        }
        return SphereModel();
    }
    throw ValidationError("model.name must be torus or sphere, got '" + name + "'");
}

Point read_base_point(Config& cfg, const Manifold& model)
{
    const Point fallback = is_torus(model) ? Point{} : north_pole();
    if (!cfg.has("model.x0")) {
        (void)cfg.get_string("model.x0", "");
        return fallback;
    }
    const auto xs = cfg.require_doubles("model.x0");
    const std::size_t want = is_torus(model) ? static_cast<std::size_t>(dimension(model)) : 3;
    if (xs.size() != want) {
        throw ValidationError("model.x0 needs " + std::to_string(want) + " components");
    }
    Point p;
    for (std::size_t i = 0; i < want; ++i) {
        p.coords[i] = xs[i];
    }
    if (!is_torus(model) && !(std::abs(norm(p.coords) - 1.0) <= 1e-12)) {
        throw ValidationError("model.x0 must be a unit vector on the sphere");
    }
    return p;
}

void check_budget(std::span<const double> lambdas, double extra = 0.0)
{
    for (double l : lambdas) {
        if (!(l >= 0.0) || !std::isfinite(l)) {
            throw ValidationError("lambda values must be finite and >= 0");
        }
        if (l + extra > kMaxFrequency) {
            throw BudgetError("lambda " + format_number(l + extra) + " exceeds the frequency budget " +
                              format_number(kMaxFrequency));
        }
    }
}

void check_increasing(std::span<const double> lambdas, const std::string& key)
{
    for (std::size_t i = 1; i < lambdas.size(); ++i) {
        if (!(lambdas[i] > lambdas[i - 1])) {
            throw ValidationError(key + " must be strictly increasing");
        }
    }
}

int read_points(Config& cfg, const std::string& key, long long fallback)
{
    const auto p = cfg.get_int(key, fallback);
    if (p < 1 || p > 101) {
        throw ValidationError(key + " must lie in [1, 101]");
    }
    return static_cast<int>(p);
}

std::vector<DerivOrder> read_orders(Config& cfg, const std::string& key, int dim)
{
    const std::string zero = format_multi_index(MultiIndex{}, dim);
    const std::string text = cfg.get_string(key, zero + "/" + zero);
    std::vector<DerivOrder> out;
    for (const auto& item : split(text, ',')) {
        const auto parts = split(item, '/');
        if (parts.size() != 2) {
            throw ValidationError(key + ": expected alpha/beta pairs such as 1:0/0:1");
        }
        DerivOrder d{parse_multi_index(parts[0], dim), parse_multi_index(parts[1], dim)};
        check_order(d, dim);
        out.push_back(d);
    }
    return out;
}

Writer prepare_kernel(Config& cfg)
{
    const Manifold model = read_model(cfg);
    const Point x0 = read_base_point(cfg, model);
    const double lambda = cfg.require_double("kernel.lambda");
    const double delta = cfg.get_double("kernel.delta", 1.0);
    const bool rescaled = cfg.get_bool("kernel.rescaled", true);
    const double radius = cfg.get_double("kernel.radius", rescaled ? 2.0 : 0.1);
    const int points = read_points(cfg, "kernel.points", 5);
    const std::string pairs_text = cfg.get_string("kernel.pairs", "all");
    const auto orders = read_orders(cfg, "kernel.orders", dimension(model));

    const SpectralWindow window(lambda, lambda + delta);
    check_budget(std::vector<double>{window.hi()});
    PairMode pairs = PairMode::all;
    if (pairs_text == "diagonal") {
        pairs = PairMode::diagonal;
    } else if (pairs_text == "second_at_origin") {
        pairs = PairMode::second_at_origin;
    } else if (pairs_text != "all") {
        throw ValidationError("kernel.pairs must be all, diagonal or second_at_origin");
    }
    const int n = dimension(model);
    const double reach = (rescaled ? radius / std::max(lambda, 1e-300) : radius) * std::sqrt(n);
    if (!(radius > 0.0) || !(reach < injectivity_radius(model))) {
        throw ValidationError("kernel.radius must be positive and below the injectivity radius");
    }
    if (rescaled && !(lambda > 0.0)) {
        throw ValidationError("kernel.lambda must be positive for rescaled kernels");
    }
    const auto offsets = offset_grid(n, radius, points);

    return [=](const fs::path& out) {
        const auto field = kernel_field(model, x0, lambda, delta, rescaled, offsets, pairs, orders);
        atomic_write(out / "kernel_field.csv", kernel_field_csv(field));
        return std::vector<std::string>{"kernel_field.csv"};
    };
}

Writer prepare_scaling(Config& cfg)
{
    const Manifold model = read_model(cfg);
    const Point x0 = read_base_point(cfg, model);
    const auto lambdas = cfg.require_doubles("scaling.lambdas");
    ConvergenceOptions opt;
    opt.delta = cfg.get_double("scaling.delta", 1.0);
    opt.max_alpha = static_cast<int>(cfg.get_int("scaling.j", 1));
    opt.max_beta = static_cast<int>(cfg.get_int("scaling.k", 1));
    opt.max_total = static_cast<int>(cfg.get_int("scaling.max_total", kMaxDerivOrder));
    opt.radius = cfg.get_double("scaling.radius", 2.0);
    opt.points_per_axis = read_points(cfg, "scaling.points", 9);

    check_increasing(lambdas, "scaling.lambdas");
    check_budget(lambdas, opt.delta);
    if (!(opt.delta > 0.0)) {
        throw ValidationError("scaling.delta must be positive");
    }
    if (opt.max_alpha < 0 || opt.max_beta < 0 || opt.max_alpha + opt.max_beta > kMaxDerivOrder) {
        throw ValidationError("scaling.j + scaling.k must lie in [0, " +
                              std::to_string(kMaxDerivOrder) + "]");
    }
    const double reach = opt.radius * std::sqrt(dimension(model)) / lambdas.front();
    if (!(opt.radius > 0.0) || !(lambdas.front() > 0.0) || !(reach < injectivity_radius(model))) {
        throw ValidationError("scaling.radius / lambda must stay below the injectivity radius");
    }

    return [=](const fs::path& out) {
        const auto report = convergence_report(model, x0, lambdas, opt);
        atomic_write(out / "scaling_report.csv", convergence_csv(report));
        return std::vector<std::string>{"scaling_report.csv"};
    };
}

Writer prepare_remainder(Config& cfg)
{
    const Manifold model = read_model(cfg);
    const Point x0 = read_base_point(cfg, model);
    const int n = dimension(model);

    std::vector<double> lambdas;
    if (cfg.has("remainder.cluster_ells")) {
        if (is_torus(model)) {
            throw ValidationError("remainder.cluster_ells applies to the sphere only");
        }
        const double offset = cfg.get_double("remainder.cluster_offset", 1e-9);
        for (double ell : cfg.require_doubles("remainder.cluster_ells")) {
            if (ell < 0 || ell != std::floor(ell) || ell > kMaxFrequency) {
                throw ValidationError("remainder.cluster_ells must be non-negative integers");
            }
            lambdas.push_back(sphere_frequency(static_cast<int>(ell)) + offset);
        }
        if (cfg.has("remainder.lambdas")) {
            throw ValidationError("give remainder.lambdas or remainder.cluster_ells, not both");
        }
    } else {
        (void)cfg.get_double("remainder.cluster_offset", 0.0);
        lambdas = cfg.require_doubles("remainder.lambdas");
    }
    check_increasing(lambdas, "remainder lambda grid");
    check_budget(lambdas);

    ProbeGrid grid;
    grid.radius = cfg.get_double("remainder.radius", 0.1);
    grid.points_per_axis = read_points(cfg, "remainder.points", 5);
    grid.diagonal_only = cfg.get_bool("remainder.diagonal_only", false);
    if (!(grid.radius > 0.0) || !(grid.radius < injectivity_radius(model))) {
        throw ValidationError("remainder.radius must lie in (0, injectivity radius)");
    }
    (void)probe_points(model, x0, grid);

    const bool single = cfg.has("remainder.alpha") || cfg.has("remainder.beta");
    const std::string zero = format_multi_index(MultiIndex{}, n);
    DerivOrder d{parse_multi_index(cfg.get_string("remainder.alpha", zero), n),
                 parse_multi_index(cfg.get_string("remainder.beta", zero), n)};
    const auto j = static_cast<int>(cfg.get_int("remainder.j", 0));
    const auto k = static_cast<int>(cfg.get_int("remainder.k", 0));
    if (single && (cfg.has("remainder.j") || cfg.has("remainder.k"))) {
        throw ValidationError("give remainder.alpha/beta or remainder.j/k, not both");
    }
    if (single) {
        check_order(d, n);
    } else if (j < 0 || k < 0 || j + k > kMaxDerivOrder) {
        throw OrderError("remainder.j + remainder.k must lie in [0, " + std::to_string(kMaxDerivOrder) +
                         "]");
    }
    if (lambdas.size() < 4) {
        throw ValidationError("remainder lambda grid needs at least 4 values for the fit");
    }

    return [=](const fs::path& out) {
        const auto report = single ? remainder_sweep(model, x0, grid, lambdas, d)
                                   : remainder_sweep(model, x0, grid, lambdas, j, k);
        atomic_write(out / "remainder.csv", remainder_csv(report));
        atomic_write(out / "remainder_summary.jsonl", remainder_summary_json(report) + "\n");
        return std::vector<std::string>{"remainder.csv", "remainder_summary.jsonl"};
    };
}

Writer prepare_randomwave(Config& cfg, std::uint64_t seed)
{
    const Manifold model = read_model(cfg);
    const Point x0 = read_base_point(cfg, model);
    const double lo = cfg.require_double("randomwave.lo");
    const double hi = cfg.require_double("randomwave.hi");
    const auto samples = cfg.get_int("randomwave.samples", 1000);
    const double radius = cfg.get_double("randomwave.radius", 0.5);
    const int points = read_points(cfg, "randomwave.points", 5);
    const bool raw = cfg.get_bool("randomwave.raw", false);

    const SpectralWindow window(lo, hi);
    check_budget(std::vector<double>{hi});
    if (samples < 2 || samples > 10'000'000) {
        throw ValidationError("randomwave.samples must lie in [2, 1e7]");
    }
    if (!(radius > 0.0) || !(radius * std::sqrt(dimension(model)) < injectivity_radius(model))) {
        throw ValidationError("randomwave.radius must lie in (0, injectivity radius / sqrt(n))");
    }
    if (mode_count(model, window) == 0) {
        throw DegenerateInputError("randomwave window contains no eigenfrequency");
    }
    std::vector<Point> grid{x0};
    for (const auto& u : offset_grid(dimension(model), radius, points)) {
        grid.push_back(exp_map(model, x0, u));
    }

    return [=](const fs::path& out) {
        const auto ens =
            sample_ensemble(model, window, static_cast<std::size_t>(samples), seed, grid);
        std::vector<std::string> files{"ensemble_summary.csv"};
        atomic_write(out / "ensemble_summary.csv", ensemble_summary_csv(ens));
        if (raw) {
            write_ensemble_raw(ens, out / "samples.bin", out / "samples.json");
            files.emplace_back("samples.bin");
            files.emplace_back("samples.json");
        }
        return files;
    };
}

Writer prepare_loopset(Config& cfg, std::uint64_t seed)
{
    const std::string name = cfg.require_string("loopset.surface");
    SurfaceSpec surface;
    Vec3 x0{};
    if (name == "flat_torus") {
        surface = FlatTorusSurface{};
    } else if (name == "round_sphere") {
        surface = RoundSphereSurface{};
        x0 = {0.0, 0.0, 1.0};
    } else if (name == "ellipsoid") {
        const double c = cfg.require_double("loopset.c");
        surface = EllipsoidSurface{c};
        x0 = {0.0, 0.0, c};
    } else {
        throw ValidationError("loopset.surface must be flat_torus, round_sphere or ellipsoid");
    }
    validate_surface(surface);
    if (cfg.has("loopset.x0")) {
        const auto xs = cfg.require_doubles("loopset.x0");
        if (xs.size() != 3) {
            throw ValidationError("loopset.x0 needs 3 components");
        }
        x0 = {xs[0], xs[1], xs[2]};
    } else {
        (void)cfg.get_string("loopset.x0", "");
    }
    const auto directions = cfg.get_int("loopset.directions", 1000);
    const double t_max = cfg.require_double("loopset.t_max");
    const double tol = cfg.require_double("loopset.tol");
    LoopsetOptions opt;
    opt.step = cfg.get_double("loopset.step", 1e-3);
    opt.t_min = cfg.get_double("loopset.t_min", 0.1);
    opt.seed = seed;
    const auto sweep = cfg.get_doubles("loopset.tol_sweep", {});

    if (directions < 100 || directions > 10'000'000) {
        throw ValidationError("loopset.directions must lie in [100, 1e7]");
    }
    if (!(tol >= 0.0)) {
        throw ValidationError("loopset.tol must be >= 0");
    }
    for (double t : sweep) {
        if (!(t >= 0.0)) {
            throw ValidationError("loopset.tol_sweep entries must be >= 0");
        }
    }
    if (!(t_max > opt.t_min) || !(opt.t_min > 0.0) || !std::isfinite(t_max)) {
        throw ValidationError("loopset: need 0 < t_min < t_max");
    }
    if (!(opt.step > 0.0 && opt.step <= 1e-3)) {
        throw ValidationError("loopset.step must lie in (0, 1e-3]");
    }
    if (t_max / opt.step > 1e8) {
        throw BudgetError("loopset: t_max / step exceeds 1e8 steps per direction");
    }
    (void)surface_tangent_frame(surface, x0);

    return [=](const fs::path& out) {
        const auto est =
            loopset_fraction(surface, x0, static_cast<std::size_t>(directions), t_max, tol, opt);
        atomic_write(out / "loopset.csv", loopset_csv(est));
        std::string summary = "{\"surface\":" + json_string(est.surface);
        summary += ",\"directions\":" + std::to_string(est.directions);
        summary += ",\"t_max\":" + format_number(est.t_max);
        summary += ",\"tol\":" + format_number(est.tol);
        summary += ",\"fraction\":" + format_number(est.fraction);
        summary += ",\"max_energy_drift\":" + format_number(est.max_energy_drift) + "}\n";
        atomic_write(out / "loopset_summary.jsonl", summary);
        std::vector<std::string> files{"loopset.csv", "loopset_summary.jsonl"};
        if (!sweep.empty()) {
            std::string csv = "tol,fraction\n";
            for (double t : sweep) {
                csv += format_number(t) + "," + format_number(flagged_fraction(est, t)) + "\n";
            }
            atomic_write(out / "loopset_sweep.csv", csv);
            files.emplace_back("loopset_sweep.csv");
        }
        return files;
    };
}

} // namespace

RunResult run_experiment(const std::string& kind, Config cfg, const fs::path& out,
                         std::optional<std::uint64_t> seed_override, unsigned threads)
{
    const auto start = std::chrono::steady_clock::now();
    if (seed_override) {
        cfg.set("experiment.seed", std::to_string(*seed_override));
    }
    const std::string declared = cfg.get_string("experiment.kind", kind);
    if (declared != kind) {
        throw ValidationError("config is for experiment '" + declared + "', not '" + kind + "'");
    }
    const std::uint64_t seed = cfg.get_uint("experiment.seed", 1);

    Writer writer;
    if (kind == "kernel") {
        writer = prepare_kernel(cfg);
    } else if (kind == "scaling") {
        writer = prepare_scaling(cfg);
    } else if (kind == "remainder") {
        writer = prepare_remainder(cfg);
    } else if (kind == "randomwave") {
        writer = prepare_randomwave(cfg, seed);
    } else if (kind == "loopset") {
        writer = prepare_loopset(cfg, seed);
    } else {
        throw ValidationError("unknown experiment '" + kind + "'");
    }
    cfg.reject_unused();

    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec || !fs::is_directory(out)) {
        throw std::runtime_error("cannot create output directory " + out.string());
    }
    set_max_threads(threads);

    RunResult result;
    result.outputs = writer(out);
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    nlohmann::ordered_json manifest;
    manifest["experiment"] = kind;
    manifest["version"] = std::string(kVersion);
    manifest["config"] = cfg.entries();
    manifest["threads"] = threads;
    manifest["wall_time_seconds"] = result.wall_seconds;
    manifest["outputs"] = result.outputs;
    atomic_write(out / "manifest.json", manifest.dump(2) + "\n");
    return result;
}

} // namespace splab::runner
