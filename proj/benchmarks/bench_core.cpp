#include "splab/kernels.hpp"
#include "splab/loopset.hpp"
#include "splab/randomwave.hpp"
#include "splab/special.hpp"

#include <benchmark/benchmark.h>

using namespace splab;

static void BM_TorusWindowKernel(benchmark::State& state)
{
    const double lambda = static_cast<double>(state.range(0));
    const WindowKernel k(TorusModel(2), SpectralWindow(lambda, lambda + 1));
    const Point x{{0.1, 0.2, 0}};
    const Point y{{0.3, -0.4, 0}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(k.value(x, y));
    }
    state.counters["modes"] = static_cast<double>(k.mode_count());
}
BENCHMARK(BM_TorusWindowKernel)->Arg(50)->Arg(400)->Arg(3200);

static void BM_TorusKernelDeriv(benchmark::State& state)
{
    const WindowKernel k(TorusModel(2), SpectralWindow(400, 401));
    DerivOrder d;
    d.alpha.e = {1, 0, 0};
    d.beta.e = {0, 1, 0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(k.torus_deriv_at(Vec3{0.01, 0.02, 0}, d));
    }
}
BENCHMARK(BM_TorusKernelDeriv);

static void BM_SphereKernel(benchmark::State& state)
{
    const double lambda = static_cast<double>(state.range(0));
    const WindowKernel k(SphereModel{}, SpectralWindow(0, lambda));
    for (auto _ : state) {
        benchmark::DoNotOptimize(k.sphere_at_cosine(0.3));
    }
}
BENCHMARK(BM_SphereKernel)->Arg(100)->Arg(1000);

static void BM_BesselJ(benchmark::State& state)
{
    const double x = static_cast<double>(state.range(0)) + 0.37;
    const auto order = BesselOrder::integer(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(bessel_j(order, x));
    }
}
BENCHMARK(BM_BesselJ)->Arg(1)->Arg(20)->Arg(1000);

static void BM_Legendre(benchmark::State& state)
{
    const int ell = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(legendre_p(ell, 0.42));
    }
}
BENCHMARK(BM_Legendre)->Arg(50)->Arg(1000);

static void BM_Geodesic(benchmark::State& state)
{
    const SurfaceSpec s = EllipsoidSurface{1.5};
    const Vec3 x0{1, 0, 0};
    const Vec3 xi = surface_direction(s, x0, 0.7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate_geodesic(s, x0, xi, 7.0).max_energy_drift);
    }
}
BENCHMARK(BM_Geodesic)->Unit(benchmark::kMillisecond);

static void BM_SampleEnsemble(benchmark::State& state)
{
    std::vector<Point> grid;
    for (int i = 0; i < 10; ++i) {
        grid.push_back(Point{{0.01 * i, 0.02 * i, 0}});
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            sample_ensemble(TorusModel(2), SpectralWindow(200, 201), 200, 7, grid).values.data());
    }
}
BENCHMARK(BM_SampleEnsemble)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
