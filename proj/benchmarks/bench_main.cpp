#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "heathaze/kernel.hpp"
#include "heathaze/neighbor_grid.hpp"
#include "heathaze/ray_tracer.hpp"
#include "heathaze/rng.hpp"
#include "heathaze/scenario.hpp"
#include "heathaze/sph_solver.hpp"
#include "heathaze/voxel_grid.hpp"

using namespace heathaze;

namespace {

ParticleList lattice_cloud(double spacing, double jitter = 0.004) {
    SimParams params;
    const double mass = lattice_rest_mass(spacing, params.smoothing_radius, params.rest_density);
    return make_lattice(params.domain, spacing, jitter, 7, mass, params.ambient_temperature);
}

VoxelGrid plume_like_grid(int n) {
    VoxelGridSpec spec;
    spec.nx = spec.ny = spec.nz = n;
    spec.bounds = {{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}};
    spec.gladstone_dale = 4e-5;
    std::vector<double> rho(spec.voxel_count());
    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                const Vec3 p{(ix + 0.5) / n, (iy + 0.5) / n, (iz + 0.5) / n};
                const double r2 = norm_sq(p - Vec3{0.5, 0.35, 0.5});
                rho[(static_cast<std::size_t>(iz) * n + iy) * n + ix] =
                    280.0 + 60.0 * std::exp(-7.0 * r2);
            }
    return VoxelGrid(spec, std::move(rho));
}

Scene bench_scene() {
    Scene scene;
    CheckerBoard board;
    board.center = {0.5, 0.5, 2.0};
    board.half_extent_u = 1.4;
    board.half_extent_v = 1.4;
    board.square = 0.2;
    scene.boards.push_back(board);
    return scene;
}

}  // namespace

static void BM_KernelValue(benchmark::State& state) {
    const SpikyKernel kernel(0.1);
    double r = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernel.value(r));
        r = r < 0.11 ? r + 1e-5 : 0.0;
    }
}
BENCHMARK(BM_KernelValue);

static void BM_NeighborBuild(benchmark::State& state) {
    const ParticleList particles = lattice_cloud(0.05);
    for (auto _ : state) {
        const NeighborGrid grid(particles, 0.1);
        benchmark::DoNotOptimize(build_neighbor_table(grid, particles, 0.1, true));
    }
    state.SetItemsProcessed(state.iterations() * particles.size());
}
BENCHMARK(BM_NeighborBuild)->Unit(benchmark::kMillisecond);

static void BM_DensityPass(benchmark::State& state) {
    ParticleList particles = lattice_cloud(0.05);
    const SpikyKernel kernel(0.1);
    const NeighborGrid grid(particles, 0.1);
    const NeighborTable table = build_neighbor_table(grid, particles, 0.1, true);
    for (auto _ : state) {
        compute_all_densities(particles, table, kernel);
        benchmark::DoNotOptimize(particles.data());
    }
    state.SetItemsProcessed(state.iterations() * particles.size());
}
BENCHMARK(BM_DensityPass)->Unit(benchmark::kMillisecond);

static void BM_SimulationStep(benchmark::State& state) {
    const ScenarioConfig cfg = preset("plume");
    ParticleList particles = cfg.build_particles();
    for (int i = 0; i < 10; ++i) step(particles, cfg.heat_sources, cfg.sim);
    for (auto _ : state) {
        step(particles, cfg.heat_sources, cfg.sim);
        benchmark::DoNotOptimize(particles.data());
    }
    state.SetItemsProcessed(state.iterations() * particles.size());
}
BENCHMARK(BM_SimulationStep)->Unit(benchmark::kMillisecond);

static void BM_SplatDensity(benchmark::State& state) {
    const ParticleList particles = lattice_cloud(0.05);
    VoxelGridSpec spec;
    spec.nx = spec.ny = spec.nz = static_cast<int>(state.range(0));
    spec.bounds = {{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(VoxelGrid::splat(particles, spec, 0.1));
    }
}
BENCHMARK(BM_SplatDensity)->Arg(10)->Arg(20)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_TraceRay_Adaptive(benchmark::State& state) {
    const VoxelGrid grid = plume_like_grid(16);
    const Scene scene = bench_scene();
    SteppingPolicy policy;
    const Vec3 origin{0.5, 0.5, -0.7};
    Rng rng(3);
    for (auto _ : state) {
        const Vec3 target{rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9), 2.0};
        benchmark::DoNotOptimize(
            trace_ray(origin, normalized(target - origin), grid, scene, policy));
    }
}
BENCHMARK(BM_TraceRay_Adaptive);

static void BM_TraceRay_Static(benchmark::State& state) {
    const VoxelGrid grid = plume_like_grid(16);
    const Scene scene = bench_scene();
    SteppingPolicy policy;
    policy.mode = SteppingPolicy::Mode::fixed;
    policy.fixed_ds = 0.02;
    const Vec3 origin{0.5, 0.5, -0.7};
    Rng rng(3);
    for (auto _ : state) {
        const Vec3 target{rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9), 2.0};
        benchmark::DoNotOptimize(
            trace_ray(origin, normalized(target - origin), grid, scene, policy));
    }
}
BENCHMARK(BM_TraceRay_Static);

static void BM_Render64(benchmark::State& state) {
    const VoxelGrid grid = plume_like_grid(16);
    const Scene scene = bench_scene();
    const Camera camera = Camera::look_at({0.5, 0.5, -0.7}, {0.5, 0.5, 0.5}, {0.0, 1.0, 0.0},
                                          0.7853981633974483, 64, 64);
    SteppingPolicy policy;
    for (auto _ : state) {
        benchmark::DoNotOptimize(render(camera, grid, scene, policy));
    }
}
BENCHMARK(BM_Render64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
