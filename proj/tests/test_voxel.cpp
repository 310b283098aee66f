#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "heathaze/errors.hpp"
#include "heathaze/kernel.hpp"
#include "heathaze/rng.hpp"
#include "heathaze/voxel_grid.hpp"

using namespace heathaze;

namespace {

VoxelGridSpec small_spec(int n = 8) {
    VoxelGridSpec spec;
    spec.nx = spec.ny = spec.nz = n;
    spec.bounds = {{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}};
    spec.gladstone_dale = 1e-5;
    return spec;
}

ParticleList random_cloud(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    ParticleList particles(n);
    for (Particle& p : particles) {
        p.mass = rng.uniform(0.01, 0.05);
        p.position = {rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)};
    }
    return particles;
}

// Density grid sampled from a linear ramp in y.
VoxelGrid linear_ramp_grid(double base, double slope, int n = 10) {
    VoxelGridSpec spec = small_spec(n);
    std::vector<double> rho(spec.voxel_count());
    const double vox = 1.0 / n;
    for (int iz = 0; iz < n; ++iz)
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix)
                rho[(static_cast<std::size_t>(iz) * n + iy) * n + ix] =
                    base + slope * ((iy + 0.5) * vox);
    return VoxelGrid(spec, std::move(rho));
}

}  // namespace

TEST_CASE("splatting no particles yields an all-zero vacuum grid") {
    const VoxelGrid grid = VoxelGrid::splat({}, small_spec(), 0.1);
    CHECK(grid.is_vacuum());
    for (double d : grid.densities()) CHECK(d == 0.0);
    CHECK(grid.refractive_index({0.5, 0.5, 0.5}) == 1.0);
}

TEST_CASE("a particle at a voxel center splats the kernel peak there") {
    const double h = 0.1;
    VoxelGridSpec spec = small_spec(8);
    ParticleList particles(1);
    particles[0].mass = 1.0;
    // center of voxel (3,3,3) on an 8^3 grid over the unit box
    particles[0].position = {(3 + 0.5) / 8.0, (3 + 0.5) / 8.0, (3 + 0.5) / 8.0};
    const VoxelGrid grid = VoxelGrid::splat(particles, spec, h);
    const SpikyKernel kernel(h);
    CHECK(grid.voxel_density(3, 3, 3) == doctest::Approx(kernel.value(0.0)).epsilon(1e-14));
    const double off = norm(grid.voxel_center(4, 3, 3) - particles[0].position);
    CHECK(grid.voxel_density(4, 3, 3) == doctest::Approx(kernel.value(off)).epsilon(1e-14));
    CHECK(grid.voxel_density(7, 7, 7) == 0.0);  // farther than h
}

TEST_CASE("splatting matches the brute-force summation oracle") {
    const double h = 0.1;
    const ParticleList particles = random_cloud(500, 33);
    const VoxelGridSpec spec = small_spec(10);
    const VoxelGrid grid = VoxelGrid::splat(particles, spec, h);
    const SpikyKernel kernel(h);
    for (int iz = 0; iz < spec.nz; ++iz)
        for (int iy = 0; iy < spec.ny; ++iy)
            for (int ix = 0; ix < spec.nx; ++ix) {
                const Vec3 c = grid.voxel_center(ix, iy, iz);
                double reference = 0.0;
                for (const Particle& p : particles)
                    reference += p.mass * kernel.value(norm(c - p.position));
                const double got = grid.voxel_density(ix, iy, iz);
                if (reference == 0.0) CHECK(got == 0.0);
                else CHECK(got == doctest::Approx(reference).epsilon(1e-12));
            }
}

TEST_CASE("splatting is linear in particle mass") {
    const double h = 0.1;
    ParticleList particles = random_cloud(120, 5);
    const VoxelGrid grid1 = VoxelGrid::splat(particles, small_spec(6), h);
    for (Particle& p : particles) p.mass *= 2.0;
    const VoxelGrid grid2 = VoxelGrid::splat(particles, small_spec(6), h);
    for (std::size_t v = 0; v < grid1.densities().size(); ++v)
        CHECK(grid2.densities()[v] == doctest::Approx(2.0 * grid1.densities()[v]).epsilon(1e-13));
}

TEST_CASE("refractive index: vacuum limit, uniform medium, voxel-center identity") {
    {
        VoxelGridSpec spec = small_spec(5);
        const VoxelGrid vac(spec, std::vector<double>(spec.voxel_count(), 0.0));
        CHECK(vac.refractive_index({0.37, 0.21, 0.9}) == 1.0);
    }
    {
        VoxelGridSpec spec = small_spec(5);
        spec.gladstone_dale = 1e-6;
        const VoxelGrid uni(spec, std::vector<double>(spec.voxel_count(), 300.0));
        Rng rng(8);
        for (int i = 0; i < 50; ++i) {
            const Vec3 x{rng.uniform01(), rng.uniform01(), rng.uniform01()};
            CHECK(uni.refractive_index(x) == doctest::Approx(1.0 + 3e-4).epsilon(1e-14));
        }
        CHECK(uni.refractive_index({0.5, 0.5, 0.5}) >= 1.0);
    }
    {
        const VoxelGrid ramp = linear_ramp_grid(10.0, 50.0);
        const Vec3 c = ramp.voxel_center(4, 2, 7);
        CHECK(ramp.refractive_index(c) ==
              doctest::Approx(1.0 + ramp.spec().gladstone_dale * ramp.voxel_density(4, 2, 7))
                  .epsilon(1e-14));
    }
}

TEST_CASE("gradient of a uniform grid is exactly zero") {
    VoxelGridSpec spec = small_spec(6);
    const VoxelGrid uni(spec, std::vector<double>(spec.voxel_count(), 123.0));
    Rng rng(4);
    for (int i = 0; i < 100; ++i) {
        const Vec3 x{rng.uniform01(), rng.uniform01(), rng.uniform01()};
        CHECK(uni.refractive_gradient(x) == Vec3{});
    }
}

TEST_CASE("central differences recover a linear ramp exactly at interior centers") {
    const double slope = 50.0;
    const VoxelGrid ramp = linear_ramp_grid(10.0, slope);
    for (int iy = 1; iy < 9; ++iy) {
        const Vec3 g = ramp.density_gradient(ramp.voxel_center(4, iy, 4));
        CHECK(g.x == doctest::Approx(0.0).scale(slope).epsilon(1e-12));
        CHECK(g.y == doctest::Approx(slope).epsilon(1e-12));
        CHECK(g.z == doctest::Approx(0.0).scale(slope).epsilon(1e-12));
    }
    // one-sided faces are exact for a linear field too
    const Vec3 g0 = ramp.density_gradient(ramp.voxel_center(4, 0, 4));
    CHECK(g0.y == doctest::Approx(slope).epsilon(1e-12));
}

TEST_CASE("refractive gradient is the Gladstone-Dale multiple of the density gradient") {
    const ParticleList particles = random_cloud(200, 12);
    VoxelGridSpec spec = small_spec(9);
    spec.gladstone_dale = 3.7e-5;
    const VoxelGrid grid = VoxelGrid::splat(particles, spec, 0.1);
    Rng rng(17);
    for (int i = 0; i < 200; ++i) {
        const Vec3 x{rng.uniform01(), rng.uniform01(), rng.uniform01()};
        const Vec3 dg = grid.density_gradient(x);
        const Vec3 rg = grid.refractive_gradient(x);
        CHECK(rg.x == dg.x * spec.gladstone_dale);
        CHECK(rg.y == dg.y * spec.gladstone_dale);
        CHECK(rg.z == dg.z * spec.gladstone_dale);
    }
}

TEST_CASE("interpolated gradient tracks the directional derivative of n") {
    // Smooth synthetic field; compare grad_n . dir against a finite difference
    // of the interpolated index along segments inside one cell.
    VoxelGridSpec spec = small_spec(16);
    std::vector<double> rho(spec.voxel_count());
    for (int iz = 0; iz < 16; ++iz)
        for (int iy = 0; iy < 16; ++iy)
            for (int ix = 0; ix < 16; ++ix) {
                const double x = (ix + 0.5) / 16.0, y = (iy + 0.5) / 16.0,
                             z = (iz + 0.5) / 16.0;
                rho[(static_cast<std::size_t>(iz) * 16 + iy) * 16 + ix] =
                    200.0 + 80.0 * std::sin(2.0 * x) * std::cos(1.5 * y) + 40.0 * z * z;
            }
    const VoxelGrid grid(spec, std::move(rho));
    Rng rng(23);
    int checked = 0;
    for (int i = 0; i < 300; ++i) {
        const Vec3 x{rng.uniform(0.2, 0.8), rng.uniform(0.2, 0.8), rng.uniform(0.2, 0.8)};
        Vec3 dir{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        if (norm(dir) < 1e-3) continue;
        dir = normalized(dir);
        const double eps = 1e-4;  // well inside one 1/16 cell
        const double dn_fd =
            (grid.refractive_index(x + dir * eps) - grid.refractive_index(x - dir * eps)) /
            (2.0 * eps);
        const double dn_interp = dot(grid.refractive_gradient(x), dir);
        if (std::abs(dn_fd) < 1e-7) continue;  // skip near-zero derivatives
        CHECK(dn_interp == doctest::Approx(dn_fd).epsilon(0.10));
        ++checked;
    }
    CHECK(checked > 100);
}

TEST_CASE("outside the bounds the medium is clear air") {
    const VoxelGrid ramp = linear_ramp_grid(10.0, 50.0);
    CHECK(ramp.refractive_index({-0.1, 0.5, 0.5}) == 1.0);
    CHECK(ramp.refractive_gradient({0.5, 1.7, 0.5}) == Vec3{});
}

TEST_CASE("grid dump round-trips through parse") {
    const ParticleList particles = random_cloud(60, 3);
    const VoxelGrid grid = VoxelGrid::splat(particles, small_spec(5), 0.1);
    std::stringstream ss;
    grid.dump(ss);
    const VoxelGrid back = VoxelGrid::parse(ss);
    CHECK(back.spec().nx == grid.spec().nx);
    CHECK(back.spec().gladstone_dale == grid.spec().gladstone_dale);
    CHECK(back.densities() == grid.densities());
}

TEST_CASE("negative or non-finite densities are rejected") {
    VoxelGridSpec spec = small_spec(2);
    std::vector<double> bad(spec.voxel_count(), 1.0);
    bad[3] = -0.5;
    CHECK_THROWS_AS(VoxelGrid(spec, bad), Error);
    bad[3] = std::nan("");
    CHECK_THROWS_AS(VoxelGrid(spec, bad), Error);
}
