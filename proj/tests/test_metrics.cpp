#include <doctest.h>

#include <cmath>
#include <vector>

#include "heathaze/errors.hpp"
#include "heathaze/metrics.hpp"
#include "heathaze/rng.hpp"
#include "heathaze/sph_solver.hpp"

using namespace heathaze;

namespace {

NeighborTable table_for(const ParticleList& particles, double h) {
    const NeighborGrid grid(particles, h);
    return build_neighbor_table(grid, particles, h, true);
}

VoxelGrid vacuum_grid() {
    VoxelGridSpec spec;
    spec.nx = spec.ny = spec.nz = 4;
    spec.bounds = {{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}};
    return VoxelGrid(spec, std::vector<double>(spec.voxel_count(), 0.0));
}

// Density ramp along x: rays passing the volume bend toward +x.
VoxelGrid x_ramp_grid() {
    VoxelGridSpec spec;
    spec.nx = spec.ny = spec.nz = 10;
    spec.bounds = {{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}};
    spec.gladstone_dale = 1e-4;
    std::vector<double> rho(spec.voxel_count());
    for (int iz = 0; iz < 10; ++iz)
        for (int iy = 0; iy < 10; ++iy)
            for (int ix = 0; ix < 10; ++ix)
                rho[(static_cast<std::size_t>(iz) * 10 + iy) * 10 + ix] =
                    100.0 + 200.0 * ((ix + 0.5) / 10.0);
    return VoxelGrid(spec, std::move(rho));
}

Scene board_scene() {
    Scene scene;
    CheckerBoard board;
    board.center = {0.5, 0.5, 2.0};
    board.u_axis = {1.0, 0.0, 0.0};
    board.v_axis = {0.0, 1.0, 0.0};
    board.half_extent_u = 1.4;
    board.half_extent_v = 1.4;
    board.square = 0.2;
    scene.boards.push_back(board);
    return scene;
}

Camera front_camera(int size = 96) {
    return Camera::look_at({0.5, 0.5, -0.7}, {0.5, 0.5, 0.5}, {0.0, 1.0, 0.0},
                           45.0 * 3.141592653589793 / 180.0, size, size);
}

}  // namespace

TEST_CASE("tke: zero for rigid translation, exact for a two-particle split") {
    ParticleList particles(5);
    for (Particle& p : particles) {
        p.mass = 0.4;
        p.velocity = {1.0, -2.0, 0.5};
    }
    CHECK(metrics::tke(particles) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));

    ParticleList pair(2);
    pair[0].velocity = {1.0, 0.0, 0.0};
    pair[1].velocity = {-1.0, 0.0, 0.0};
    CHECK(metrics::tke(pair) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("tke is Galilean invariant") {
    Rng rng(6);
    ParticleList particles(300);
    for (Particle& p : particles) {
        p.mass = rng.uniform(0.01, 0.1);
        p.velocity = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
    }
    const double base = metrics::tke(particles);
    for (Particle& p : particles) p.velocity += Vec3{10.0, -3.0, 7.0};
    CHECK(metrics::tke(particles) == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("tke rejects an empty particle set") {
    CHECK_THROWS_AS(metrics::tke(ParticleList{}), Error);
}

TEST_CASE("vorticity of a uniform velocity field is exactly zero") {
    const double h = 0.1;
    ParticleList particles = make_lattice({{0.0, 0.0, 0.0}, {0.4, 0.4, 0.4}}, 0.05, 0.0, 1,
                                          0.03, 300.0);
    for (Particle& p : particles) p.velocity = {0.7, -0.1, 0.3};
    const NeighborTable table = table_for(particles, h);
    const SpikyKernel kernel(h);
    compute_all_densities(particles, table, kernel);
    for (std::size_t i = 0; i < particles.size(); ++i)
        CHECK(metrics::vorticity(i, particles, table, kernel) == Vec3{});
}

TEST_CASE("SPH curl of a rigid rotation approximates twice the angular velocity") {
    const double h = 0.1;
    const Vec3 omega{0.0, 0.0, 3.0};
    ParticleList particles = make_lattice({{0.0, 0.0, 0.0}, {0.8, 0.8, 0.8}}, 0.025, 0.0, 1,
                                          1.0, 300.0);
    for (Particle& p : particles)
        p.velocity = cross(omega, p.position - Vec3{0.4, 0.4, 0.4});
    const NeighborTable table = table_for(particles, h);
    const SpikyKernel kernel(h);
    compute_all_densities(particles, table, kernel);

    int checked = 0;
    for (std::size_t i = 0; i < particles.size(); i += 11) {
        const Vec3& x = particles[i].position;
        const bool interior = x.x > 0.2 && x.x < 0.6 && x.y > 0.2 && x.y < 0.6 &&
                              x.z > 0.2 && x.z < 0.6;
        if (!interior) continue;
        const Vec3 curl = metrics::vorticity(i, particles, table, kernel);
        CHECK(norm(curl - omega * 2.0) < 0.2 * norm(omega * 2.0));
        ++checked;
    }
    CHECK(checked > 30);
}

TEST_CASE("displacement variance: constant series, known series, degenerate input") {
    metrics::MarkerTrack track;
    track.u = {3.0, 3.0, 3.0, 3.0};
    track.v = {1.5, 1.5, 1.5, 1.5};
    const auto var_const = metrics::displacement_variance(track);
    CHECK(var_const.var_u == 0.0);
    CHECK(var_const.var_v == 0.0);

    track.u = {0.0, 2.0};
    track.v = {1.0, 1.0};
    const auto var = metrics::displacement_variance(track);
    CHECK(var.var_u == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(var.var_v == 0.0);

    track.u = {1.0};
    track.v = {1.0};
    CHECK_THROWS_AS(metrics::displacement_variance(track), Error);
}

TEST_CASE("depth linearity: exact linear input, constant input, degenerate input") {
    {
        std::vector<double> depths{0.5, 1.0, 1.5, 2.0, 2.5};
        std::vector<double> variances;
        const double c = 0.731;
        for (double L : depths) variances.push_back(c * L);
        const auto fit = metrics::depth_linearity(depths, variances);
        CHECK(fit.slope == doctest::Approx(c).epsilon(1e-9));
        CHECK(fit.intercept == doctest::Approx(0.0).scale(c).epsilon(1e-9));
        CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    }
    {
        std::vector<double> depths{0.5, 1.0, 1.5, 2.0};
        std::vector<double> variances{0.3, 0.3, 0.3, 0.3};
        const auto fit = metrics::depth_linearity(depths, variances);
        CHECK(fit.slope == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    }
    {
        std::vector<double> depths{1.0, 1.0, 2.0};
        std::vector<double> variances{0.1, 0.2, 0.3};
        CHECK_THROWS_AS(metrics::depth_linearity(depths, variances), Error);
    }
}

TEST_CASE("kld: identity, closed-form two-bin value, non-negativity") {
    metrics::DisplacementHistogram p, q;
    p.edges = q.edges = {0.0, 0.5, 1.0};
    p.prob = {0.75, 0.25};
    q.prob = {0.5, 0.5};
    CHECK(metrics::kld(p, p) == 0.0);
    const double expected = 0.75 * std::log(1.5) + 0.25 * std::log(0.5);
    CHECK(metrics::kld(p, q) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(metrics::kld(p, q) == doctest::Approx(0.1308).epsilon(1e-3));

    Rng rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> a(400), b(400);
        for (double& x : a) x = rng.uniform(-1.0, 1.0);
        for (double& x : b) x = rng.uniform(-1.0, 1.0) + 0.2;
        std::vector<double> pooled(a);
        pooled.insert(pooled.end(), b.begin(), b.end());
        const auto edges = metrics::histogram_edges(pooled);
        const auto ha = metrics::build_histogram(a, edges);
        const auto hb = metrics::build_histogram(b, edges);
        CHECK(metrics::kld(ha, hb) >= 0.0);
        CHECK(metrics::kld(ha, ha) == 0.0);
    }
}

TEST_CASE("kld rejects mismatched binning") {
    metrics::DisplacementHistogram p, q;
    p.edges = {0.0, 0.5, 1.0};
    q.edges = {0.0, 0.4, 1.0};
    p.prob = q.prob = {0.5, 0.5};
    CHECK_THROWS_AS(metrics::kld(p, q), Error);
}

TEST_CASE("histograms are normalized with a positive smoothing floor") {
    Rng rng(13);
    std::vector<double> samples(600);
    for (double& x : samples) x = rng.uniform(-0.3, 0.3);
    const auto edges = metrics::histogram_edges(samples);
    const auto h = metrics::build_histogram(samples, edges);
    double sum = 0.0;
    for (double p : h.prob) {
        CHECK(p >= metrics::k_histogram_floor * 0.999);
        sum += p;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(static_cast<int>(h.prob.size()) == metrics::k_histogram_bins);
}

TEST_CASE("mse: identical series, unit offset, length mismatch") {
    std::vector<double> a{0.0, 0.0};
    std::vector<double> b{1.0, 1.0};
    CHECK(metrics::mse_curves(a, a) == 0.0);
    CHECK(metrics::mse_curves(a, b) == doctest::Approx(1.0).epsilon(1e-15));
    std::vector<double> c{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(metrics::mse_curves(a, c), Error);
}

TEST_CASE("apparent position through vacuum is the pinhole projection") {
    const VoxelGrid vac = vacuum_grid();
    const Scene scene = board_scene();
    const Camera camera = front_camera();
    SteppingPolicy policy;
    const Vec3 marker = scene.boards[0].point_at(0.31, -0.22);
    const auto nominal = camera.project(marker);
    REQUIRE(nominal.has_value());
    const auto found =
        metrics::apparent_position(camera, vac, scene, marker, policy, 0.1);
    REQUIRE(found.has_value());
    CHECK(std::abs(found->u - nominal->first) < 0.01);
    CHECK(std::abs(found->v - nominal->second) < 0.01);
    CHECK(found->approach_distance < 1e-4);
}

TEST_CASE("a lateral index gradient displaces the apparent position accordingly") {
    const VoxelGrid ramp = x_ramp_grid();
    const Scene scene = board_scene();
    const Camera camera = front_camera();
    SteppingPolicy policy;
    const Vec3 marker = scene.boards[0].point_at(0.05, 0.0);
    const auto nominal = camera.project(marker);
    REQUIRE(nominal.has_value());
    const auto found =
        metrics::apparent_position(camera, ramp, scene, marker, policy, 0.1);
    REQUIRE(found.has_value());
    // rays bend toward +x (higher index), so the hitting ray must launch
    // aimed toward -x; with right = -x for this camera that is larger u
    CHECK(found->u > nominal->first + 0.05);
}

TEST_CASE("ring search matches an exhaustive pixel sweep") {
    const Scene scene = board_scene();
    const Camera camera = front_camera();
    SteppingPolicy policy;
    Rng rng(41);
    for (int trial = 0; trial < 6; ++trial) {
        // fresh random blob volume each trial
        VoxelGridSpec spec;
        spec.nx = spec.ny = spec.nz = 8;
        spec.bounds = {{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}};
        spec.gladstone_dale = 1e-4;
        std::vector<double> rho(spec.voxel_count());
        const Vec3 c{rng.uniform(0.3, 0.7), rng.uniform(0.3, 0.7), rng.uniform(0.3, 0.7)};
        for (int iz = 0; iz < 8; ++iz)
            for (int iy = 0; iy < 8; ++iy)
                for (int ix = 0; ix < 8; ++ix) {
                    const Vec3 p{(ix + 0.5) / 8.0, (iy + 0.5) / 8.0, (iz + 0.5) / 8.0};
                    rho[(static_cast<std::size_t>(iz) * 8 + iy) * 8 + ix] =
                        250.0 * std::exp(-10.0 * norm_sq(p - c));
                }
        const VoxelGrid grid(spec, std::move(rho));
        const Vec3 marker =
            scene.boards[0].point_at(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
        const auto nominal = camera.project(marker);
        REQUIRE(nominal.has_value());
        const int cu = static_cast<int>(std::lround(nominal->first));
        const int cv = static_cast<int>(std::lround(nominal->second));

        // exhaustive integer sweep over the ring search's full span
        double best_d = std::numeric_limits<double>::infinity();
        int best_u = cu, best_v = cv;
        for (int v = cv - 32; v <= cv + 32; ++v)
            for (int u = cu - 32; u <= cu + 32; ++u) {
                if (u < 0 || u >= camera.width || v < 0 || v >= camera.height) continue;
                const TraceResult t = trace_ray(camera.position, camera.ray_direction(u, v),
                                                grid, scene, policy, &marker);
                if (t.probe_distance < best_d) {
                    best_d = t.probe_distance;
                    best_u = u;
                    best_v = v;
                }
            }

        const auto found =
            metrics::apparent_position(camera, grid, scene, marker, policy, 0.1);
        REQUIRE(found.has_value());
        CHECK(found->pixel_u == best_u);
        CHECK(found->pixel_v == best_v);
    }
}

TEST_CASE("markers outside the image raise a parameter error") {
    const VoxelGrid vac = vacuum_grid();
    const Scene scene = board_scene();
    const Camera camera = front_camera();
    SteppingPolicy policy;
    const Vec3 behind = camera.position - Vec3{0.0, 0.0, 1.0};
    CHECK_THROWS_AS(
        metrics::apparent_position(camera, vac, scene, behind, policy, 0.1), Error);
}
