#include "heathaze/sph_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "heathaze/errors.hpp"
#include "heathaze/parallel.hpp"
#include "heathaze/rng.hpp"
#include "heathaze/thermal.hpp"

namespace heathaze {

double compute_density(std::size_t i, std::span<const Particle> particles,
                       const NeighborTable& neighbors, const SpikyKernel& kernel) {
    const Vec3 xi = particles[i].position;
    double rho = 0.0;
    for (std::uint32_t j : neighbors.of(i)) {
        rho += particles[j].mass * kernel.value(norm(xi - particles[j].position));
    }
    return rho;
}

void compute_all_densities(ParticleList& particles, const NeighborTable& neighbors,
                           const SpikyKernel& kernel, unsigned threads) {
    std::span<const Particle> view(particles.data(), particles.size());
    std::vector<double> rho(particles.size());
    parallel_for(particles.size(), threads, [&](std::size_t i) {
        rho[i] = compute_density(i, view, neighbors, kernel);
    });
    parallel_for(particles.size(), threads, [&](std::size_t i) {
        particles[i].density = rho[i];
    });
}

namespace {

// One-sided compression error: the constraint never corrects tension (free
// surfaces sit below rest density by construction), so the solve is judged on
// the part it controls.
double mean_density_error(const ParticleList& particles, double rest_density) {
    double sum = 0.0;
    for (const Particle& p : particles)
        sum += std::max(p.density / rest_density - 1.0, 0.0);
    return sum / static_cast<double>(particles.size());
}

void check_finite(const ParticleList& particles, const char* stage) {
    for (std::size_t i = 0; i < particles.size(); ++i) {
        if (!all_fields_finite(particles[i]))
            throw_solver("non-finite particle state at stage '" + std::string(stage) +
                         "' (particle " + std::to_string(i) + ")");
    }
}

}  // namespace

SolveStats density_constraint_solve(ParticleList& particles, const NeighborTable& neighbors,
                                    const SimParams& params, unsigned threads) {
    const std::size_t n = particles.size();
    SolveStats stats;
    if (n == 0) return stats;

    const SpikyKernel kernel(params.smoothing_radius);
    const double inv_rho0 = 1.0 / params.rest_density;
    std::span<const Particle> view(particles.data(), n);

    compute_all_densities(particles, neighbors, kernel, threads);
    stats.mean_error_before = mean_density_error(particles, params.rest_density);

    std::vector<double> lambda(n);
    std::vector<Vec3> correction(n);
    DivergenceDetector divergence(stats.mean_error_before);
    double last_error = stats.mean_error_before;

    for (int iter = 0; iter < params.solver_iterations; ++iter) {
        parallel_for(n, threads, [&](std::size_t i) {
            const double c = particles[i].density * inv_rho0 - 1.0;
            if (c <= 0.0) {  // no correction under tension
                lambda[i] = 0.0;
                return;
            }
            const Vec3 xi = particles[i].position;
            Vec3 grad_self;
            double sum_sq = 0.0;
            for (std::uint32_t j : neighbors.of(i)) {
                if (j == i) continue;
                const Vec3 g = kernel.gradient(xi - particles[j].position) *
                               (particles[j].mass * inv_rho0);
                grad_self += g;
                sum_sq += norm_sq(g);
            }
            lambda[i] = -c / (sum_sq + norm_sq(grad_self) + params.cfm_epsilon);
        });

        parallel_for(n, threads, [&](std::size_t i) {
            const Vec3 xi = particles[i].position;
            Vec3 dx;
            for (std::uint32_t j : neighbors.of(i)) {
                if (j == i) continue;
                const double scale = (lambda[i] + lambda[j]) * particles[j].mass * inv_rho0;
                if (scale == 0.0) continue;
                dx += kernel.gradient(xi - particles[j].position) * scale;
            }
            correction[i] = dx;
        });

        parallel_for(n, threads, [&](std::size_t i) {
            particles[i].position += correction[i];
        });

        compute_all_densities(particles, neighbors, kernel, threads);
        const double error = mean_density_error(particles, params.rest_density);
        if (divergence.note(error))
            throw_solver("density constraint solve diverged: mean density error grew for "
                         "3 consecutive iterations (iteration " + std::to_string(iter + 1) + ")");
        last_error = error;
        stats.iterations = iter + 1;
    }

    stats.mean_error_after = last_error;
    return stats;
}

StepStats step(ParticleList& particles, std::span<const HeatSource> sources,
               const SimParams& params, unsigned threads) {
    params.validate();
    StepStats stats;
    const std::size_t n = particles.size();
    if (n == 0) return stats;

    const double h = params.smoothing_radius;
    const SpikyKernel kernel(h);

    // Stage 1: thermal prediction.
    {
        const NeighborGrid grid(particles, h);
        const NeighborTable table =
            build_neighbor_table(grid, particles, h, params.deterministic, threads);
        compute_all_densities(particles, table, kernel, threads);
        thermal::thermal_update(particles, sources, table, params, threads);
    }
    check_finite(particles, "thermal-prediction");

    std::vector<Vec3> initial_position(n);
    parallel_for(n, threads, [&](std::size_t i) {
        initial_position[i] = particles[i].position;
        particles[i].position += particles[i].velocity * params.dt;
    });

    // Stage 2: constraint solve from predicted positions.
    {
        const NeighborGrid grid(particles, h);
        const NeighborTable table =
            build_neighbor_table(grid, particles, h, params.deterministic, threads);
        stats.solve = density_constraint_solve(particles, table, params, threads);
    }
    check_finite(particles, "constraint-solve");

    // Stage 3: velocity from net displacement, then boundary handling.
    const double inv_dt = 1.0 / params.dt;
    parallel_for(n, threads, [&](std::size_t i) {
        Particle& p = particles[i];
        p.velocity = (p.position - initial_position[i]) * inv_dt;
        for (int a = 0; a < 3; ++a) {
            if (p.position[a] < params.domain.min[a]) {
                p.position[a] = params.domain.min[a];
                if (p.velocity[a] < 0.0) p.velocity[a] *= -0.5;
            } else if (p.position[a] > params.domain.max[a]) {
                p.position[a] = params.domain.max[a];
                if (p.velocity[a] > 0.0) p.velocity[a] *= -0.5;
            }
        }
    });
    check_finite(particles, "state-update");

    double max_speed_sq = 0.0;
    for (const Particle& p : particles) max_speed_sq = std::max(max_speed_sq, norm_sq(p.velocity));
    stats.max_speed = std::sqrt(max_speed_sq);
    stats.cfl_warning = stats.max_speed * params.dt > 0.5 * h;
    return stats;
}

ParticleList make_lattice(const Aabb& extent, double spacing, double jitter,
                          std::uint64_t seed, double mass, double temperature) {
    if (spacing <= 0.0) throw_parameter("make_lattice: spacing must be > 0");
    ParticleList particles;
    Rng rng(seed);
    const Vec3 size = extent.extent();
    const int nx = static_cast<int>(std::floor(size.x / spacing)) + 1;
    const int ny = static_cast<int>(std::floor(size.y / spacing)) + 1;
    const int nz = static_cast<int>(std::floor(size.z / spacing)) + 1;
    particles.reserve(static_cast<std::size_t>(nx) * ny * nz);
    for (int iz = 0; iz < nz; ++iz)
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < nx; ++ix) {
                Particle p;
                p.mass = mass;
                p.temperature = temperature;
                p.position = extent.min + Vec3{ix * spacing, iy * spacing, iz * spacing};
                if (jitter > 0.0) {
                    p.position += Vec3{rng.uniform(-jitter, jitter),
                                       rng.uniform(-jitter, jitter),
                                       rng.uniform(-jitter, jitter)};
                    p.position = extent.clamp(p.position);
                }
                particles.push_back(p);
            }
    return particles;
}

double lattice_rest_mass(double spacing, double smoothing_radius, double rest_density) {
    const SpikyKernel kernel(smoothing_radius);
    const int reach = static_cast<int>(std::ceil(smoothing_radius / spacing));
    double kernel_sum = 0.0;
    for (int iz = -reach; iz <= reach; ++iz)
        for (int iy = -reach; iy <= reach; ++iy)
            for (int ix = -reach; ix <= reach; ++ix) {
                const double r = spacing * std::sqrt(double(ix * ix + iy * iy + iz * iz));
                kernel_sum += kernel.value(r);
            }
    return rest_density / kernel_sum;
}

}  // namespace heathaze
