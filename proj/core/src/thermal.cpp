#include "heathaze/thermal.hpp"

#include "heathaze/parallel.hpp"

namespace heathaze {
namespace thermal {

double source_heat_flux(const Vec3& x, double temperature, const HeatSource& source,
                        double transfer_rate, double dt) {
    const double base = (source.temperature - temperature) * source.strength *
                        transfer_rate * dt;
    if (source.region.contains(x)) return base;
    const double d = source_distance(x, source);
    if (d >= source.influence_radius) return 0.0;
    return base * (1.0 - d / source.influence_radius);
}

double total_source_heat(const Vec3& x, double temperature,
                         std::span<const HeatSource> sources,
                         double transfer_rate, double dt) {
    double q = 0.0;
    for (const HeatSource& s : sources) q += source_heat_flux(x, temperature, s, transfer_rate, dt);
    return q;
}

double conduction_rate(std::size_t i, std::span<const Particle> particles,
                       const NeighborTable& neighbors, const SpikyKernel& kernel,
                       double conductivity) {
    const Particle& pi = particles[i];
    double sum = 0.0;
    for (std::uint32_t j : neighbors.of(i)) {
        if (j == i) continue;
        const Particle& pj = particles[j];
        const Vec3 r = pi.position - pj.position;
        const double r2 = norm_sq(r);
        if (r2 == 0.0) continue;  // coincident pair, Eq. singular
        const Vec3 grad = kernel.gradient(r);
        const double geom = dot(r, grad) / r2;  // negative inside the support
        sum += (2.0 * conductivity * pj.mass / pj.density) * geom *
               (pi.temperature - pj.temperature);
    }
    return sum / pi.density;
}

Vec3 temperature_gradient(std::size_t i, std::span<const Particle> particles,
                          const NeighborTable& neighbors, const SpikyKernel& kernel) {
    const Particle& pi = particles[i];
    Vec3 grad;
    for (std::uint32_t j : neighbors.of(i)) {
        if (j == i) continue;
        const Particle& pj = particles[j];
        const double dT = pj.temperature - pi.temperature;
        if (dT == 0.0) continue;
        grad += kernel.gradient(pi.position - pj.position) * (pj.mass / pj.density * dT);
    }
    return grad;
}

Vec3 buoyancy_delta_v(double temperature, double mass, double density,
                      const SimParams& params) {
    const double scale = params.buoyancy_constant *
                         (temperature - params.ambient_temperature) *
                         params.volume_of(mass) / density * params.dt;
    return -params.gravity * scale;
}

Vec3 convection_delta_v(const Vec3& grad_temperature, double beta) {
    const double mag = norm(grad_temperature);
    if (mag <= k_grad_epsilon) return {};
    return grad_temperature * (beta / mag);
}

void thermal_update(ParticleList& particles, std::span<const HeatSource> sources,
                    const NeighborTable& neighbors, const SimParams& params,
                    unsigned threads) {
    const std::size_t n = particles.size();
    const SpikyKernel kernel(params.smoothing_radius);
    std::span<const Particle> snapshot(particles.data(), n);

    std::vector<double> new_temperature(n);
    parallel_for(n, threads, [&](std::size_t i) {
        const Particle& p = particles[i];
        const double dT_conduction =
            conduction_rate(i, snapshot, neighbors, kernel, params.thermal_conductivity) *
            params.dt;
        const double q = total_source_heat(p.position, p.temperature, sources,
                                           params.source_transfer_rate, params.dt);
        new_temperature[i] = p.temperature + dT_conduction + q / p.mass;
    });
    parallel_for(n, threads, [&](std::size_t i) {
        particles[i].temperature = new_temperature[i];
    });

    // Buoyancy and convection see the post-conduction temperature field.
    parallel_for(n, threads, [&](std::size_t i) {
        Particle& p = particles[i];
        const Vec3 grad = temperature_gradient(i, snapshot, neighbors, kernel);
        p.velocity += buoyancy_delta_v(p.temperature, p.mass, p.density, params) +
                      convection_delta_v(grad, params.convection_multiplier);
    });
}

}  // namespace thermal
}  // namespace heathaze
