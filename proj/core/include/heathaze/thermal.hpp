#pragma once

#include <span>
#include <vector>

#include "heathaze/heat_source.hpp"
#include "heathaze/kernel.hpp"
#include "heathaze/neighbor_grid.hpp"
#include "heathaze/particle.hpp"
#include "heathaze/sim_params.hpp"

namespace heathaze {
namespace thermal {

// Guard below which a temperature gradient is treated as zero when normalizing.
inline constexpr double k_grad_epsilon = 1e-8;

// Heat transferred from one source to a probe at x with temperature T over dt.
// Full strength inside the box, linear falloff out to the influence radius,
// zero beyond; continuous everywhere.
double source_heat_flux(const Vec3& x, double temperature, const HeatSource& source,
                        double transfer_rate, double dt);

double total_source_heat(const Vec3& x, double temperature,
                         std::span<const HeatSource> sources,
                         double transfer_rate, double dt);

// Pairwise conduction rate dT_i/dt. Uniform conductivity, unit specific heat.
// Heat flows hot to cold: the pair term is (2 k m_j / rho_j) * (T_i - T_j) *
// (r_ij . grad_i W_ij) / |r_ij|^2, which is positive for a hotter neighbor
// since r . grad W < 0 for the spiky kernel. Coincident pairs are skipped.
double conduction_rate(std::size_t i, std::span<const Particle> particles,
                       const NeighborTable& neighbors, const SpikyKernel& kernel,
                       double conductivity);

// SPH difference-form gradient: sum_j (m_j/rho_j) (T_j - T_i) grad_i W_ij.
// Exactly zero for a uniform temperature field.
Vec3 temperature_gradient(std::size_t i, std::span<const Particle> particles,
                          const NeighborTable& neighbors, const SpikyKernel& kernel);

// Velocity increment from linearized buoyancy over one step. Hotter than
// ambient accelerates opposite to gravity.
Vec3 buoyancy_delta_v(double temperature, double mass, double density,
                      const SimParams& params);

// Velocity increment toward increasing temperature, magnitude exactly beta
// (or zero for a vanishing gradient).
Vec3 convection_delta_v(const Vec3& grad_temperature, double beta);

// Stage-1 external update: temperatures from source flux + conduction, then
// velocities from buoyancy + convection evaluated on the post-conduction
// temperature field. All reads come from the pre-update snapshot.
void thermal_update(ParticleList& particles, std::span<const HeatSource> sources,
                    const NeighborTable& neighbors, const SimParams& params,
                    unsigned threads = 1);

}  // namespace thermal
}  // namespace heathaze
