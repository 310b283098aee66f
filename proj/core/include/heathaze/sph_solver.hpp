#pragma once

#include <span>
#include <vector>

#include "heathaze/heat_source.hpp"
#include "heathaze/kernel.hpp"
#include "heathaze/neighbor_grid.hpp"
#include "heathaze/particle.hpp"
#include "heathaze/sim_params.hpp"

namespace heathaze {

// Standard SPH density summation, self-contribution included so the result is
// always positive.
double compute_density(std::size_t i, std::span<const Particle> particles,
                       const NeighborTable& neighbors, const SpikyKernel& kernel);

void compute_all_densities(ParticleList& particles, const NeighborTable& neighbors,
                           const SpikyKernel& kernel, unsigned threads = 1);

struct SolveStats {
    // Mean one-sided compression error mean(max(rho/rho0 - 1, 0)); tension is
    // excluded because the constraint leaves it alone.
    double mean_error_before = 0.0;
    double mean_error_after = 0.0;
    int iterations = 0;
};

// Flags divergence when the mean density error grows three iterations in a
// row; a non-finite error counts as growth.
class DivergenceDetector {
public:
    explicit DivergenceDetector(double initial_error) : previous_(initial_error) {}

    bool note(double error) {
        const bool grew = !(error <= previous_);
        streak_ = grew ? streak_ + 1 : 0;
        previous_ = error;
        return streak_ >= 3;
    }

private:
    double previous_;
    int streak_ = 0;
};

// Position-based density constraint solve. Each iteration evaluates densities,
// forms a per-particle scaling factor from kernel-gradient sums (zero under
// tension, so a free surface at or below rest density stays put), and applies
// mass-symmetric pairwise position corrections. Throws a solver-instability
// error if the mean density error grows three iterations in a row.
SolveStats density_constraint_solve(ParticleList& particles, const NeighborTable& neighbors,
                                    const SimParams& params, unsigned threads = 1);

struct StepStats {
    SolveStats solve;
    double max_speed = 0.0;
    bool cfl_warning = false;  // max |v| dt exceeded half the smoothing radius
};

// One simulation step: (1) thermal update then position prediction,
// (2) density constraint solve on predicted positions, (3) velocity from net
// displacement, then domain clamping with damped reflection.
StepStats step(ParticleList& particles, std::span<const HeatSource> sources,
               const SimParams& params, unsigned threads = 1);

// Regular lattice covering `extent` at the given spacing, with optional
// uniform jitter. Temperatures start at `temperature`.
ParticleList make_lattice(const Aabb& extent, double spacing, double jitter,
                          std::uint64_t seed, double mass, double temperature);

// Mass for which an unbounded lattice at this spacing sits exactly at the
// rest density under the spiky-kernel summation.
double lattice_rest_mass(double spacing, double smoothing_radius, double rest_density);

}  // namespace heathaze
