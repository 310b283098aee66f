#pragma once

#include <cstdint>

#include "heathaze/aabb.hpp"
#include "heathaze/errors.hpp"

namespace heathaze {

struct SimParams {
    double dt = 0.006;                  // s
    double smoothing_radius = 0.1;      // m
    double rest_density = 300.0;        // kg/m^3
    double thermal_conductivity = 100.0;
    double buoyancy_constant = 100.0;
    double convection_multiplier = 50.0;
    double ambient_temperature = 300.0;
    Vec3 gravity{0.0, -9.81, 0.0};      // m/s^2
    double source_transfer_rate = 1.0;  // heat-transfer rate between sources and particles
    double particle_volume = 0.0;       // m^3; <= 0 means mass / rest_density
    int solver_iterations = 3;
    double cfm_epsilon = 100.0;         // relaxation term in the constraint scaling factor
    Aabb domain{{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}};
    std::uint64_t seed = 1;
    bool deterministic = true;          // order neighbor sums by ascending index

    void validate() const {
        if (dt <= 0.0) throw_parameter("SimParams: dt must be > 0");
        if (smoothing_radius <= 0.0) throw_parameter("SimParams: smoothing_radius must be > 0");
        if (rest_density <= 0.0) throw_parameter("SimParams: rest_density must be > 0");
        if (solver_iterations < 1) throw_parameter("SimParams: solver_iterations must be >= 1");
        if (!domain.valid()) throw_parameter("SimParams: domain AABB must have min < max");
    }

    double volume_of(double mass) const {
        return particle_volume > 0.0 ? particle_volume : mass / rest_density;
    }
};

}  // namespace heathaze
