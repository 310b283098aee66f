#pragma once

#include <cstdint>
#include <vector>

#include "heathaze/vec3.hpp"

namespace heathaze {

struct Particle {
    double mass = 1.0;        // kg
    Vec3 position;            // m
    Vec3 velocity;            // m/s
    double density = 0.0;     // kg/m^3, current after the last evaluation
    double temperature = 0.0; // unitless temperature scalar
};

using ParticleList = std::vector<Particle>;

inline bool all_fields_finite(const Particle& p) {
    return std::isfinite(p.mass) && is_finite(p.position) && is_finite(p.velocity) &&
           std::isfinite(p.density) && std::isfinite(p.temperature);
}

}  // namespace heathaze
