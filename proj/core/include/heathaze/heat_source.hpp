#pragma once

#include <algorithm>
#include <cmath>

#include "heathaze/aabb.hpp"
#include "heathaze/errors.hpp"
#include "heathaze/vec3.hpp"

namespace heathaze {

// Hexahedral heat source with a linear-falloff influence zone around it.
struct HeatSource {
    Aabb region;
    double temperature = 400.0;      // T_s
    double strength = 1.0;           // influence coefficient
    double influence_radius = 0.1;   // m, falloff distance beyond the box surface

    void validate() const {
        if (!region.valid()) throw_parameter("HeatSource: box must have min < max");
        if (influence_radius < 0.0) throw_parameter("HeatSource: influence radius must be >= 0");
    }
};

// Shortest Euclidean distance from x to the box surface; 0 inside or on it.
inline double source_distance(const Vec3& x, const HeatSource& source) {
    double d2 = 0.0;
    for (int a = 0; a < 3; ++a) {
        const double below = source.region.min[a] - x[a];
        const double above = x[a] - source.region.max[a];
        const double d = std::max({below, above, 0.0});
        d2 += d * d;
    }
    return std::sqrt(d2);
}

}  // namespace heathaze
