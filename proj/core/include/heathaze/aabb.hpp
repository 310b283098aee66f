#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <utility>

#include "heathaze/vec3.hpp"

namespace heathaze {

struct Aabb {
    Vec3 min;
    Vec3 max;

    constexpr bool valid() const {
        return min.x < max.x && min.y < max.y && min.z < max.z;
    }

    constexpr bool contains(const Vec3& p) const {
        return p.x >= min.x && p.x <= max.x &&
               p.y >= min.y && p.y <= max.y &&
               p.z >= min.z && p.z <= max.z;
    }

    constexpr Vec3 extent() const { return max - min; }

    Vec3 clamp(const Vec3& p) const {
        return {std::clamp(p.x, min.x, max.x),
                std::clamp(p.y, min.y, max.y),
                std::clamp(p.z, min.z, max.z)};
    }
};

// Slab intersection of the ray origin + t*dir with the box.
// Returns the parameter interval [t0, t1] of the overlap, or nullopt.
inline std::optional<std::pair<double, double>> intersect_ray_aabb(
    const Vec3& origin, const Vec3& dir, const Aabb& box) {
    double t0 = -std::numeric_limits<double>::infinity();
    double t1 = std::numeric_limits<double>::infinity();
    for (int a = 0; a < 3; ++a) {
        const double o = origin[a];
        const double d = dir[a];
        if (d == 0.0) {
            if (o < box.min[a] || o > box.max[a]) return std::nullopt;
            continue;
        }
        double ta = (box.min[a] - o) / d;
        double tb = (box.max[a] - o) / d;
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 > t1) return std::nullopt;
    }
    return std::make_pair(t0, t1);
}

}  // namespace heathaze
