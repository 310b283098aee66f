#pragma once

#include <optional>
#include <vector>

#include "heathaze/aabb.hpp"
#include "heathaze/vec3.hpp"

namespace heathaze {

struct Color {
    double r = 0.0, g = 0.0, b = 0.0;
};

// Finite checkerboard rectangle: center, orthonormal in-plane axes, half
// extents, square edge length, two alternating colors.
struct CheckerBoard {
    Vec3 center;
    Vec3 u_axis{1.0, 0.0, 0.0};
    Vec3 v_axis{0.0, 1.0, 0.0};
    double half_extent_u = 0.5;
    double half_extent_v = 0.5;
    double square = 0.1;
    Color color_a{0.92, 0.92, 0.92};
    Color color_b{0.08, 0.08, 0.08};

    Vec3 normal() const { return cross(u_axis, v_axis); }
    void validate() const;

    // World position of board-local coordinates (u, v) measured from center.
    Vec3 point_at(double u, double v) const { return center + u_axis * u + v_axis * v; }

    Color color_at(double u, double v) const;
};

struct SceneHit {
    double t = 0.0;
    Color color;
    int board = -1;
};

struct Scene {
    std::vector<CheckerBoard> boards;
    Color background{0.30, 0.45, 0.70};
    double shell_margin = 0.1;  // m, conservative proximity band around boards

    void validate() const;

    // Nearest board hit along origin + t*dir for t in (t_min, t_max].
    std::optional<SceneHit> intersect(const Vec3& origin, const Vec3& dir,
                                      double t_min, double t_max) const;

    // Conservative proximity test: true whenever the position is within the
    // margin of a board (uses infinite-plane distance, so never a false
    // negative for the finite board).
    bool shell_test(const Vec3& position, double margin) const;
    bool shell_test(const Vec3& position) const { return shell_test(position, shell_margin); }
};

}  // namespace heathaze
