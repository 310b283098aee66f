#include "heathaze/scene.hpp"

#include <cmath>

#include "heathaze/errors.hpp"

namespace heathaze {

void CheckerBoard::validate() const {
    const double tol = 1e-9;
    if (std::abs(norm(u_axis) - 1.0) > tol || std::abs(norm(v_axis) - 1.0) > tol ||
        std::abs(dot(u_axis, v_axis)) > tol)
        throw_parameter("CheckerBoard: in-plane axes must be orthonormal");
    if (half_extent_u <= 0.0 || half_extent_v <= 0.0)
        throw_parameter("CheckerBoard: half extents must be > 0");
    if (square <= 0.0) throw_parameter("CheckerBoard: square size must be > 0");
}

Color CheckerBoard::color_at(double u, double v) const {
    const long pu = static_cast<long>(std::floor(u / square));
    const long pv = static_cast<long>(std::floor(v / square));
    return ((pu + pv) & 1) == 0 ? color_a : color_b;
}

void Scene::validate() const {
    for (const CheckerBoard& b : boards) b.validate();
    if (shell_margin < 0.0) throw_parameter("Scene: shell margin must be >= 0");
}

std::optional<SceneHit> Scene::intersect(const Vec3& origin, const Vec3& dir,
                                         double t_min, double t_max) const {
    std::optional<SceneHit> best;
    for (std::size_t b = 0; b < boards.size(); ++b) {
        const CheckerBoard& board = boards[b];
        const Vec3 n = board.normal();
        const double denom = dot(dir, n);
        if (std::abs(denom) < 1e-15) continue;
        const double t = dot(board.center - origin, n) / denom;
        if (t <= t_min || t > t_max) continue;
        if (best && t >= best->t) continue;
        const Vec3 p = origin + dir * t - board.center;
        const double u = dot(p, board.u_axis);
        const double v = dot(p, board.v_axis);
        if (std::abs(u) > board.half_extent_u || std::abs(v) > board.half_extent_v) continue;
        best = SceneHit{t, board.color_at(u, v), static_cast<int>(b)};
    }
    return best;
}

bool Scene::shell_test(const Vec3& position, double margin) const {
    for (const CheckerBoard& board : boards) {
        const double d = dot(position - board.center, board.normal());
        if (std::abs(d) <= margin) return true;
    }
    return false;
}

}  // namespace heathaze
