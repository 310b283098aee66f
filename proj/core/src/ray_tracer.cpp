#include "heathaze/ray_tracer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "heathaze/parallel.hpp"

namespace heathaze {

double SteppingPolicy::step_for(double curvature) const {
    if (mode == Mode::fixed) return fixed_ds;
    return adaptive_step(curvature, *this);
}

double curvature(const Vec3& direction, double refractive_index, const Vec3& grad_n) {
    return norm(reject(grad_n, direction)) / refractive_index;
}

double adaptive_step(double curvature, const SteppingPolicy& policy) {
    return std::clamp(policy.max_turn / (curvature + policy.guard_epsilon),
                      policy.ds_min, policy.ds_max);
}

RayState ray_step(const RayState& state, const VoxelGrid& grid, double ds) {
    RayState next = state;
    const Vec3 g = grid.refractive_gradient(state.position);
    if (!(g == Vec3{})) {
        const double n = grid.refractive_index(state.position);
        next.direction = normalized(state.direction + reject(g, state.direction) * (ds / n));
    }
    next.position = state.position + next.direction * ds;
    next.arc_length = state.arc_length + ds;
    next.step_count = state.step_count + 1;
    return next;
}

void TraceStats::note_turn_ratio(double ratio) {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(ratio);
    std::uint64_t cur = max_turn_ratio_bits.load(std::memory_order_relaxed);
    while (bits > cur &&
           !max_turn_ratio_bits.compare_exchange_weak(cur, bits, std::memory_order_relaxed)) {
    }
}

double TraceStats::max_turn_ratio() const {
    return std::bit_cast<double>(max_turn_ratio_bits.load(std::memory_order_relaxed));
}

namespace {

constexpr double k_t_eps = 1e-9;

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& unit_dir,
                              double length) {
    const double t = std::clamp(dot(p - a, unit_dir), 0.0, length);
    return norm(p - a - unit_dir * t);
}

double point_ray_distance(const Vec3& p, const Vec3& a, const Vec3& unit_dir) {
    const double t = std::max(dot(p - a, unit_dir), 0.0);
    return norm(p - a - unit_dir * t);
}

}  // namespace

TraceResult trace_ray(const Vec3& origin, const Vec3& direction, const VoxelGrid& grid,
                      const Scene& scene, const SteppingPolicy& policy,
                      const Vec3* probe, TraceStats* stats) {
    if (std::abs(norm(direction) - 1.0) > 1e-9)
        throw_parameter("trace_ray: direction must be a unit vector");
    policy.validate();

    TraceResult out;
    out.exit_position = origin;
    out.exit_direction = direction;

    const Aabb& box = grid.bounds();
    const double margin = std::max(scene.shell_margin, policy.max_step_length());
    const double inf = std::numeric_limits<double>::infinity();

    Vec3 cur = origin;
    Vec3 dir = direction;
    bool bent = false;

    auto note_probe_segment = [&](const Vec3& a, const Vec3& d, double len) {
        if (probe) out.probe_distance =
            std::min(out.probe_distance, point_segment_distance(*probe, a, d, len));
    };
    auto note_probe_ray = [&](const Vec3& a, const Vec3& d) {
        if (probe) out.probe_distance =
            std::min(out.probe_distance, point_ray_distance(*probe, a, d));
    };

    auto finish_straight = [&](const Vec3& from, const Vec3& d) {
        // An unbent path is the original line; intersecting from the origin
        // keeps a vacuum render bit-identical to a plain straight tracer.
        const Vec3 o = bent ? from : origin;
        if (const auto hit = scene.intersect(o, d, k_t_eps, inf)) {
            note_probe_segment(o, d, hit->t);
            out.color = hit->color;
            out.hit_scene = true;
        } else {
            note_probe_ray(o, d);
            out.color = scene.background;
        }
    };

    // Each pass handles one straight leg and one curved leg; a convex volume
    // gives a single pass, the cap only guards degenerate grazing paths.
    for (int leg = 0; leg < 64; ++leg) {
        const auto slab = intersect_ray_aabb(cur, dir, box);
        if (!slab || slab->second <= k_t_eps) {
            finish_straight(cur, dir);
            return out;
        }
        const double t_enter = std::max(slab->first, 0.0);
        if (t_enter > k_t_eps) {
            if (const auto hit = scene.intersect(cur, dir, k_t_eps, t_enter)) {
                note_probe_segment(cur, dir, hit->t);
                out.color = hit->color;
                out.hit_scene = true;
                return out;
            }
            note_probe_segment(cur, dir, t_enter);
            cur += dir * t_enter;
        }

        // Curved marching inside the volume.
        bool exited = false;
        while (true) {
            if (out.step_count >= policy.max_steps) {
                out.truncated = true;
                out.exit_position = cur;
                out.exit_direction = dir;
                finish_straight(cur, dir);
                return out;
            }
            const double n = grid.refractive_index(cur);
            const Vec3 grad = grid.refractive_gradient(cur);
            const double ds = policy.step_for(curvature(dir, n, grad));

            RayState st{cur, dir, 0.0, 0};
            RayState moved = ray_step(st, grid, ds);
            if (!(grad == Vec3{})) bent = true;
            ++out.step_count;
            if (stats) {
                stats->curved_steps.fetch_add(1, std::memory_order_relaxed);
                if (policy.mode == SteppingPolicy::Mode::adaptive && ds > policy.ds_min) {
                    stats->audited_steps.fetch_add(1, std::memory_order_relaxed);
                    const double cosang = std::clamp(dot(dir, moved.direction), -1.0, 1.0);
                    stats->note_turn_ratio(std::acos(cosang) / policy.max_turn);
                }
            }

            double ds_eff = ds;
            if (!box.contains(moved.position)) {
                // Clip the final step to the boundary so the exit position is
                // on the box face regardless of step size.
                const auto exit_slab = intersect_ray_aabb(cur, moved.direction, box);
                const double t_boundary =
                    exit_slab ? std::clamp(exit_slab->second, 0.0, ds) : 0.0;
                ds_eff = t_boundary;
                moved.position = cur + moved.direction * ds_eff;
                exited = true;
            }

            if (scene.shell_test(cur, margin) && ds_eff > 0.0) {
                if (const auto hit = scene.intersect(cur, moved.direction, 0.0, ds_eff)) {
                    note_probe_segment(cur, moved.direction, hit->t);
                    out.color = hit->color;
                    out.hit_scene = true;
                    out.exit_position = cur + moved.direction * hit->t;
                    out.exit_direction = moved.direction;
                    out.arc_length += hit->t;
                    return out;
                }
            }
            note_probe_segment(cur, moved.direction, ds_eff);
            out.arc_length += ds_eff;
            cur = moved.position;
            dir = moved.direction;
            if (exited || ds_eff == 0.0) {
                out.exit_position = cur;
                out.exit_direction = dir;
                break;
            }
        }
    }
    finish_straight(cur, dir);
    return out;
}

RenderResult render(const Camera& camera, const VoxelGrid& grid, const Scene& scene,
                    const SteppingPolicy& policy, int supersample, unsigned threads,
                    TraceStats* stats) {
    camera.validate();
    policy.validate();
    scene.validate();
    if (supersample < 1) throw_parameter("render: supersample must be >= 1");

    RenderResult result;
    result.image = Image(camera.width, camera.height);
    result.step_map = StepMap(camera.width, camera.height);
    const std::size_t npix = static_cast<std::size_t>(camera.width) * camera.height;
    std::vector<std::uint8_t> truncated(npix, 0);

    parallel_for(npix, threads, [&](std::size_t idx) {
        const int x = static_cast<int>(idx % camera.width);
        const int y = static_cast<int>(idx / camera.width);
        double r = 0.0, g = 0.0, b = 0.0;
        std::uint32_t steps = 0;
        for (int sy = 0; sy < supersample; ++sy)
            for (int sx = 0; sx < supersample; ++sx) {
                const double u = x + (sx + 0.5) / supersample - 0.5;
                const double v = y + (sy + 0.5) / supersample - 0.5;
                const Vec3 d = camera.ray_direction(u, v);
                const TraceResult t =
                    trace_ray(camera.position, d, grid, scene, policy, nullptr, stats);
                r += t.color.r;
                g += t.color.g;
                b += t.color.b;
                steps += static_cast<std::uint32_t>(t.step_count);
                if (t.truncated) truncated[idx] = 1;
            }
        const double inv = 1.0 / (supersample * supersample);
        result.image.set(x, y, Color{r * inv, g * inv, b * inv});
        result.step_map.at(x, y) = steps;
    });

    result.total_steps = result.step_map.total();
    for (std::uint8_t f : truncated) result.any_truncated |= (f != 0);
    return result;
}

}  // namespace heathaze
