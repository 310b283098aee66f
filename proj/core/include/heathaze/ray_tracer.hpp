#pragma once

#include <atomic>
#include <cstdint>
#include <limits>

#include "heathaze/camera.hpp"
#include "heathaze/image.hpp"
#include "heathaze/scene.hpp"
#include "heathaze/voxel_grid.hpp"

namespace heathaze {

struct RayState {
    Vec3 position;
    Vec3 direction;  // unit
    double arc_length = 0.0;
    int step_count = 0;
};

struct SteppingPolicy {
    enum class Mode { adaptive, fixed };
    Mode mode = Mode::adaptive;
    double max_turn = 0.003;        // radians per step
    double ds_min = 1e-3;           // m
    double ds_max = 0.05;           // m
    double fixed_ds = 0.02;         // m, used in fixed mode
    double guard_epsilon = 1e-12;   // keeps the step finite where curvature -> 0
    int max_steps = 10000;

    void validate() const {
        if (max_turn <= 0.0) throw_parameter("SteppingPolicy: max turn angle must be > 0");
        if (!(ds_min > 0.0) || ds_min > ds_max)
            throw_parameter("SteppingPolicy: need 0 < ds_min <= ds_max");
        if (fixed_ds <= 0.0) throw_parameter("SteppingPolicy: fixed step must be > 0");
        if (max_steps < 1) throw_parameter("SteppingPolicy: max_steps must be >= 1");
    }

    double max_step_length() const {
        return mode == Mode::adaptive ? ds_max : fixed_ds;
    }

    double step_for(double curvature) const;
};

// Local curvature of the ray path: |(I - w w^T) grad_n| / n.
double curvature(const Vec3& direction, double refractive_index, const Vec3& grad_n);

// Step length bounding the turning angle per step: clamp(max_turn/(k+eps)).
double adaptive_step(double curvature, const SteppingPolicy& policy);

// One explicit update of the ray ODE. Direction change uses only the
// component of grad n perpendicular to the ray and is renormalized; in a
// homogeneous region the direction is left untouched bit-for-bit.
RayState ray_step(const RayState& state, const VoxelGrid& grid, double ds);

// Cross-ray audit counters; atomics so a render can share one instance
// across pixel workers. Ratio is realized turn angle over max_turn among
// adaptive steps longer than ds_min.
struct TraceStats {
    std::atomic<std::uint64_t> curved_steps{0};
    std::atomic<std::uint64_t> audited_steps{0};
    std::atomic<std::uint64_t> max_turn_ratio_bits{0};

    void note_turn_ratio(double ratio);
    double max_turn_ratio() const;
};

struct TraceResult {
    Color color;
    Vec3 exit_position;   // where marching left the volume (or stopped)
    Vec3 exit_direction;  // final unit direction
    int step_count = 0;
    double arc_length = 0.0;  // marched arc length inside the volume
    bool truncated = false;   // max_steps reached, finished with a straight ray
    bool hit_scene = false;
    double probe_distance = std::numeric_limits<double>::infinity();
};

// Full primary-ray pipeline: straight to the volume, curved marching inside,
// shell-gated exact hits, straight continuation after exit, background on
// miss. With `probe` set, also reports the closest approach of the whole path
// to that point.
TraceResult trace_ray(const Vec3& origin, const Vec3& direction, const VoxelGrid& grid,
                      const Scene& scene, const SteppingPolicy& policy,
                      const Vec3* probe = nullptr, TraceStats* stats = nullptr);

struct RenderResult {
    Image image;
    StepMap step_map;
    std::uint64_t total_steps = 0;
    bool any_truncated = false;
};

// One primary ray per pixel center (supersample > 1 averages an SxS grid of
// subpixel rays). Deterministic for fixed inputs regardless of thread count.
RenderResult render(const Camera& camera, const VoxelGrid& grid, const Scene& scene,
                    const SteppingPolicy& policy, int supersample = 1,
                    unsigned threads = 1, TraceStats* stats = nullptr);

}  // namespace heathaze
