#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "heathaze/camera.hpp"
#include "heathaze/heat_source.hpp"
#include "heathaze/ray_tracer.hpp"
#include "heathaze/scene.hpp"
#include "heathaze/sim_params.hpp"
#include "heathaze/voxel_grid.hpp"

namespace heathaze {

struct ParticleInit {
    Aabb lattice{{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}};
    double spacing = 0.05;             // m
    double jitter = 0.0;               // m, uniform per-axis
    double mass = 0.0;                 // kg; <= 0 selects the lattice rest mass
    double initial_temperature = -1.0; // < 0 selects the ambient temperature
};

struct CameraSpec {
    Vec3 position;
    Vec3 target{0.0, 0.0, 1.0};
    Vec3 up_hint{0.0, 1.0, 0.0};
    double vfov_deg = 45.0;
    int width = 256;
    int height = 256;

    Camera build() const;
};

struct MarkerSpec {
    int board = 0;
    double u = 0.0;  // board-local m from the center
    double v = 0.0;
};

struct FrameSchedule {
    int warmup_steps = 200;
    int frames = 100;
    int steps_per_frame = 1;
};

struct OutputOptions {
    bool dump_particles = false;
    bool dump_grid = false;
    bool dump_step_maps = false;
    int supersample = 1;
};

// One file fully describes a scenario; defaults follow the reference
// parameter set (dt 0.006 s, h 0.1 m, rest density 300, k = K = 100,
// beta = 50, max turn 0.003 rad, fixed step 0.02 m, grid 10^3).
struct ScenarioConfig {
    std::string name = "scenario";
    SimParams sim;
    ParticleInit particles;
    std::vector<HeatSource> heat_sources;
    VoxelGridSpec grid;
    bool grid_bounds_explicit = false;  // otherwise the grid covers sim.domain
    std::vector<CameraSpec> cameras;
    Scene scene;
    std::vector<MarkerSpec> markers;
    SteppingPolicy stepping;
    FrameSchedule schedule;
    OutputOptions output;
    double marker_tolerance = 0.0;  // m; <= 0 selects half the smallest square
    std::uint64_t control_seed_offset = 9973;  // reseed shift for the negative control

    static ScenarioConfig from_json_text(const std::string& text);
    std::string to_json_text() const;

    void validate() const;

    ParticleList build_particles() const;
    VoxelGridSpec effective_grid() const;
    double effective_marker_tolerance() const;
    Vec3 marker_world(const MarkerSpec& m) const;
};

std::vector<std::string> preset_names();
ScenarioConfig preset(const std::string& name);

}  // namespace heathaze
