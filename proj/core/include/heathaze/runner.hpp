#pragma once

#include <optional>
#include <string>
#include <vector>

#include "heathaze/metrics.hpp"
#include "heathaze/scenario.hpp"

namespace heathaze {

struct RunOptions {
    std::string out_dir = "out";
    unsigned threads = 1;
    std::optional<std::uint64_t> seed;   // overrides config seed
    std::optional<int> frames;           // overrides schedule.frames
    std::optional<bool> deterministic;   // overrides sim.deterministic
    bool quiet = false;
};

struct SimulateSummary {
    std::vector<double> tke;             // per recorded frame
    std::vector<double> mean_vorticity;  // per recorded frame
    int cfl_warnings = 0;
};

struct RenderSummary {
    int frames = 0;
    int cameras = 0;
    std::vector<std::uint64_t> steps_per_frame_camera;  // frame-major
};

struct DepthValidationSummary {
    std::string mode;
    double near_depth = 0.0, far_depth = 0.0;
    double near_variance = 0.0, far_variance = 0.0;
    double variance_ratio = 0.0;
    metrics::LinearFit fit;
    double marker_loss_fraction = 0.0;
    bool pass = false;
};

struct MultiviewSummary {
    double kld_x = 0.0, kld_y = 0.0, mse_x = 0.0, mse_y = 0.0;
    double control_kld_x = 0.0, control_kld_y = 0.0;
    double control_mse_x = 0.0, control_mse_y = 0.0;
    double marker_loss_fraction = 0.0;
    bool pass = false;
};

struct AblationVariant {
    std::string name;
    double tke = 0.0;
    double mean_vorticity = 0.0;
    bool stable = true;
};

struct AblationSummary {
    AblationVariant full, convection_only, buoyancy_only;
    bool tke_ordering = false;        // full > convection-only > buoyancy-only
    bool vorticity_ordering = false;  // full > each single-term variant
    bool all_stable = true;
};

struct BenchEntry {
    std::string label;
    std::string mode;
    double parameter = 0.0;  // max turn angle or fixed step
    std::uint64_t total_steps = 0;
    double rmse_vs_reference = 0.0;
    double wall_ms = 0.0;  // reported, never asserted, excluded from determinism checks
};

struct BenchSummary {
    std::vector<BenchEntry> entries;
    const BenchEntry* find(const std::string& label) const;
};

SimulateSummary run_simulate(const ScenarioConfig& config, const RunOptions& options);
RenderSummary run_render(const ScenarioConfig& config, const RunOptions& options);

enum class DepthMode { discrete, continuous };
DepthValidationSummary run_validate_depth(const ScenarioConfig& config, DepthMode mode,
                                          const RunOptions& options);

MultiviewSummary run_validate_multiview(const ScenarioConfig& config, const RunOptions& options);
AblationSummary run_ablation(const ScenarioConfig& config, const RunOptions& options);
BenchSummary run_bench_stepping(const ScenarioConfig& config, const RunOptions& options);

}  // namespace heathaze
