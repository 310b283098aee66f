#include "heathaze/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include <json.hpp>

#include "heathaze/errors.hpp"
#include "heathaze/io.hpp"
#include "heathaze/sph_solver.hpp"

namespace heathaze {

namespace fs = std::filesystem;
using nlohmann::json;

const BenchEntry* BenchSummary::find(const std::string& label) const {
    for (const BenchEntry& e : entries)
        if (e.label == label) return &e;
    return nullptr;
}

namespace {

ScenarioConfig apply_overrides(ScenarioConfig cfg, const RunOptions& options) {
    if (options.seed) cfg.sim.seed = *options.seed;
    if (options.frames) cfg.schedule.frames = *options.frames;
    if (options.deterministic) cfg.sim.deterministic = *options.deterministic;
    cfg.validate();
    return cfg;
}

void ensure_out_dir(const RunOptions& options) {
    std::error_code ec;
    fs::create_directories(options.out_dir, ec);
    if (ec) throw_io("cannot create output directory " + options.out_dir + ": " + ec.message());
}

std::string out_path(const RunOptions& options, const std::string& file) {
    return (fs::path(options.out_dir) / file).string();
}

// Frame loop shared by every subcommand: owns the particle state and keeps
// densities/neighbors fresh for the metrics taken between steps.
class FrameLoop {
public:
    FrameLoop(const ScenarioConfig& cfg, const RunOptions& options)
        : cfg_(cfg), options_(options), kernel_(cfg.sim.smoothing_radius) {
        particles_ = cfg.build_particles();
    }

    const ParticleList& particles() const { return particles_; }
    int cfl_warnings() const { return cfl_warnings_; }

    void advance(int steps, const std::string& label) {
        for (int s = 0; s < steps; ++s) {
            try {
                const StepStats st = step(particles_, cfg_.heat_sources, cfg_.sim,
                                          options_.threads);
                if (st.cfl_warning) {
                    ++cfl_warnings_;
                    if (!options_.quiet && cfl_warnings_ == 1)
                        std::cerr << "warning: CFL guard tripped during " << label
                                  << " (max speed " << st.max_speed << " m/s)\n";
                }
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::solver_instability)
                    throw Error(e.kind(), label + ": " + e.what());
                throw;
            }
        }
    }

    NeighborTable fresh_neighbors() {
        const NeighborGrid grid(particles_, cfg_.sim.smoothing_radius);
        NeighborTable table = build_neighbor_table(grid, particles_, cfg_.sim.smoothing_radius,
                                                   cfg_.sim.deterministic, options_.threads);
        compute_all_densities(particles_, table, kernel_, options_.threads);
        return table;
    }

    VoxelGrid splat() const {
        return VoxelGrid::splat(particles_, cfg_.effective_grid(), cfg_.sim.smoothing_radius,
                                cfg_.sim.deterministic, options_.threads);
    }

    const SpikyKernel& kernel() const { return kernel_; }

private:
    ScenarioConfig cfg_;
    RunOptions options_;
    ParticleList particles_;
    SpikyKernel kernel_;
    int cfl_warnings_ = 0;
};

void write_json_summary(const RunOptions& options, const std::string& file, const json& j) {
    write_text_file(out_path(options, file), j.dump(2) + "\n");
}

// ----- marker tracking ---------------------------------------------------

struct TrackedSeries {
    // frame -> (u, v); missing frames were marker losses
    std::map<int, std::pair<double, double>> samples;
};

struct TrackingResult {
    // [camera][marker] series
    std::vector<std::vector<TrackedSeries>> series;
    long attempts = 0;
    long losses = 0;

    double loss_fraction() const {
        return attempts == 0 ? 0.0 : static_cast<double>(losses) / attempts;
    }
};

TrackingResult track_scenario(const ScenarioConfig& cfg, FrameLoop& loop,
                              const std::vector<Camera>& cameras, CsvWriter* csv) {
    TrackingResult out;
    out.series.assign(cameras.size(), std::vector<TrackedSeries>(cfg.markers.size()));
    const double tolerance = cfg.effective_marker_tolerance();

    loop.advance(cfg.schedule.warmup_steps, "warmup");
    for (int f = 0; f < cfg.schedule.frames; ++f) {
        loop.advance(cfg.schedule.steps_per_frame, "frame " + std::to_string(f));
        const VoxelGrid grid = loop.splat();
        for (std::size_t c = 0; c < cameras.size(); ++c) {
            for (std::size_t m = 0; m < cfg.markers.size(); ++m) {
                const Vec3 world = cfg.marker_world(cfg.markers[m]);
                ++out.attempts;
                const auto pos = metrics::apparent_position(cameras[c], grid, cfg.scene, world,
                                                            cfg.stepping, tolerance);
                if (!pos) {
                    ++out.losses;
                    continue;
                }
                out.series[c][m].samples[f] = {pos->u, pos->v};
                if (csv) {
                    const double depth = norm(world - cameras[c].position);
                    csv->row({std::to_string(f), std::to_string(c), std::to_string(m),
                              format_double(pos->u), format_double(pos->v),
                              format_double(depth)});
                }
            }
        }
    }
    return out;
}

std::vector<std::string> marker_csv_header() {
    return {"frame", "camera", "marker", "u_px", "v_px", "depth_m"};
}

metrics::MarkerTrack to_track(const TrackedSeries& s, int marker, int camera,
                              const Vec3& world, double depth) {
    metrics::MarkerTrack t;
    t.marker_id = marker;
    t.camera_id = camera;
    t.world_position = world;
    t.depth = depth;
    for (const auto& [frame, uv] : s.samples) {
        t.u.push_back(uv.first);
        t.v.push_back(uv.second);
    }
    return t;
}

// Per-axis fluctuation series (observation minus its own temporal mean) over
// the given (marker, frame) keys, ordered by marker then frame.
struct FluctuationSeries {
    std::vector<double> x;
    std::vector<double> y;
};

FluctuationSeries fluctuations(const std::vector<TrackedSeries>& series,
                               const std::vector<std::pair<int, int>>& keys) {
    std::map<int, std::pair<double, double>> mean;
    std::map<int, int> count;
    for (const auto& [m, f] : keys) {
        const auto& uv = series[m].samples.at(f);
        mean[m].first += uv.first;
        mean[m].second += uv.second;
        count[m] += 1;
    }
    for (auto& [m, acc] : mean) {
        acc.first /= count[m];
        acc.second /= count[m];
    }
    FluctuationSeries out;
    for (const auto& [m, f] : keys) {
        const auto& uv = series[m].samples.at(f);
        out.x.push_back(uv.first - mean[m].first);
        out.y.push_back(uv.second - mean[m].second);
    }
    return out;
}

// (marker, frame) keys present in every listed series set, ascending.
std::vector<std::pair<int, int>> shared_keys(
    const std::vector<const std::vector<TrackedSeries>*>& sets, std::size_t markers) {
    std::vector<std::pair<int, int>> keys;
    for (std::size_t m = 0; m < markers; ++m) {
        std::set<int> frames;
        bool first = true;
        for (const auto* set : sets) {
            std::set<int> own;
            for (const auto& [f, uv] : (*set)[m].samples) own.insert(f);
            if (first) {
                frames = std::move(own);
                first = false;
            } else {
                std::set<int> keep;
                std::set_intersection(frames.begin(), frames.end(), own.begin(), own.end(),
                                      std::inserter(keep, keep.begin()));
                frames = std::move(keep);
            }
        }
        for (int f : frames) keys.emplace_back(static_cast<int>(m), f);
    }
    return keys;
}

}  // namespace

SimulateSummary run_simulate(const ScenarioConfig& config, const RunOptions& options) {
    const ScenarioConfig cfg = apply_overrides(config, options);
    ensure_out_dir(options);
    FrameLoop loop(cfg, options);
    SimulateSummary summary;

    CsvWriter stats(out_path(options, "stats.csv"),
                    {"frame", "time_s", "tke", "mean_vorticity"});
    loop.advance(cfg.schedule.warmup_steps, "warmup");
    for (int f = 0; f < cfg.schedule.frames; ++f) {
        loop.advance(cfg.schedule.steps_per_frame, "frame " + std::to_string(f));
        const NeighborTable table = loop.fresh_neighbors();
        const double tke = metrics::tke(loop.particles());
        const double vort = metrics::mean_vorticity(loop.particles(), table, loop.kernel(),
                                                    options.threads);
        const double time_s =
            (cfg.schedule.warmup_steps + static_cast<double>(f + 1) * cfg.schedule.steps_per_frame) *
            cfg.sim.dt;
        stats.row({std::to_string(f), format_double(time_s), format_double(tke),
                   format_double(vort)});
        summary.tke.push_back(tke);
        summary.mean_vorticity.push_back(vort);
        if (cfg.output.dump_particles) {
            std::ofstream os(out_path(options, "particles_frame" + std::to_string(f) + ".txt"));
            if (!os) throw_io("cannot open particle dump for frame " + std::to_string(f));
            write_particle_dump(os, loop.particles(), f);
        }
    }
    stats.close();
    summary.cfl_warnings = loop.cfl_warnings();

    json j;
    j["scenario"] = cfg.name;
    j["frames"] = cfg.schedule.frames;
    j["tke"] = summary.tke;
    j["mean_vorticity"] = summary.mean_vorticity;
    j["cfl_warnings"] = summary.cfl_warnings;
    write_json_summary(options, "summary.json", j);
    return summary;
}

RenderSummary run_render(const ScenarioConfig& config, const RunOptions& options) {
    const ScenarioConfig cfg = apply_overrides(config, options);
    if (cfg.cameras.empty()) throw_config("run_render: scenario defines no cameras");
    ensure_out_dir(options);
    FrameLoop loop(cfg, options);
    RenderSummary summary;
    summary.cameras = static_cast<int>(cfg.cameras.size());

    std::vector<Camera> cameras;
    for (const CameraSpec& c : cfg.cameras) cameras.push_back(c.build());

    CsvWriter steps(out_path(options, "render_steps.csv"),
                    {"frame", "camera", "total_steps", "truncated_rays"});
    loop.advance(cfg.schedule.warmup_steps, "warmup");
    for (int f = 0; f < cfg.schedule.frames; ++f) {
        loop.advance(cfg.schedule.steps_per_frame, "frame " + std::to_string(f));
        const VoxelGrid grid = loop.splat();
        if (cfg.output.dump_grid) {
            std::ofstream os(out_path(options, "grid_frame" + std::to_string(f) + ".txt"));
            if (!os) throw_io("cannot open grid dump for frame " + std::to_string(f));
            grid.dump(os);
        }
        for (std::size_t c = 0; c < cameras.size(); ++c) {
            const RenderResult r = render(cameras[c], grid, cfg.scene, cfg.stepping,
                                          cfg.output.supersample, options.threads);
            const std::string frame_name =
                "cam" + std::to_string(c) + "_frame" + std::to_string(f);
            write_ppm(out_path(options, frame_name + ".ppm"), r.image);
            if (cfg.output.dump_step_maps)
                write_step_map(out_path(options, "steps_" + frame_name + ".pgm"), r.step_map);
            steps.row({std::to_string(f), std::to_string(c), std::to_string(r.total_steps),
                       r.any_truncated ? "1" : "0"});
            summary.steps_per_frame_camera.push_back(r.total_steps);
        }
    }
    steps.close();
    summary.frames = cfg.schedule.frames;

    json j;
    j["scenario"] = cfg.name;
    j["frames"] = summary.frames;
    j["cameras"] = summary.cameras;
    write_json_summary(options, "summary.json", j);
    return summary;
}

DepthValidationSummary run_validate_depth(const ScenarioConfig& config, DepthMode mode,
                                          const RunOptions& options) {
    const ScenarioConfig cfg = apply_overrides(config, options);
    if (cfg.cameras.empty()) throw_config("validate-depth: scenario defines no cameras");
    if (cfg.markers.empty()) throw_config("validate-depth: scenario defines no markers");
    ensure_out_dir(options);

    const std::vector<Camera> cameras{cfg.cameras[0].build()};
    FrameLoop loop(cfg, options);
    CsvWriter csv(out_path(options, "markers.csv"), marker_csv_header());
    const TrackingResult tracking = track_scenario(cfg, loop, cameras, &csv);
    csv.close();

    DepthValidationSummary summary;
    summary.mode = mode == DepthMode::discrete ? "discrete" : "continuous";
    summary.marker_loss_fraction = tracking.loss_fraction();

    std::vector<double> depths, variances;
    std::map<int, std::vector<double>> board_variance, board_depth;
    for (std::size_t m = 0; m < cfg.markers.size(); ++m) {
        const TrackedSeries& s = tracking.series[0][m];
        if (s.samples.size() < 2) continue;
        const Vec3 world = cfg.marker_world(cfg.markers[m]);
        const double depth = norm(world - cameras[0].position);
        const metrics::MarkerTrack track =
            to_track(s, static_cast<int>(m), 0, world, depth);
        const metrics::VariancePair var = metrics::displacement_variance(track);
        depths.push_back(depth);
        variances.push_back(var.total());
        board_variance[cfg.markers[m].board].push_back(var.total());
        board_depth[cfg.markers[m].board].push_back(depth);
    }

    json j;
    j["scenario"] = cfg.name;
    j["mode"] = summary.mode;
    j["marker_loss_fraction"] = summary.marker_loss_fraction;
    // pixel displacements divide by this to become angles of arrival
    j["focal_length_px"] = 0.5 * cameras[0].height / std::tan(0.5 * cameras[0].vfov);

    if (mode == DepthMode::discrete) {
        if (board_variance.size() != 2)
            throw_config("validate-depth discrete: markers must span exactly 2 boards");
        auto pooled = [](const std::vector<double>& v) {
            double acc = 0.0;
            for (double x : v) acc += x;
            return acc / static_cast<double>(v.size());
        };
        struct BoardStat { double depth; double variance; };
        std::vector<BoardStat> stats;
        for (const auto& [board, vars] : board_variance)
            stats.push_back({pooled(board_depth[board]), pooled(vars)});
        std::sort(stats.begin(), stats.end(),
                  [](const BoardStat& a, const BoardStat& b) { return a.depth < b.depth; });
        summary.near_depth = stats[0].depth;
        summary.far_depth = stats[1].depth;
        summary.near_variance = stats[0].variance;
        summary.far_variance = stats[1].variance;
        summary.variance_ratio =
            summary.near_variance > 0.0 ? summary.far_variance / summary.near_variance : 0.0;
        summary.pass = summary.far_variance > summary.near_variance;
        j["near_depth_m"] = summary.near_depth;
        j["far_depth_m"] = summary.far_depth;
        j["near_variance_px2"] = summary.near_variance;
        j["far_variance_px2"] = summary.far_variance;
        j["variance_ratio"] = summary.variance_ratio;
    } else {
        // Markers within half a centimeter of the same depth sample the same
        // path length; pool their variances into one point per depth.
        std::map<long, std::pair<double, int>> rows;
        std::map<long, double> row_depth;
        for (std::size_t k = 0; k < depths.size(); ++k) {
            const long key = std::lround(depths[k] / 0.005);
            rows[key].first += variances[k];
            rows[key].second += 1;
            row_depth[key] += depths[k];
        }
        std::vector<double> pooled_depths, pooled_variances;
        for (const auto& [key, acc] : rows) {
            pooled_variances.push_back(acc.first / acc.second);
            pooled_depths.push_back(row_depth[key] / acc.second);
        }
        const metrics::LinearFit fit = metrics::depth_linearity(pooled_depths, pooled_variances);
        summary.fit = fit;
        summary.pass = fit.slope > 0.0 && fit.r_squared >= 0.9;
        j["depth_rows"] = pooled_depths.size();
        j["slope_px2_per_m"] = fit.slope;
        j["intercept_px2"] = fit.intercept;
        j["r_squared"] = fit.r_squared;
    }
    j["pass"] = summary.pass;
    write_json_summary(options, "summary.json", j);

    if (summary.marker_loss_fraction > 0.1)
        throw_validation("validate-depth: marker loss fraction " +
                         format_double(summary.marker_loss_fraction) + " exceeds 10%");
    return summary;
}

MultiviewSummary run_validate_multiview(const ScenarioConfig& config,
                                        const RunOptions& options) {
    const ScenarioConfig cfg = apply_overrides(config, options);
    if (cfg.cameras.size() != 2)
        throw_config("validate-multiview: scenario must define exactly 2 cameras");
    if (cfg.markers.empty()) throw_config("validate-multiview: scenario defines no markers");
    ensure_out_dir(options);

    std::vector<Camera> cameras;
    for (const CameraSpec& c : cfg.cameras) cameras.push_back(c.build());

    FrameLoop loop(cfg, options);
    CsvWriter csv(out_path(options, "markers.csv"), marker_csv_header());
    const TrackingResult main_run = track_scenario(cfg, loop, cameras, &csv);
    csv.close();

    // Negative control: an independently reseeded run observed by camera 0.
    ScenarioConfig control_cfg = cfg;
    control_cfg.sim.seed = cfg.sim.seed + cfg.control_seed_offset;
    FrameLoop control_loop(control_cfg, options);
    const std::vector<Camera> control_cameras{cameras[0]};
    CsvWriter control_csv(out_path(options, "markers_control.csv"), marker_csv_header());
    const TrackingResult control_run =
        track_scenario(control_cfg, control_loop, control_cameras, &control_csv);
    control_csv.close();

    MultiviewSummary summary;
    summary.marker_loss_fraction = main_run.loss_fraction();

    const auto cross_keys = shared_keys({&main_run.series[0], &main_run.series[1]},
                                        cfg.markers.size());
    if (cross_keys.size() < 2)
        throw_validation("validate-multiview: too few shared observations across views");
    const FluctuationSeries cam0 = fluctuations(main_run.series[0], cross_keys);
    const FluctuationSeries cam1 = fluctuations(main_run.series[1], cross_keys);

    auto kld_of = [](const std::vector<double>& a, const std::vector<double>& b) {
        std::vector<double> pooled(a);
        pooled.insert(pooled.end(), b.begin(), b.end());
        const std::vector<double> edges = metrics::histogram_edges(pooled);
        return metrics::kld(metrics::build_histogram(a, edges),
                            metrics::build_histogram(b, edges));
    };
    summary.kld_x = kld_of(cam0.x, cam1.x);
    summary.kld_y = kld_of(cam0.y, cam1.y);
    summary.mse_x = metrics::mse_curves(cam0.x, cam1.x);
    summary.mse_y = metrics::mse_curves(cam0.y, cam1.y);

    const auto control_keys = shared_keys({&main_run.series[0], &control_run.series[0]},
                                          cfg.markers.size());
    if (control_keys.size() < 2)
        throw_validation("validate-multiview: too few shared observations with the control run");
    const FluctuationSeries base = fluctuations(main_run.series[0], control_keys);
    const FluctuationSeries control = fluctuations(control_run.series[0], control_keys);
    summary.control_kld_x = kld_of(base.x, control.x);
    summary.control_kld_y = kld_of(base.y, control.y);
    summary.control_mse_x = metrics::mse_curves(base.x, control.x);
    summary.control_mse_y = metrics::mse_curves(base.y, control.y);

    summary.pass = summary.kld_x < summary.control_kld_x &&
                   summary.kld_y < summary.control_kld_y &&
                   summary.mse_x < summary.control_mse_x &&
                   summary.mse_y < summary.control_mse_y;

    json j;
    j["scenario"] = cfg.name;
    j["kld_x"] = summary.kld_x;
    j["kld_y"] = summary.kld_y;
    j["mse_x"] = summary.mse_x;
    j["mse_y"] = summary.mse_y;
    j["control_kld_x"] = summary.control_kld_x;
    j["control_kld_y"] = summary.control_kld_y;
    j["control_mse_x"] = summary.control_mse_x;
    j["control_mse_y"] = summary.control_mse_y;
    j["reference_band_kld"] = json::array({0.01, 0.02});
    j["marker_loss_fraction"] = summary.marker_loss_fraction;
    j["pass"] = summary.pass;
    write_json_summary(options, "summary.json", j);

    if (summary.marker_loss_fraction > 0.1)
        throw_validation("validate-multiview: marker loss fraction " +
                         format_double(summary.marker_loss_fraction) + " exceeds 10%");
    return summary;
}

AblationSummary run_ablation(const ScenarioConfig& config, const RunOptions& options) {
    const ScenarioConfig cfg = apply_overrides(config, options);
    ensure_out_dir(options);

    auto run_variant = [&](const std::string& name, double buoyancy, double convection) {
        AblationVariant v;
        v.name = name;
        ScenarioConfig variant = cfg;
        variant.sim.buoyancy_constant = buoyancy;
        variant.sim.convection_multiplier = convection;
        FrameLoop loop(variant, options);
        double tke_acc = 0.0, vort_acc = 0.0;
        int counted = 0;
        try {
            loop.advance(variant.schedule.warmup_steps, name + " warmup");
            for (int f = 0; f < variant.schedule.frames; ++f) {
                loop.advance(variant.schedule.steps_per_frame,
                             name + " frame " + std::to_string(f));
                const NeighborTable table = loop.fresh_neighbors();
                tke_acc += metrics::tke(loop.particles());
                vort_acc += metrics::mean_vorticity(loop.particles(), table, loop.kernel(),
                                                    options.threads);
                ++counted;
            }
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::solver_instability) throw;
            v.stable = false;
            if (!options.quiet) std::cerr << "ablation variant '" << name << "' unstable: "
                                          << e.what() << '\n';
        }
        if (counted > 0) {
            v.tke = tke_acc / counted;
            v.mean_vorticity = vort_acc / counted;
        }
        return v;
    };

    AblationSummary summary;
    summary.full = run_variant("full", cfg.sim.buoyancy_constant, cfg.sim.convection_multiplier);
    summary.convection_only = run_variant("convection-only", 0.0, cfg.sim.convection_multiplier);
    summary.buoyancy_only = run_variant("buoyancy-only", cfg.sim.buoyancy_constant, 0.0);
    summary.all_stable =
        summary.full.stable && summary.convection_only.stable && summary.buoyancy_only.stable;
    summary.tke_ordering = summary.full.tke > summary.convection_only.tke &&
                           summary.convection_only.tke > summary.buoyancy_only.tke;
    summary.vorticity_ordering =
        summary.full.mean_vorticity > summary.convection_only.mean_vorticity &&
        summary.full.mean_vorticity > summary.buoyancy_only.mean_vorticity;

    CsvWriter csv(out_path(options, "ablation.csv"),
                  {"variant", "tke", "mean_vorticity", "stable"});
    for (const AblationVariant* v :
         {&summary.full, &summary.convection_only, &summary.buoyancy_only})
        csv.row({v->name, format_double(v->tke), format_double(v->mean_vorticity),
                 v->stable ? "1" : "0"});
    csv.close();

    json j;
    j["scenario"] = cfg.name;
    auto variant_json = [](const AblationVariant& v) {
        json vj;
        vj["tke"] = v.tke;
        vj["mean_vorticity"] = v.mean_vorticity;
        vj["stable"] = v.stable;
        return vj;
    };
    j["full"] = variant_json(summary.full);
    j["convection_only"] = variant_json(summary.convection_only);
    j["buoyancy_only"] = variant_json(summary.buoyancy_only);
    j["tke_ordering"] = summary.tke_ordering;
    j["vorticity_ordering"] = summary.vorticity_ordering;
    j["all_stable"] = summary.all_stable;
    write_json_summary(options, "summary.json", j);
    return summary;
}

BenchSummary run_bench_stepping(const ScenarioConfig& config, const RunOptions& options) {
    const ScenarioConfig cfg = apply_overrides(config, options);
    if (cfg.cameras.empty()) throw_config("bench: scenario defines no cameras");
    ensure_out_dir(options);

    FrameLoop loop(cfg, options);
    loop.advance(cfg.schedule.warmup_steps, "warmup");
    const VoxelGrid grid = loop.splat();
    const Camera camera = cfg.cameras[0].build();

    auto render_with = [&](const SteppingPolicy& policy) {
        const auto t0 = std::chrono::steady_clock::now();
        RenderResult r = render(camera, grid, cfg.scene, policy, cfg.output.supersample,
                                options.threads);
        const auto t1 = std::chrono::steady_clock::now();
        const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        return std::make_pair(std::move(r), ms);
    };

    BenchSummary summary;
    SteppingPolicy reference_policy = cfg.stepping;
    reference_policy.mode = SteppingPolicy::Mode::fixed;
    reference_policy.fixed_ds = 1e-3;
    reference_policy.max_steps = std::max(cfg.stepping.max_steps, 100000);
    auto [reference, reference_ms] = render_with(reference_policy);

    auto record = [&](const std::string& label, const SteppingPolicy& policy,
                      const RenderResult& r, double ms) {
        BenchEntry e;
        e.label = label;
        e.mode = policy.mode == SteppingPolicy::Mode::adaptive ? "adaptive" : "static";
        e.parameter = policy.mode == SteppingPolicy::Mode::adaptive ? policy.max_turn
                                                                    : policy.fixed_ds;
        e.total_steps = r.total_steps;
        e.rmse_vs_reference = image_rmse(r.image, reference.image);
        e.wall_ms = ms;
        write_ppm(out_path(options, "bench_" + label + ".ppm"), r.image);
        write_step_map(out_path(options, "bench_steps_" + label + ".pgm"), r.step_map);
        summary.entries.push_back(e);
    };

    record("reference", reference_policy, reference, reference_ms);

    SteppingPolicy fixed = cfg.stepping;
    fixed.mode = SteppingPolicy::Mode::fixed;
    {
        auto [r, ms] = render_with(fixed);
        record("static", fixed, r, ms);
    }
    SteppingPolicy adaptive = cfg.stepping;
    adaptive.mode = SteppingPolicy::Mode::adaptive;
    {
        auto [r, ms] = render_with(adaptive);
        record("adaptive", adaptive, r, ms);
    }
    for (double theta : {0.001, 0.003, 0.01}) {
        SteppingPolicy sweep = adaptive;
        sweep.max_turn = theta;
        auto [r, ms] = render_with(sweep);
        record("sweep_" + format_double(theta), sweep, r, ms);
    }

    CsvWriter csv(out_path(options, "bench.csv"),
                  {"label", "mode", "parameter", "total_steps", "rmse_vs_reference"});
    CsvWriter timing(out_path(options, "timing.csv"), {"label", "wall_ms"});
    for (const BenchEntry& e : summary.entries) {
        csv.row({e.label, e.mode, format_double(e.parameter), std::to_string(e.total_steps),
                 format_double(e.rmse_vs_reference)});
        timing.row({e.label, format_double(e.wall_ms)});
    }
    csv.close();
    timing.close();

    json j;
    j["scenario"] = cfg.name;
    json entries = json::array();
    for (const BenchEntry& e : summary.entries) {
        json ej;
        ej["label"] = e.label;
        ej["mode"] = e.mode;
        ej["parameter"] = e.parameter;
        ej["total_steps"] = e.total_steps;
        ej["rmse_vs_reference"] = e.rmse_vs_reference;
        entries.push_back(ej);
    }
    j["entries"] = entries;
    write_json_summary(options, "summary.json", j);
    return summary;
}

}  // namespace heathaze
