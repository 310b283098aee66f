#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "heathaze/errors.hpp"
#include "heathaze/io.hpp"
#include "heathaze/runner.hpp"
#include "heathaze/scenario.hpp"

using namespace heathaze;
namespace fs = std::filesystem;

namespace {

// Tiny scenario that still exercises every pipeline stage.
ScenarioConfig micro_config() {
    ScenarioConfig c;
    c.name = "micro";
    c.sim.domain = {{0.0, 0.0, 0.0}, {0.6, 0.6, 0.6}};
    c.sim.thermal_conductivity = 15.0;
    c.sim.convection_multiplier = 0.02;
    c.particles.lattice = c.sim.domain;
    c.particles.spacing = 0.06;
    c.particles.jitter = 0.004;
    c.grid.nx = c.grid.ny = c.grid.nz = 8;
    c.grid.gladstone_dale = 4e-5;
    HeatSource s;
    s.region = {{0.2, 0.0, 0.2}, {0.4, 0.05, 0.4}};
    s.temperature = 600.0;
    s.influence_radius = 0.12;
    c.heat_sources.push_back(s);
    CameraSpec cam;
    cam.position = {0.3, 0.3, -0.4};
    cam.target = {0.3, 0.3, 0.3};
    cam.width = cam.height = 32;
    c.cameras.push_back(cam);
    CheckerBoard board;
    board.center = {0.3, 0.3, 1.5};
    board.half_extent_u = 0.8;
    board.half_extent_v = 0.8;
    board.square = 0.08;
    c.scene.boards.push_back(board);
    c.schedule = {5, 2, 1};
    return c;
}

std::string slurp(const fs::path& p) { return read_text_file(p.string()); }

std::set<std::string> dir_files(const fs::path& root) {
    std::set<std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file()) out.insert(fs::relative(e.path(), root).string());
    return out;
}

}  // namespace

TEST_CASE("run_simulate writes stats and is byte-deterministic") {
    const ScenarioConfig cfg = micro_config();
    RunOptions a;
    a.out_dir = "runner_sim_a";
    a.quiet = true;
    RunOptions b = a;
    b.out_dir = "runner_sim_b";
    const SimulateSummary sa = run_simulate(cfg, a);
    const SimulateSummary sb = run_simulate(cfg, b);
    CHECK(sa.tke.size() == 2);
    CHECK(sa.tke == sb.tke);
    CHECK(slurp("runner_sim_a/stats.csv") == slurp("runner_sim_b/stats.csv"));
    CHECK(slurp("runner_sim_a/summary.json") == slurp("runner_sim_b/summary.json"));
}

TEST_CASE("run_render emits the expected frame files per camera") {
    ScenarioConfig cfg = micro_config();
    CameraSpec cam2 = cfg.cameras[0];
    cam2.position.x += 0.05;
    cfg.cameras.push_back(cam2);
    RunOptions opt;
    opt.out_dir = "runner_render";
    opt.quiet = true;
    const RenderSummary s = run_render(cfg, opt);
    CHECK(s.frames == 2);
    CHECK(s.cameras == 2);
    const auto files = dir_files("runner_render");
    for (const char* f : {"cam0_frame0.ppm", "cam0_frame1.ppm", "cam1_frame0.ppm",
                          "cam1_frame1.ppm", "render_steps.csv", "summary.json"})
        CHECK(files.count(f) == 1);
    // consecutive frames of an active plume differ
    CHECK(slurp("runner_render/cam0_frame0.ppm") != slurp("runner_render/cam0_frame1.ppm"));
}

TEST_CASE("run_render twice gives byte-identical frames") {
    const ScenarioConfig cfg = micro_config();
    RunOptions a;
    a.out_dir = "runner_render_a";
    a.quiet = true;
    RunOptions b = a;
    b.out_dir = "runner_render_b";
    run_render(cfg, a);
    run_render(cfg, b);
    CHECK(slurp("runner_render_a/cam0_frame1.ppm") == slurp("runner_render_b/cam0_frame1.ppm"));
    CHECK(slurp("runner_render_a/render_steps.csv") == slurp("runner_render_b/render_steps.csv"));
}

TEST_CASE("run_validate_depth produces marker tracks and a summary") {
    ScenarioConfig cfg = micro_config();
    // yaw the board so the markers span distinct depths
    cfg.scene.boards[0].u_axis = {0.7071067811865476, 0.0, 0.7071067811865476};
    for (double u : {-0.24, -0.08, 0.08, 0.24}) {
        MarkerSpec m;
        m.board = 0;
        m.u = u;
        m.v = 0.0;
        cfg.markers.push_back(m);
    }
    RunOptions opt;
    opt.out_dir = "runner_depth";
    opt.quiet = true;
    const DepthValidationSummary s = run_validate_depth(cfg, DepthMode::continuous, opt);
    CHECK(s.marker_loss_fraction == 0.0);
    const auto files = dir_files("runner_depth");
    CHECK(files.count("markers.csv") == 1);
    CHECK(files.count("summary.json") == 1);
    std::ifstream csv("runner_depth/markers.csv");
    std::string line;
    int rows = 0;
    while (std::getline(csv, line)) ++rows;
    CHECK(rows == 1 + 2 * 4);  // header + frames x markers
}

TEST_CASE("run_ablation reports all three variants") {
    const ScenarioConfig cfg = micro_config();
    RunOptions opt;
    opt.out_dir = "runner_ablation";
    opt.quiet = true;
    const AblationSummary s = run_ablation(cfg, opt);
    CHECK(s.full.stable);
    CHECK(s.convection_only.stable);
    CHECK(s.buoyancy_only.stable);
    CHECK(s.full.tke >= 0.0);
    const auto files = dir_files("runner_ablation");
    CHECK(files.count("ablation.csv") == 1);
    CHECK(files.count("summary.json") == 1);
}

TEST_CASE("run_bench_stepping produces the policy table") {
    const ScenarioConfig cfg = micro_config();
    RunOptions opt;
    opt.out_dir = "runner_bench";
    opt.quiet = true;
    const BenchSummary s = run_bench_stepping(cfg, opt);
    REQUIRE(s.find("reference") != nullptr);
    REQUIRE(s.find("adaptive") != nullptr);
    REQUIRE(s.find("static") != nullptr);
    CHECK(s.find("reference")->rmse_vs_reference == 0.0);
    CHECK(s.find("adaptive")->total_steps > 0);
    CHECK(s.find("adaptive")->total_steps < s.find("static")->total_steps);
    const auto files = dir_files("runner_bench");
    CHECK(files.count("bench.csv") == 1);
    CHECK(files.count("timing.csv") == 1);
    // deterministic artifacts exclude the timing file
    RunOptions again = opt;
    again.out_dir = "runner_bench_b";
    run_bench_stepping(cfg, again);
    CHECK(slurp("runner_bench/bench.csv") == slurp("runner_bench_b/bench.csv"));
    CHECK(slurp("runner_bench/bench_adaptive.ppm") == slurp("runner_bench_b/bench_adaptive.ppm"));
}

TEST_CASE("a sourceless still scenario has near-zero TKE") {
    ScenarioConfig cfg = micro_config();
    cfg.heat_sources.clear();
    cfg.particles.jitter = 0.0;
    RunOptions opt;
    opt.out_dir = "runner_still";
    opt.quiet = true;
    const SimulateSummary s = run_simulate(cfg, opt);
    for (double tke : s.tke) CHECK(tke < 1e-12);
}

TEST_CASE("frame overrides and seed overrides apply") {
    const ScenarioConfig cfg = micro_config();
    RunOptions opt;
    opt.out_dir = "runner_override";
    opt.quiet = true;
    opt.frames = 1;
    opt.seed = 999;
    const SimulateSummary s = run_simulate(cfg, opt);
    CHECK(s.tke.size() == 1);
}

TEST_CASE("solver instability surfaces the frame label") {
    ScenarioConfig cfg = micro_config();
    cfg.particles.jitter = 0.0;
    cfg.sim.dt = 1e9;  // absurd step size destroys the prediction
    RunOptions opt;
    opt.out_dir = "runner_unstable";
    opt.quiet = true;
    try {
        run_simulate(cfg, opt);
        // An absurd dt may still survive; nothing to assert in that case.
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::solver_instability);
    }
}
