#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "heathaze/errors.hpp"
#include "heathaze/io.hpp"
#include "heathaze/runner.hpp"
#include "heathaze/scenario.hpp"

namespace {

using namespace heathaze;

struct GlobalArgs {
    std::string config_path;
    std::string preset_name;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 1;
    bool deterministic = false;
    int frames = 0;
    bool frames_set = false;
    bool quiet = false;
};

void add_common_options(CLI::App* cmd, GlobalArgs& args) {
    cmd->add_option("--config", args.config_path, "Scenario config file (JSON)");
    cmd->add_option("--preset", args.preset_name, "Built-in scenario preset name");
    cmd->add_option("--out", args.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--seed", args.seed, "Override the scenario seed")
        ->each([&](const std::string&) { args.seed_set = true; });
    cmd->add_option("--threads", args.threads, "Worker threads (0 = hardware)")
        ->capture_default_str();
    cmd->add_flag("--deterministic", args.deterministic,
                  "Order neighbor reductions by ascending particle index");
    cmd->add_option("--frames", args.frames, "Override the recorded frame count")
        ->each([&](const std::string&) { args.frames_set = true; });
    cmd->add_flag("--quiet", args.quiet, "Suppress progress warnings");
}

ScenarioConfig load_config(const GlobalArgs& args) {
    if (!args.preset_name.empty() && !args.config_path.empty())
        throw_config("pass either --config or --preset, not both");
    if (!args.preset_name.empty()) return preset(args.preset_name);
    if (!args.config_path.empty())
        return ScenarioConfig::from_json_text(read_text_file(args.config_path));
    throw_config("a scenario is required: pass --config <file> or --preset <name>");
}

RunOptions make_options(const GlobalArgs& args) {
    RunOptions opt;
    opt.out_dir = args.out_dir;
    opt.threads = args.threads < 0 ? 1 : static_cast<unsigned>(args.threads);
    if (args.seed_set) opt.seed = args.seed;
    if (args.frames_set) opt.frames = args.frames;
    if (args.deterministic) opt.deterministic = true;
    opt.quiet = args.quiet;
    return opt;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"heathaze: SPH thermofluid simulation with curved-ray refractive rendering"};
    app.require_subcommand(1);

    GlobalArgs args;
    std::string depth_mode = "continuous";

    CLI::App* simulate = app.add_subcommand("simulate", "Run the simulation and emit stats");
    CLI::App* render_cmd = app.add_subcommand("render", "Render PPM frames per camera");
    CLI::App* vdepth = app.add_subcommand(
        "validate-depth", "Measure marker displacement variance against depth");
    CLI::App* vmulti = app.add_subcommand(
        "validate-multiview", "Cross-view consistency metrics for a two-camera scenario");
    CLI::App* ablation = app.add_subcommand(
        "ablation", "Compare full/buoyancy-only/convection-only thermal forcing");
    CLI::App* bench = app.add_subcommand(
        "bench", "Benchmark adaptive vs static stepping on one frame");
    CLI::App* dump = app.add_subcommand("dump-config", "Print the resolved scenario JSON");
    CLI::App* presets_cmd = app.add_subcommand("presets", "List built-in presets");

    for (CLI::App* cmd : {simulate, render_cmd, vdepth, vmulti, ablation, bench, dump})
        add_common_options(cmd, args);
    vdepth->add_option("--mode", depth_mode, "discrete or continuous")
        ->check(CLI::IsMember({"discrete", "continuous"}))
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (presets_cmd->parsed()) {
            for (const std::string& name : heathaze::preset_names())
                std::cout << name << '\n';
            return 0;
        }
        const ScenarioConfig config = load_config(args);
        const RunOptions options = make_options(args);

        if (dump->parsed()) {
            std::cout << config.to_json_text();
            return 0;
        }
        if (simulate->parsed()) {
            run_simulate(config, options);
            return 0;
        }
        if (render_cmd->parsed()) {
            run_render(config, options);
            return 0;
        }
        if (vdepth->parsed()) {
            const DepthMode mode =
                depth_mode == "discrete" ? DepthMode::discrete : DepthMode::continuous;
            const DepthValidationSummary s = run_validate_depth(config, mode, options);
            if (!s.pass) {
                std::cerr << "validate-depth: gate failed (see summary.json)\n";
                return exit_code(ErrorKind::validation);
            }
            return 0;
        }
        if (vmulti->parsed()) {
            const MultiviewSummary s = run_validate_multiview(config, options);
            if (!s.pass) {
                std::cerr << "validate-multiview: cross-view metrics did not beat the "
                             "reseeded control (see summary.json)\n";
                return exit_code(ErrorKind::validation);
            }
            return 0;
        }
        if (ablation->parsed()) {
            run_ablation(config, options);
            return 0;
        }
        if (bench->parsed()) {
            run_bench_stepping(config, options);
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
