#include "heathaze/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "heathaze/rng.hpp"

#include <json.hpp>

#include "heathaze/errors.hpp"
#include "heathaze/sph_solver.hpp"

namespace heathaze {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw_config(path + ": " + msg);
}

// Object accessor that records touched keys and rejects unknown ones, so a
// typo in a config fails loudly with its field path.
class JsonObj {
public:
    JsonObj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail(path_, "expected an object");
    }

    const std::string& path() const { return path_; }

    bool has(const char* key) const { return j_.contains(key); }

    const json& req(const char* key) const {
        seen_.insert(key);
        auto it = j_.find(key);
        if (it == j_.end()) fail(path_ + "." + key, "missing required field");
        return *it;
    }

    const json* opt(const char* key) const {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    double num(const char* key, double fallback) const {
        const json* v = opt(key);
        if (!v) return fallback;
        if (!v->is_number()) fail(path_ + "." + key, "expected a number");
        return v->get<double>();
    }

    int integer(const char* key, int fallback) const {
        const json* v = opt(key);
        if (!v) return fallback;
        if (!v->is_number_integer()) fail(path_ + "." + key, "expected an integer");
        return v->get<int>();
    }

    std::uint64_t u64(const char* key, std::uint64_t fallback) const {
        const json* v = opt(key);
        if (!v) return fallback;
        if (!v->is_number_unsigned() && !v->is_number_integer())
            fail(path_ + "." + key, "expected an unsigned integer");
        return v->get<std::uint64_t>();
    }

    bool boolean(const char* key, bool fallback) const {
        const json* v = opt(key);
        if (!v) return fallback;
        if (!v->is_boolean()) fail(path_ + "." + key, "expected a boolean");
        return v->get<bool>();
    }

    std::string str(const char* key, const std::string& fallback) const {
        const json* v = opt(key);
        if (!v) return fallback;
        if (!v->is_string()) fail(path_ + "." + key, "expected a string");
        return v->get<std::string>();
    }

    Vec3 vec3(const char* key, const Vec3& fallback) const {
        const json* v = opt(key);
        if (!v) return fallback;
        return parse_vec3(*v, path_ + "." + key);
    }

    Vec3 vec3_req(const char* key) const { return parse_vec3(req(key), path_ + "." + key); }

    static Vec3 parse_vec3(const json& v, const std::string& path) {
        if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
            !v[2].is_number())
            fail(path, "expected an array of 3 numbers");
        return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
    }

    void done() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key())) fail(path_ + "." + it.key(), "unknown field");
        }
    }

private:
    const json& j_;
    std::string path_;
    mutable std::set<std::string> seen_;
};

json to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }
json to_json(const Color& c) { return json::array({c.r, c.g, c.b}); }

Color parse_color(const json& v, const std::string& path) {
    const Vec3 c = JsonObj::parse_vec3(v, path);
    return {c.x, c.y, c.z};
}

SimParams parse_sim(const json& j, const std::string& path) {
    JsonObj o(j, path);
    SimParams defaults;
    SimParams s;
    s.dt = o.num("dt_s", defaults.dt);
    s.smoothing_radius = o.num("smoothing_radius_m", defaults.smoothing_radius);
    s.rest_density = o.num("rest_density_kg_m3", defaults.rest_density);
    s.thermal_conductivity = o.num("thermal_conductivity", defaults.thermal_conductivity);
    s.buoyancy_constant = o.num("buoyancy_constant", defaults.buoyancy_constant);
    s.convection_multiplier = o.num("convection_multiplier", defaults.convection_multiplier);
    s.ambient_temperature = o.num("ambient_temperature", defaults.ambient_temperature);
    s.gravity = o.vec3("gravity_m_s2", defaults.gravity);
    s.source_transfer_rate = o.num("source_transfer_rate", defaults.source_transfer_rate);
    s.particle_volume = o.num("particle_volume_m3", defaults.particle_volume);
    s.solver_iterations = o.integer("solver_iterations", defaults.solver_iterations);
    s.cfm_epsilon = o.num("cfm_epsilon", defaults.cfm_epsilon);
    s.domain.min = o.vec3("domain_min_m", defaults.domain.min);
    s.domain.max = o.vec3("domain_max_m", defaults.domain.max);
    s.seed = o.u64("seed", defaults.seed);
    s.deterministic = o.boolean("deterministic", defaults.deterministic);
    o.done();
    return s;
}

json sim_to_json(const SimParams& s) {
    json j;
    j["dt_s"] = s.dt;
    j["smoothing_radius_m"] = s.smoothing_radius;
    j["rest_density_kg_m3"] = s.rest_density;
    j["thermal_conductivity"] = s.thermal_conductivity;
    j["buoyancy_constant"] = s.buoyancy_constant;
    j["convection_multiplier"] = s.convection_multiplier;
    j["ambient_temperature"] = s.ambient_temperature;
    j["gravity_m_s2"] = to_json(s.gravity);
    j["source_transfer_rate"] = s.source_transfer_rate;
    j["particle_volume_m3"] = s.particle_volume;
    j["solver_iterations"] = s.solver_iterations;
    j["cfm_epsilon"] = s.cfm_epsilon;
    j["domain_min_m"] = to_json(s.domain.min);
    j["domain_max_m"] = to_json(s.domain.max);
    j["seed"] = s.seed;
    j["deterministic"] = s.deterministic;
    return j;
}

ParticleInit parse_particles(const json& j, const std::string& path) {
    JsonObj o(j, path);
    ParticleInit p;
    p.lattice.min = o.vec3("lattice_min_m", p.lattice.min);
    p.lattice.max = o.vec3("lattice_max_m", p.lattice.max);
    p.spacing = o.num("spacing_m", p.spacing);
    p.jitter = o.num("jitter_m", p.jitter);
    p.mass = o.num("mass_kg", p.mass);
    p.initial_temperature = o.num("initial_temperature", p.initial_temperature);
    o.done();
    return p;
}

json particles_to_json(const ParticleInit& p) {
    json j;
    j["lattice_min_m"] = to_json(p.lattice.min);
    j["lattice_max_m"] = to_json(p.lattice.max);
    j["spacing_m"] = p.spacing;
    j["jitter_m"] = p.jitter;
    j["mass_kg"] = p.mass;
    j["initial_temperature"] = p.initial_temperature;
    return j;
}

HeatSource parse_source(const json& j, const std::string& path) {
    JsonObj o(j, path);
    HeatSource s;
    s.region.min = o.vec3_req("box_min_m");
    s.region.max = o.vec3_req("box_max_m");
    s.temperature = o.num("temperature", s.temperature);
    s.strength = o.num("lambda", s.strength);
    s.influence_radius = o.num("radius_m", s.influence_radius);
    o.done();
    return s;
}

json source_to_json(const HeatSource& s) {
    json j;
    j["box_min_m"] = to_json(s.region.min);
    j["box_max_m"] = to_json(s.region.max);
    j["temperature"] = s.temperature;
    j["lambda"] = s.strength;
    j["radius_m"] = s.influence_radius;
    return j;
}

CameraSpec parse_camera(const json& j, const std::string& path) {
    JsonObj o(j, path);
    CameraSpec c;
    c.position = o.vec3_req("position_m");
    c.target = o.vec3_req("look_at_m");
    c.up_hint = o.vec3("up_hint", c.up_hint);
    c.vfov_deg = o.num("vfov_deg", c.vfov_deg);
    c.width = o.integer("width_px", c.width);
    c.height = o.integer("height_px", c.height);
    o.done();
    return c;
}

json camera_to_json(const CameraSpec& c) {
    json j;
    j["position_m"] = to_json(c.position);
    j["look_at_m"] = to_json(c.target);
    j["up_hint"] = to_json(c.up_hint);
    j["vfov_deg"] = c.vfov_deg;
    j["width_px"] = c.width;
    j["height_px"] = c.height;
    return j;
}

CheckerBoard parse_board(const json& j, const std::string& path) {
    JsonObj o(j, path);
    CheckerBoard b;
    b.center = o.vec3_req("center_m");
    b.u_axis = o.vec3("u_axis", b.u_axis);
    b.v_axis = o.vec3("v_axis", b.v_axis);
    b.half_extent_u = o.num("half_extent_u_m", b.half_extent_u);
    b.half_extent_v = o.num("half_extent_v_m", b.half_extent_v);
    b.square = o.num("square_m", b.square);
    if (const json* v = o.opt("color_a_rgb")) b.color_a = parse_color(*v, path + ".color_a_rgb");
    if (const json* v = o.opt("color_b_rgb")) b.color_b = parse_color(*v, path + ".color_b_rgb");
    o.done();
    return b;
}

json board_to_json(const CheckerBoard& b) {
    json j;
    j["center_m"] = to_json(b.center);
    j["u_axis"] = to_json(b.u_axis);
    j["v_axis"] = to_json(b.v_axis);
    j["half_extent_u_m"] = b.half_extent_u;
    j["half_extent_v_m"] = b.half_extent_v;
    j["square_m"] = b.square;
    j["color_a_rgb"] = to_json(b.color_a);
    j["color_b_rgb"] = to_json(b.color_b);
    return j;
}

Scene parse_scene(const json& j, const std::string& path) {
    JsonObj o(j, path);
    Scene s;
    if (const json* v = o.opt("background_rgb"))
        s.background = parse_color(*v, path + ".background_rgb");
    s.shell_margin = o.num("shell_margin_m", s.shell_margin);
    if (const json* v = o.opt("boards")) {
        if (!v->is_array()) fail(path + ".boards", "expected an array");
        for (std::size_t i = 0; i < v->size(); ++i)
            s.boards.push_back(parse_board((*v)[i], path + ".boards[" + std::to_string(i) + "]"));
    }
    o.done();
    return s;
}

json scene_to_json(const Scene& s) {
    json j;
    j["background_rgb"] = to_json(s.background);
    j["shell_margin_m"] = s.shell_margin;
    json boards = json::array();
    for (const CheckerBoard& b : s.boards) boards.push_back(board_to_json(b));
    j["boards"] = boards;
    return j;
}

SteppingPolicy parse_stepping(const json& j, const std::string& path) {
    JsonObj o(j, path);
    SteppingPolicy p;
    const std::string mode = o.str("mode", "adaptive");
    if (mode == "adaptive") p.mode = SteppingPolicy::Mode::adaptive;
    else if (mode == "static") p.mode = SteppingPolicy::Mode::fixed;
    else fail(path + ".mode", "expected 'adaptive' or 'static'");
    p.max_turn = o.num("max_turn_rad", p.max_turn);
    p.ds_min = o.num("ds_min_m", p.ds_min);
    p.ds_max = o.num("ds_max_m", p.ds_max);
    p.fixed_ds = o.num("static_ds_m", p.fixed_ds);
    p.guard_epsilon = o.num("guard_epsilon", p.guard_epsilon);
    p.max_steps = o.integer("max_steps", p.max_steps);
    o.done();
    return p;
}

json stepping_to_json(const SteppingPolicy& p) {
    json j;
    j["mode"] = p.mode == SteppingPolicy::Mode::adaptive ? "adaptive" : "static";
    j["max_turn_rad"] = p.max_turn;
    j["ds_min_m"] = p.ds_min;
    j["ds_max_m"] = p.ds_max;
    j["static_ds_m"] = p.fixed_ds;
    j["guard_epsilon"] = p.guard_epsilon;
    j["max_steps"] = p.max_steps;
    return j;
}

}  // namespace

Camera CameraSpec::build() const {
    return Camera::look_at(position, target, up_hint, vfov_deg * 3.141592653589793 / 180.0,
                           width, height);
}

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw_config(std::string("config is not valid JSON: ") + e.what());
    }
    JsonObj o(j, "config");
    ScenarioConfig c;
    c.name = o.str("name", c.name);
    if (const json* v = o.opt("sim")) c.sim = parse_sim(*v, "config.sim");
    if (const json* v = o.opt("particles")) c.particles = parse_particles(*v, "config.particles");
    if (const json* v = o.opt("heat_sources")) {
        if (!v->is_array()) fail("config.heat_sources", "expected an array");
        for (std::size_t i = 0; i < v->size(); ++i)
            c.heat_sources.push_back(
                parse_source((*v)[i], "config.heat_sources[" + std::to_string(i) + "]"));
    }
    if (const json* v = o.opt("grid")) {
        JsonObj g(*v, "config.grid");
        if (const json* r = g.opt("resolution")) {
            if (!r->is_array() || r->size() != 3) fail("config.grid.resolution",
                                                       "expected an array of 3 integers");
            c.grid.nx = (*r)[0].get<int>();
            c.grid.ny = (*r)[1].get<int>();
            c.grid.nz = (*r)[2].get<int>();
        }
        c.grid.gladstone_dale = g.num("gladstone_dale_m3_kg", c.grid.gladstone_dale);
        if (g.has("bounds_min_m") || g.has("bounds_max_m")) {
            c.grid.bounds.min = g.vec3_req("bounds_min_m");
            c.grid.bounds.max = g.vec3_req("bounds_max_m");
            c.grid_bounds_explicit = true;
        }
        g.done();
    }
    if (const json* v = o.opt("cameras")) {
        if (!v->is_array()) fail("config.cameras", "expected an array");
        for (std::size_t i = 0; i < v->size(); ++i)
            c.cameras.push_back(
                parse_camera((*v)[i], "config.cameras[" + std::to_string(i) + "]"));
    }
    if (const json* v = o.opt("scene")) c.scene = parse_scene(*v, "config.scene");
    if (const json* v = o.opt("markers")) {
        if (!v->is_array()) fail("config.markers", "expected an array");
        for (std::size_t i = 0; i < v->size(); ++i) {
            JsonObj m((*v)[i], "config.markers[" + std::to_string(i) + "]");
            MarkerSpec spec;
            spec.board = m.integer("board", 0);
            spec.u = m.num("u_m", 0.0);
            spec.v = m.num("v_m", 0.0);
            m.done();
            c.markers.push_back(spec);
        }
    }
    if (const json* v = o.opt("stepping")) c.stepping = parse_stepping(*v, "config.stepping");
    if (const json* v = o.opt("schedule")) {
        JsonObj s(*v, "config.schedule");
        c.schedule.warmup_steps = s.integer("warmup_steps", c.schedule.warmup_steps);
        c.schedule.frames = s.integer("frames", c.schedule.frames);
        c.schedule.steps_per_frame = s.integer("steps_per_frame", c.schedule.steps_per_frame);
        s.done();
    }
    if (const json* v = o.opt("output")) {
        JsonObj s(*v, "config.output");
        c.output.dump_particles = s.boolean("dump_particles", c.output.dump_particles);
        c.output.dump_grid = s.boolean("dump_grid", c.output.dump_grid);
        c.output.dump_step_maps = s.boolean("dump_step_maps", c.output.dump_step_maps);
        c.output.supersample = s.integer("supersample", c.output.supersample);
        s.done();
    }
    c.marker_tolerance = o.num("marker_tolerance_m", c.marker_tolerance);
    c.control_seed_offset = o.u64("control_seed_offset", c.control_seed_offset);
    o.done();
    c.validate();
    return c;
}

std::string ScenarioConfig::to_json_text() const {
    json j;
    j["name"] = name;
    j["sim"] = sim_to_json(sim);
    j["particles"] = particles_to_json(particles);
    json sources = json::array();
    for (const HeatSource& s : heat_sources) sources.push_back(source_to_json(s));
    j["heat_sources"] = sources;
    {
        json g;
        g["resolution"] = json::array({grid.nx, grid.ny, grid.nz});
        g["gladstone_dale_m3_kg"] = grid.gladstone_dale;
        if (grid_bounds_explicit) {
            g["bounds_min_m"] = to_json(grid.bounds.min);
            g["bounds_max_m"] = to_json(grid.bounds.max);
        }
        j["grid"] = g;
    }
    json cams = json::array();
    for (const CameraSpec& c : cameras) cams.push_back(camera_to_json(c));
    j["cameras"] = cams;
    j["scene"] = scene_to_json(scene);
    json marks = json::array();
    for (const MarkerSpec& m : markers) {
        json mj;
        mj["board"] = m.board;
        mj["u_m"] = m.u;
        mj["v_m"] = m.v;
        marks.push_back(mj);
    }
    j["markers"] = marks;
    j["stepping"] = stepping_to_json(stepping);
    {
        json s;
        s["warmup_steps"] = schedule.warmup_steps;
        s["frames"] = schedule.frames;
        s["steps_per_frame"] = schedule.steps_per_frame;
        j["schedule"] = s;
    }
    {
        json s;
        s["dump_particles"] = output.dump_particles;
        s["dump_grid"] = output.dump_grid;
        s["dump_step_maps"] = output.dump_step_maps;
        s["supersample"] = output.supersample;
        j["output"] = s;
    }
    j["marker_tolerance_m"] = marker_tolerance;
    j["control_seed_offset"] = control_seed_offset;
    return j.dump(2) + "\n";
}

void ScenarioConfig::validate() const {
    sim.validate();
    if (particles.spacing <= 0.0) throw_config("config.particles.spacing_m: must be > 0");
    if (particles.jitter < 0.0) throw_config("config.particles.jitter_m: must be >= 0");
    if (!particles.lattice.valid())
        throw_config("config.particles: lattice box must have min < max");
    for (std::size_t i = 0; i < heat_sources.size(); ++i) {
        try {
            heat_sources[i].validate();
        } catch (const Error& e) {
            throw_config("config.heat_sources[" + std::to_string(i) + "]: " + e.what());
        }
    }
    effective_grid().validate();
    for (std::size_t i = 0; i < cameras.size(); ++i) {
        try {
            cameras[i].build();
        } catch (const Error& e) {
            throw_config("config.cameras[" + std::to_string(i) + "]: " + e.what());
        }
    }
    scene.validate();
    for (std::size_t i = 0; i < markers.size(); ++i) {
        if (markers[i].board < 0 ||
            markers[i].board >= static_cast<int>(scene.boards.size()))
            throw_config("config.markers[" + std::to_string(i) + "].board: out of range");
    }
    stepping.validate();
    if (schedule.warmup_steps < 0 || schedule.frames < 0 || schedule.steps_per_frame < 1)
        throw_config("config.schedule: warmup/frames must be >= 0, steps_per_frame >= 1");
    if (output.supersample < 1) throw_config("config.output.supersample: must be >= 1");
}

ParticleList ScenarioConfig::build_particles() const {
    const double mass = particles.mass > 0.0
                            ? particles.mass
                            : lattice_rest_mass(particles.spacing, sim.smoothing_radius,
                                                sim.rest_density);
    const double t0 = particles.initial_temperature < 0.0 ? sim.ambient_temperature
                                                          : particles.initial_temperature;
    return make_lattice(particles.lattice, particles.spacing, particles.jitter, sim.seed,
                        mass, t0);
}

VoxelGridSpec ScenarioConfig::effective_grid() const {
    VoxelGridSpec g = grid;
    if (!grid_bounds_explicit) g.bounds = sim.domain;
    return g;
}

double ScenarioConfig::effective_marker_tolerance() const {
    if (marker_tolerance > 0.0) return marker_tolerance;
    double smallest = 0.0;
    for (const CheckerBoard& b : scene.boards)
        smallest = smallest == 0.0 ? b.square : std::min(smallest, b.square);
    if (smallest == 0.0) throw_config("config: marker tolerance needs a board or an explicit value");
    return 0.5 * smallest;
}

Vec3 ScenarioConfig::marker_world(const MarkerSpec& m) const {
    return scene.boards[m.board].point_at(m.u, m.v);
}

namespace {

ScenarioConfig base_box_scenario() {
    ScenarioConfig c;
    c.sim.domain = {{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}};
    c.sim.convection_multiplier = 0.02;  // desk-scale swirl strength
    c.sim.thermal_conductivity = 15.0;   // explicit conduction stable at this spacing
    c.particles.lattice = c.sim.domain;
    c.particles.spacing = 1.0 / 21.0;  // 22^3 = 10648 particles
    c.grid.nx = c.grid.ny = c.grid.nz = 16;
    c.grid.gladstone_dale = 1e-5;
    CameraSpec cam;
    cam.position = {0.5, 0.5, -0.6};
    cam.target = {0.5, 0.5, 0.5};
    cam.vfov_deg = 45.0;
    c.cameras.push_back(cam);
    CheckerBoard board;
    board.center = {0.5, 0.5, 2.0};
    board.u_axis = {1.0, 0.0, 0.0};
    board.v_axis = {0.0, 1.0, 0.0};
    board.half_extent_u = 1.2;
    board.half_extent_v = 1.2;
    board.square = 0.1;
    c.scene.boards.push_back(board);
    c.scene.shell_margin = 0.06;
    return c;
}

HeatSource bottom_source(const Aabb& domain, double temperature) {
    HeatSource s;
    const Vec3 mid = (domain.min + domain.max) * 0.5;
    const Vec3 ext = domain.extent();
    s.region.min = {mid.x - 0.15 * ext.x, domain.min.y, mid.z - 0.15 * ext.z};
    s.region.max = {mid.x + 0.15 * ext.x, domain.min.y + 0.08 * ext.y, mid.z + 0.15 * ext.z};
    s.temperature = temperature;
    s.strength = 1.0;
    s.influence_radius = 0.15;
    return s;
}

ScenarioConfig corridor_scenario() {
    ScenarioConfig c;
    c.sim.domain = {{-0.5, 0.0, 0.0}, {0.5, 0.6, 2.4}};
    c.sim.convection_multiplier = 0.06;
    c.sim.thermal_conductivity = 15.0;
    c.particles.lattice = c.sim.domain;
    c.particles.spacing = 0.05;
    c.particles.jitter = 0.005;
    // refractive grid restricted to the interior core: rays measure the
    // developed turbulence, not the wall-hugging circulation cells
    c.grid.nx = 16;
    c.grid.ny = 10;
    c.grid.nz = 50;
    c.grid.bounds = {{-0.36, 0.08, 0.06}, {0.36, 0.52, 2.31}};
    c.grid_bounds_explicit = true;
    c.grid.gladstone_dale = 3e-5;
    c.sim.convection_multiplier = 0.1;
    // staggered field of small hot floor patches: many independent plume
    // cells along the corridor instead of one corridor-scale roll
    for (int iz = 0; iz < 12; ++iz)
        for (int ix = 0; ix < 4; ++ix) {
            HeatSource s;
            const double x0 = -0.47 + 0.25 * ix + 0.02 * (iz % 3);
            const double z0 = 0.04 + 0.195 * iz + 0.015 * (ix % 2);
            s.region.min = {x0, 0.0, z0};
            s.region.max = {x0 + 0.11, 0.045, z0 + 0.11};
            s.temperature = 600.0;
            s.strength = 1.0;
            s.influence_radius = 0.08;
            c.heat_sources.push_back(s);
        }
    // ceiling sink: carries heat out so the stratification reaches a
    // statistical steady state instead of ramping through the whole run
    {
        HeatSource sink;
        sink.region.min = {-0.5, 0.56, 0.0};
        sink.region.max = {0.5, 0.6, 2.4};
        sink.temperature = 240.0;
        sink.strength = 0.3;
        sink.influence_radius = 0.1;
        c.heat_sources.push_back(sink);
    }
    c.scene.shell_margin = 0.06;
    return c;
}

std::vector<MarkerSpec> grid_markers(int board, int nu, int nv, double su, double sv) {
    std::vector<MarkerSpec> out;
    for (int iv = 0; iv < nv; ++iv)
        for (int iu = 0; iu < nu; ++iu) {
            MarkerSpec m;
            m.board = board;
            m.u = (nu == 1 ? 0.0 : -su + 2.0 * su * iu / (nu - 1));
            m.v = (nv == 1 ? 0.0 : -sv + 2.0 * sv * iv / (nv - 1));
            out.push_back(m);
        }
    return out;
}

ScenarioConfig make_quiescent() {
    ScenarioConfig c = base_box_scenario();
    c.name = "quiescent";
    c.schedule = {0, 50, 1};
    return c;
}

ScenarioConfig make_plume() {
    ScenarioConfig c = base_box_scenario();
    c.name = "plume";
    c.heat_sources.push_back(bottom_source(c.sim.domain, 600.0));
    c.particles.jitter = 0.004;
    c.schedule = {150, 200, 2};
    return c;
}

ScenarioConfig make_discrete_depth() {
    ScenarioConfig c = corridor_scenario();
    c.name = "discrete-depth";
    CameraSpec cam;
    cam.position = {0.0, 0.44, -0.02};
    cam.target = {0.0, 0.44, 1.5};
    cam.vfov_deg = 50.0;
    cam.width = cam.height = 256;
    c.cameras.push_back(cam);
    // side-by-side boards at the same height, roughly doubled depth
    CheckerBoard near_board;
    near_board.center = {-0.28, 0.44, 1.05};
    near_board.half_extent_u = 0.18;
    near_board.half_extent_v = 0.18;
    near_board.square = 0.05;
    CheckerBoard far_board = near_board;
    far_board.center = {0.33, 0.44, 2.1};
    far_board.half_extent_u = 0.26;
    far_board.half_extent_v = 0.26;
    c.scene.boards = {near_board, far_board};
    for (const MarkerSpec& m : grid_markers(0, 3, 3, 0.11, 0.11)) c.markers.push_back(m);
    for (const MarkerSpec& m : grid_markers(1, 3, 3, 0.16, 0.16)) c.markers.push_back(m);
    c.schedule = {250, 120, 6};
    return c;
}

ScenarioConfig make_slanted_board() {
    ScenarioConfig c = corridor_scenario();
    c.name = "slanted-board";
    CameraSpec cam;
    cam.position = {0.0, 0.44, -0.9};
    cam.target = {0.0, 0.44, 1.4};
    cam.vfov_deg = 45.0;
    cam.width = cam.height = 256;
    c.cameras.push_back(cam);
    // board yawed about the vertical axis: depth varies across the image
    // while every marker stays at the same height, inside the mixing layer
    // under the ceiling sink where refractive fluctuations are strongest
    CheckerBoard board;
    board.center = {0.0, 0.44, 1.4};
    const double yaw = 55.0 * 3.141592653589793 / 180.0;
    board.u_axis = {std::cos(yaw), 0.0, std::sin(yaw)};
    board.v_axis = {0.0, 1.0, 0.0};
    board.half_extent_u = 1.0;
    board.half_extent_v = 0.22;
    board.square = 0.05;
    c.scene.boards = {board};
    for (int iu = 0; iu < 8; ++iu)
        for (int iv = 0; iv < 3; ++iv) {
            MarkerSpec m;
            m.board = 0;
            m.u = -0.85 + (1.7 / 7.0) * iu;
            m.v = -0.06 + 0.06 * iv;
            c.markers.push_back(m);
        }
    c.schedule = {400, 120, 6};
    return c;
}

ScenarioConfig make_multiview() {
    ScenarioConfig c = corridor_scenario();
    c.name = "multiview";
    for (double bx : {-0.02, 0.02}) {
        CameraSpec cam;
        cam.position = {bx, 0.44, -0.02};
        cam.target = {0.0, 0.44, 2.5};
        cam.vfov_deg = 40.0;
        cam.width = cam.height = 256;
        c.cameras.push_back(cam);
    }
    CheckerBoard board;
    board.center = {0.0, 0.44, 2.5};  // just beyond the volume
    board.half_extent_u = 0.42;
    board.half_extent_v = 0.42;
    board.square = 0.06;
    c.scene.boards = {board};
    for (const MarkerSpec& m : grid_markers(0, 4, 4, 0.3, 0.3)) c.markers.push_back(m);
    c.schedule = {400, 120, 4};
    return c;
}

ScenarioConfig make_ablation() {
    ScenarioConfig c = base_box_scenario();
    c.name = "ablation";
    c.sim.convection_multiplier = 0.006;  // balance against buoyancy-driven energy
    c.heat_sources.push_back(bottom_source(c.sim.domain, 600.0));
    c.particles.jitter = 0.004;
    c.schedule = {0, 150, 3};
    return c;
}

ScenarioConfig make_bench() {
    ScenarioConfig c = base_box_scenario();
    c.name = "bench";
    c.heat_sources.push_back(bottom_source(c.sim.domain, 600.0));
    c.particles.jitter = 0.004;
    c.grid.nx = c.grid.ny = c.grid.nz = 10;
    // tight turn bound and step cap: refine through the plume, leap in the
    // mild bulk, and keep the accuracy within reach of the static policy
    c.stepping.max_turn = 1e-4;
    c.stepping.ds_max = 0.03;
    c.schedule = {120, 1, 1};
    return c;
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"quiescent", "plume", "discrete-depth", "slanted-board",
            "multiview", "ablation", "bench"};
}

ScenarioConfig preset(const std::string& name) {
    ScenarioConfig c;
    if (name == "quiescent") c = make_quiescent();
    else if (name == "plume") c = make_plume();
    else if (name == "discrete-depth") c = make_discrete_depth();
    else if (name == "slanted-board") c = make_slanted_board();
    else if (name == "multiview") c = make_multiview();
    else if (name == "ablation") c = make_ablation();
    else if (name == "bench") c = make_bench();
    else throw_config("unknown preset '" + name + "'");
    c.validate();
    return c;
}

}  // namespace heathaze
