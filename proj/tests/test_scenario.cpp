#include <doctest.h>

#include <string>

#include "heathaze/errors.hpp"
#include "heathaze/scenario.hpp"

using namespace heathaze;

TEST_CASE("an empty config resolves to the reference defaults") {
    const ScenarioConfig c = ScenarioConfig::from_json_text("{}");
    CHECK(c.sim.dt == doctest::Approx(0.006));
    CHECK(c.sim.smoothing_radius == doctest::Approx(0.1));
    CHECK(c.sim.rest_density == doctest::Approx(300.0));
    CHECK(c.sim.thermal_conductivity == doctest::Approx(100.0));
    CHECK(c.sim.buoyancy_constant == doctest::Approx(100.0));
    CHECK(c.sim.convection_multiplier == doctest::Approx(50.0));
    CHECK(c.sim.gravity.y == doctest::Approx(-9.81));
    CHECK(c.sim.solver_iterations == 3);
    CHECK(c.stepping.max_turn == doctest::Approx(0.003));
    CHECK(c.stepping.fixed_ds == doctest::Approx(0.02));
    CHECK(c.stepping.ds_min == doctest::Approx(1e-3));
    CHECK(c.stepping.ds_max == doctest::Approx(0.05));
    CHECK(c.stepping.max_steps == 10000);
    CHECK(c.grid.nx == 10);
    CHECK(c.grid.ny == 10);
    CHECK(c.grid.nz == 10);
}

TEST_CASE("config round-trips to identical JSON") {
    for (const std::string& name : preset_names()) {
        const ScenarioConfig a = preset(name);
        const std::string text = a.to_json_text();
        const ScenarioConfig b = ScenarioConfig::from_json_text(text);
        CHECK(b.to_json_text() == text);
    }
}

TEST_CASE("field errors carry the full path") {
    try {
        ScenarioConfig::from_json_text(R"({"sim": {"dt_s": "fast"}})");
        FAIL("expected a config error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::config);
        CHECK(std::string(e.what()).find("config.sim.dt_s") != std::string::npos);
    }
    try {
        ScenarioConfig::from_json_text(R"({"sim": {"dt_sec": 0.006}})");
        FAIL("expected a config error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("config.sim.dt_sec") != std::string::npos);
        CHECK(std::string(e.what()).find("unknown") != std::string::npos);
    }
    try {
        ScenarioConfig::from_json_text(R"({"sim": {"dt_s": -1.0}})");
        FAIL("expected a config error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::parameter);
    }
    CHECK_THROWS_AS(ScenarioConfig::from_json_text("not json"), Error);
}

TEST_CASE("every preset validates and builds its particle set") {
    const auto names = preset_names();
    CHECK(names.size() == 7);
    for (const std::string& name : names) {
        const ScenarioConfig c = preset(name);
        CHECK(c.name == name);
        const ParticleList particles = c.build_particles();
        CHECK(particles.size() > 5000);
        CHECK(particles.size() < 100000);
        for (const Particle& p : particles) CHECK(c.sim.domain.contains(p.position));
    }
    CHECK_THROWS_AS(preset("no-such"), Error);
}

TEST_CASE("marker tolerance defaults to half the smallest square") {
    ScenarioConfig c = preset("multiview");
    CHECK(c.effective_marker_tolerance() ==
          doctest::Approx(0.5 * c.scene.boards[0].square).epsilon(1e-12));
    c.marker_tolerance = 0.123;
    CHECK(c.effective_marker_tolerance() == doctest::Approx(0.123));
}

TEST_CASE("cameras build orthonormal bases") {
    for (const std::string& name : preset_names()) {
        const ScenarioConfig c = preset(name);
        for (const CameraSpec& spec : c.cameras) {
            const Camera cam = spec.build();
            CHECK(std::abs(norm(cam.right) - 1.0) < 1e-9);
            CHECK(std::abs(norm(cam.up) - 1.0) < 1e-9);
            CHECK(std::abs(norm(cam.forward) - 1.0) < 1e-9);
            CHECK(std::abs(dot(cam.right, cam.up)) < 1e-9);
            CHECK(std::abs(dot(cam.right, cam.forward)) < 1e-9);
            CHECK(std::abs(dot(cam.up, cam.forward)) < 1e-9);
        }
    }
}

TEST_CASE("grid bounds default to the simulation domain") {
    const ScenarioConfig c = preset("plume");
    const VoxelGridSpec g = c.effective_grid();
    CHECK(g.bounds.min == c.sim.domain.min);
    CHECK(g.bounds.max == c.sim.domain.max);

    const ScenarioConfig e = ScenarioConfig::from_json_text(
        R"({"grid": {"bounds_min_m": [0,0,0], "bounds_max_m": [2,2,2]}})");
    CHECK(e.effective_grid().bounds.max.x == doctest::Approx(2.0));
}

TEST_CASE("markers referencing missing boards are rejected") {
    CHECK_THROWS_AS(
        ScenarioConfig::from_json_text(R"({"markers": [{"board": 0, "u_m": 0, "v_m": 0}]})"),
        Error);
}
