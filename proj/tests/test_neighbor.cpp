#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "heathaze/errors.hpp"
#include "heathaze/neighbor_grid.hpp"
#include "heathaze/rng.hpp"

using namespace heathaze;

namespace {

ParticleList random_cloud(std::size_t n, double extent, std::uint64_t seed) {
    Rng rng(seed);
    ParticleList particles(n);
    for (Particle& p : particles)
        p.position = {rng.uniform(0.0, extent), rng.uniform(0.0, extent),
                      rng.uniform(0.0, extent)};
    return particles;
}

// O(N^2) reference neighbor sets within the radius (self included).
std::vector<std::set<std::uint32_t>> brute_force(const ParticleList& particles, double radius) {
    std::vector<std::set<std::uint32_t>> sets(particles.size());
    for (std::size_t i = 0; i < particles.size(); ++i)
        for (std::size_t j = 0; j < particles.size(); ++j)
            if (norm_sq(particles[i].position - particles[j].position) < radius * radius)
                sets[i].insert(static_cast<std::uint32_t>(j));
    return sets;
}

}  // namespace

TEST_CASE("close pair are mutual neighbors, distant pair are not") {
    const double h = 0.1;
    ParticleList particles(2);
    particles[0].position = {0.0, 0.0, 0.0};
    particles[1].position = {0.5 * h, 0.0, 0.0};
    {
        const NeighborGrid grid(particles, h);
        const NeighborTable table = build_neighbor_table(grid, particles, h, true);
        const auto n0 = table.of(0);
        const auto n1 = table.of(1);
        CHECK(std::count(n0.begin(), n0.end(), 1u) == 1);
        CHECK(std::count(n1.begin(), n1.end(), 0u) == 1);
    }
    particles[1].position = {3.0 * h, 0.0, 0.0};
    {
        const NeighborGrid grid(particles, h);
        const NeighborTable table = build_neighbor_table(grid, particles, h, true);
        const auto n0 = table.of(0);
        CHECK(std::count(n0.begin(), n0.end(), 1u) == 0);
    }
}

TEST_CASE("filtered neighbor table matches the all-pairs oracle") {
    const double h = 0.1;
    const ParticleList particles = random_cloud(1000, 1.0, 2024);
    const NeighborGrid grid(particles, h);
    const NeighborTable table = build_neighbor_table(grid, particles, h, true);
    const auto reference = brute_force(particles, h);
    for (std::size_t i = 0; i < particles.size(); ++i) {
        const auto span = table.of(i);
        const std::set<std::uint32_t> got(span.begin(), span.end());
        CHECK(got == reference[i]);
    }
}

TEST_CASE("raw candidate query is a superset within the 2h*sqrt(3) bound") {
    const double h = 0.08;
    const ParticleList particles = random_cloud(2000, 0.9, 99);
    const NeighborGrid grid(particles, h);
    const double far_bound = 2.0 * h * std::sqrt(3.0);
    for (std::size_t i = 0; i < particles.size(); i += 37) {
        const auto candidates = grid.candidates(particles[i].position);
        const std::set<std::uint32_t> cand(candidates.begin(), candidates.end());
        for (std::size_t j = 0; j < particles.size(); ++j) {
            const double d = norm(particles[i].position - particles[j].position);
            if (d < h) CHECK(cand.count(static_cast<std::uint32_t>(j)) == 1);
            if (d >= far_bound) CHECK(cand.count(static_cast<std::uint32_t>(j)) == 0);
        }
    }
}

TEST_CASE("each particle appears exactly once in its own candidate set") {
    const double h = 0.05;
    const ParticleList particles = random_cloud(500, 1.0, 5);
    const NeighborGrid grid(particles, h);
    for (std::size_t i = 0; i < particles.size(); ++i) {
        const auto candidates = grid.candidates(particles[i].position);
        CHECK(std::count(candidates.begin(), candidates.end(),
                         static_cast<std::uint32_t>(i)) == 1);
    }
}

TEST_CASE("sorted mode yields ascending neighbor lists") {
    const ParticleList particles = random_cloud(300, 0.5, 11);
    const NeighborGrid grid(particles, 0.1);
    const NeighborTable table = build_neighbor_table(grid, particles, 0.1, true);
    for (std::size_t i = 0; i < particles.size(); ++i) {
        const auto span = table.of(i);
        CHECK(std::is_sorted(span.begin(), span.end()));
    }
}

TEST_CASE("non-finite positions are rejected with the particle index") {
    ParticleList particles(3);
    particles[2].position = {0.1, std::nan(""), 0.0};
    try {
        NeighborGrid grid(particles, 0.1);
        FAIL("expected an input error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::parameter);
        CHECK(std::string(e.what()).find("particle 2") != std::string::npos);
    }
}
