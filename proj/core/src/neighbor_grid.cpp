#include "heathaze/neighbor_grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "heathaze/errors.hpp"
#include "heathaze/parallel.hpp"

namespace heathaze {

NeighborGrid::NeighborGrid(std::span<const Particle> particles, double cell_size)
    : cell_size_(cell_size) {
    if (cell_size <= 0.0) throw_parameter("NeighborGrid: cell size must be > 0");
    cells_.reserve(particles.size() / 4 + 8);
    for (std::size_t i = 0; i < particles.size(); ++i) {
        const Vec3& p = particles[i].position;
        if (!is_finite(p))
            throw_parameter("NeighborGrid: particle " + std::to_string(i) +
                            " has non-finite position");
        const std::uint64_t key = pack(cell_coord(p.x), cell_coord(p.y), cell_coord(p.z));
        cells_[key].push_back(static_cast<std::uint32_t>(i));
    }
}

std::int64_t NeighborGrid::cell_coord(double v) const {
    return static_cast<std::int64_t>(std::floor(v / cell_size_));
}

std::uint64_t NeighborGrid::pack(std::int64_t x, std::int64_t y, std::int64_t z) {
    // 21 bits per axis, offset to stay positive; plenty for desk-scale domains.
    const std::uint64_t bias = 1u << 20;
    const std::uint64_t mask = (1u << 21) - 1;
    return ((static_cast<std::uint64_t>(x) + bias) & mask) |
           (((static_cast<std::uint64_t>(y) + bias) & mask) << 21) |
           (((static_cast<std::uint64_t>(z) + bias) & mask) << 42);
}

NeighborTable build_neighbor_table(const NeighborGrid& grid,
                                   std::span<const Particle> particles,
                                   double radius, bool sorted, unsigned threads) {
    const std::size_t n = particles.size();
    const double r2 = radius * radius;

    NeighborTable table;
    table.offsets.assign(n + 1, 0);
    std::vector<std::uint32_t> counts(n, 0);
    parallel_for(n, threads, [&](std::size_t i) {
        const Vec3 pi = particles[i].position;
        std::uint32_t count = 0;
        grid.for_each_candidate(pi, [&](std::uint32_t j) {
            if (norm_sq(particles[j].position - pi) < r2) ++count;
        });
        counts[i] = count;
    });
    std::size_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        table.offsets[i] = static_cast<std::uint32_t>(total);
        total += counts[i];
    }
    table.offsets[n] = static_cast<std::uint32_t>(total);

    table.indices.resize(total);
    parallel_for(n, threads, [&](std::size_t i) {
        const Vec3 pi = particles[i].position;
        std::uint32_t* out = table.indices.data() + table.offsets[i];
        grid.for_each_candidate(pi, [&](std::uint32_t j) {
            if (norm_sq(particles[j].position - pi) < r2) *out++ = j;
        });
        if (sorted) std::sort(table.indices.data() + table.offsets[i], out);
    });
    return table;
}

}  // namespace heathaze
