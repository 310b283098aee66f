#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "heathaze/particle.hpp"
#include "heathaze/vec3.hpp"

namespace heathaze {

// Uniform hash grid with cell size equal to the smoothing radius. A candidate
// query walks the 3x3x3 cell block around a position, so it returns every
// particle within the radius and nothing farther than 2h*sqrt(3).
class NeighborGrid {
public:
    NeighborGrid(std::span<const Particle> particles, double cell_size);

    double cell_size() const { return cell_size_; }

    template <typename Fn>
    void for_each_candidate(const Vec3& pos, Fn&& fn) const {
        const std::int64_t cx = cell_coord(pos.x);
        const std::int64_t cy = cell_coord(pos.y);
        const std::int64_t cz = cell_coord(pos.z);
        for (std::int64_t dz = -1; dz <= 1; ++dz)
            for (std::int64_t dy = -1; dy <= 1; ++dy)
                for (std::int64_t dx = -1; dx <= 1; ++dx) {
                    auto it = cells_.find(pack(cx + dx, cy + dy, cz + dz));
                    if (it == cells_.end()) continue;
                    for (std::uint32_t idx : it->second) fn(idx);
                }
    }

    std::vector<std::uint32_t> candidates(const Vec3& pos) const {
        std::vector<std::uint32_t> out;
        for_each_candidate(pos, [&](std::uint32_t i) { out.push_back(i); });
        return out;
    }

private:
    std::int64_t cell_coord(double v) const;
    static std::uint64_t pack(std::int64_t x, std::int64_t y, std::int64_t z);

    double cell_size_;
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells_;
};

// Per-particle neighbor lists in CSR form, filtered to exact distance < radius
// at build positions. Self is always included. With `sorted` the lists are in
// ascending particle index, which fixes the reduction order of every SPH sum.
struct NeighborTable {
    std::vector<std::uint32_t> offsets;  // size n+1
    std::vector<std::uint32_t> indices;

    std::span<const std::uint32_t> of(std::size_t i) const {
        return {indices.data() + offsets[i], indices.data() + offsets[i + 1]};
    }
    std::size_t size() const { return offsets.empty() ? 0 : offsets.size() - 1; }
};

NeighborTable build_neighbor_table(const NeighborGrid& grid,
                                   std::span<const Particle> particles,
                                   double radius, bool sorted, unsigned threads = 1);

}  // namespace heathaze
