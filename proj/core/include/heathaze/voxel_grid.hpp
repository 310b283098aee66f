#pragma once

#include <iosfwd>
#include <vector>

#include "heathaze/aabb.hpp"
#include "heathaze/particle.hpp"
#include "heathaze/vec3.hpp"

namespace heathaze {

struct VoxelGridSpec {
    int nx = 10, ny = 10, nz = 10;
    Aabb bounds{{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}};
    double gladstone_dale = 1e-5;  // m^3/kg

    void validate() const;
    std::size_t voxel_count() const {
        return static_cast<std::size_t>(nx) * ny * nz;
    }
};

// Regular scalar density grid with a Gladstone-Dale refractive-index view.
// Voxel gradients are precomputed by finite differences once at construction;
// both fields are sampled with trilinear interpolation (edge-clamped).
// Outside the bounds the medium is clear air: n = 1, grad n = 0.
class VoxelGrid {
public:
    VoxelGrid(const VoxelGridSpec& spec, std::vector<double> densities);

    // SPH kernel splatting of particle masses at voxel centers.
    static VoxelGrid splat(const ParticleList& particles, const VoxelGridSpec& spec,
                           double smoothing_radius, bool deterministic = true,
                           unsigned threads = 1);

    const VoxelGridSpec& spec() const { return spec_; }
    const Aabb& bounds() const { return spec_.bounds; }
    const std::vector<double>& densities() const { return density_; }
    bool is_vacuum() const { return max_density_ == 0.0; }

    Vec3 voxel_center(int ix, int iy, int iz) const;
    double voxel_density(int ix, int iy, int iz) const {
        return density_[index(ix, iy, iz)];
    }

    double density_at(const Vec3& p) const;
    Vec3 density_gradient(const Vec3& p) const;

    double refractive_index(const Vec3& p) const {
        return 1.0 + spec_.gladstone_dale * density_at(p);
    }
    Vec3 refractive_gradient(const Vec3& p) const {
        return density_gradient(p) * spec_.gladstone_dale;
    }

    void dump(std::ostream& os) const;
    static VoxelGrid parse(std::istream& is);

private:
    std::size_t index(int ix, int iy, int iz) const {
        return (static_cast<std::size_t>(iz) * spec_.ny + iy) * spec_.nx + ix;
    }
    void build_gradients();

    VoxelGridSpec spec_;
    Vec3 voxel_size_;
    std::vector<double> density_;
    std::vector<Vec3> gradient_;
    double max_density_ = 0.0;
};

}  // namespace heathaze
