#include "heathaze/voxel_grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "heathaze/errors.hpp"
#include "heathaze/io.hpp"
#include "heathaze/kernel.hpp"
#include "heathaze/neighbor_grid.hpp"
#include "heathaze/parallel.hpp"

namespace heathaze {

void VoxelGridSpec::validate() const {
    if (nx < 1 || ny < 1 || nz < 1) throw_parameter("VoxelGrid: resolution must be >= 1 per axis");
    if (!bounds.valid()) throw_parameter("VoxelGrid: bounds must have min < max");
    if (gladstone_dale < 0.0) throw_parameter("VoxelGrid: Gladstone-Dale constant must be >= 0");
}

VoxelGrid::VoxelGrid(const VoxelGridSpec& spec, std::vector<double> densities)
    : spec_(spec), density_(std::move(densities)) {
    spec_.validate();
    if (density_.size() != spec_.voxel_count())
        throw_parameter("VoxelGrid: density array size does not match resolution");
    const Vec3 size = spec_.bounds.extent();
    voxel_size_ = {size.x / spec_.nx, size.y / spec_.ny, size.z / spec_.nz};
    for (double d : density_) {
        if (!(d >= 0.0) || !std::isfinite(d))
            throw_parameter("VoxelGrid: densities must be finite and >= 0");
        max_density_ = std::max(max_density_, d);
    }
    build_gradients();
}

VoxelGrid VoxelGrid::splat(const ParticleList& particles, const VoxelGridSpec& spec,
                           double smoothing_radius, bool deterministic, unsigned threads) {
    spec.validate();
    std::vector<double> density(spec.voxel_count(), 0.0);
    if (!particles.empty()) {
        const SpikyKernel kernel(smoothing_radius);
        const NeighborGrid grid(particles, smoothing_radius);
        const Vec3 size = spec.bounds.extent();
        const Vec3 vox{size.x / spec.nx, size.y / spec.ny, size.z / spec.nz};
        const double r2 = smoothing_radius * smoothing_radius;
        parallel_for(spec.voxel_count(), threads, [&](std::size_t v) {
            const int ix = static_cast<int>(v % spec.nx);
            const int iy = static_cast<int>((v / spec.nx) % spec.ny);
            const int iz = static_cast<int>(v / (static_cast<std::size_t>(spec.nx) * spec.ny));
            const Vec3 c = spec.bounds.min +
                           Vec3{(ix + 0.5) * vox.x, (iy + 0.5) * vox.y, (iz + 0.5) * vox.z};
            if (deterministic) {
                thread_local std::vector<std::uint32_t> scratch;
                scratch.clear();
                grid.for_each_candidate(c, [&](std::uint32_t j) {
                    if (norm_sq(c - particles[j].position) < r2) scratch.push_back(j);
                });
                std::sort(scratch.begin(), scratch.end());
                double rho = 0.0;
                for (std::uint32_t j : scratch)
                    rho += particles[j].mass * kernel.value(norm(c - particles[j].position));
                density[v] = rho;
            } else {
                double rho = 0.0;
                grid.for_each_candidate(c, [&](std::uint32_t j) {
                    rho += particles[j].mass * kernel.value(norm(c - particles[j].position));
                });
                density[v] = rho;
            }
        });
    }
    return VoxelGrid(spec, std::move(density));
}

void VoxelGrid::build_gradients() {
    gradient_.assign(density_.size(), Vec3{});
    const int nx = spec_.nx, ny = spec_.ny, nz = spec_.nz;
    auto axis_diff = [](double lo, double hi, double span) { return (hi - lo) / span; };
    for (int iz = 0; iz < nz; ++iz)
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < nx; ++ix) {
                Vec3 g;
                if (nx > 1) {
                    const int a = std::max(ix - 1, 0);
                    const int b = std::min(ix + 1, nx - 1);
                    g.x = axis_diff(density_[index(a, iy, iz)], density_[index(b, iy, iz)],
                                    (b - a) * voxel_size_.x);
                }
                if (ny > 1) {
                    const int a = std::max(iy - 1, 0);
                    const int b = std::min(iy + 1, ny - 1);
                    g.y = axis_diff(density_[index(ix, a, iz)], density_[index(ix, b, iz)],
                                    (b - a) * voxel_size_.y);
                }
                if (nz > 1) {
                    const int a = std::max(iz - 1, 0);
                    const int b = std::min(iz + 1, nz - 1);
                    g.z = axis_diff(density_[index(ix, iy, a)], density_[index(ix, iy, b)],
                                    (b - a) * voxel_size_.z);
                }
                gradient_[index(ix, iy, iz)] = g;
            }
}

Vec3 VoxelGrid::voxel_center(int ix, int iy, int iz) const {
    return spec_.bounds.min + Vec3{(ix + 0.5) * voxel_size_.x, (iy + 0.5) * voxel_size_.y,
                                   (iz + 0.5) * voxel_size_.z};
}

namespace {

struct TrilinearWeights {
    int i0[3], i1[3];
    double f[3];
};

}  // namespace

// Shared cell lookup for both sampled fields; edge-clamped.
static TrilinearWeights locate(const Vec3& p, const Aabb& bounds, const Vec3& vox,
                               int nx, int ny, int nz) {
    TrilinearWeights w;
    const int dims[3] = {nx, ny, nz};
    const Vec3 rel = p - bounds.min;
    const double q[3] = {rel.x / vox.x - 0.5, rel.y / vox.y - 0.5, rel.z / vox.z - 0.5};
    for (int a = 0; a < 3; ++a) {
        const double fl = std::floor(q[a]);
        int i0 = static_cast<int>(fl);
        double f = q[a] - fl;
        if (i0 < 0) { i0 = 0; f = 0.0; }
        if (i0 >= dims[a] - 1) { i0 = dims[a] - 1; f = 0.0; }
        w.i0[a] = i0;
        w.i1[a] = std::min(i0 + 1, dims[a] - 1);
        w.f[a] = f;
    }
    return w;
}

double VoxelGrid::density_at(const Vec3& p) const {
    if (!spec_.bounds.contains(p)) return 0.0;
    const auto w = locate(p, spec_.bounds, voxel_size_, spec_.nx, spec_.ny, spec_.nz);
    double acc = 0.0;
    for (int dz = 0; dz < 2; ++dz)
        for (int dy = 0; dy < 2; ++dy)
            for (int dx = 0; dx < 2; ++dx) {
                const double wt = (dx ? w.f[0] : 1.0 - w.f[0]) *
                                  (dy ? w.f[1] : 1.0 - w.f[1]) *
                                  (dz ? w.f[2] : 1.0 - w.f[2]);
                if (wt == 0.0) continue;
                acc += wt * density_[index(dx ? w.i1[0] : w.i0[0],
                                           dy ? w.i1[1] : w.i0[1],
                                           dz ? w.i1[2] : w.i0[2])];
            }
    return acc;
}

Vec3 VoxelGrid::density_gradient(const Vec3& p) const {
    if (!spec_.bounds.contains(p)) return {};
    const auto w = locate(p, spec_.bounds, voxel_size_, spec_.nx, spec_.ny, spec_.nz);
    Vec3 acc;
    for (int dz = 0; dz < 2; ++dz)
        for (int dy = 0; dy < 2; ++dy)
            for (int dx = 0; dx < 2; ++dx) {
                const double wt = (dx ? w.f[0] : 1.0 - w.f[0]) *
                                  (dy ? w.f[1] : 1.0 - w.f[1]) *
                                  (dz ? w.f[2] : 1.0 - w.f[2]);
                if (wt == 0.0) continue;
                acc += gradient_[index(dx ? w.i1[0] : w.i0[0],
                                       dy ? w.i1[1] : w.i0[1],
                                       dz ? w.i1[2] : w.i0[2])] * wt;
            }
    return acc;
}

void VoxelGrid::dump(std::ostream& os) const {
    os << "heathaze-grid v1\n";
    os << "resolution " << spec_.nx << ' ' << spec_.ny << ' ' << spec_.nz << '\n';
    os << "bounds " << format_double(spec_.bounds.min.x) << ' ' << format_double(spec_.bounds.min.y)
       << ' ' << format_double(spec_.bounds.min.z) << ' ' << format_double(spec_.bounds.max.x)
       << ' ' << format_double(spec_.bounds.max.y) << ' ' << format_double(spec_.bounds.max.z)
       << '\n';
    os << "gladstone_dale " << format_double(spec_.gladstone_dale) << '\n';
    for (double d : density_) os << format_double(d) << '\n';
}

VoxelGrid VoxelGrid::parse(std::istream& is) {
    std::string magic;
    std::getline(is, magic);
    if (magic != "heathaze-grid v1") throw_io("grid dump: unrecognized header '" + magic + "'");
    std::string word;
    VoxelGridSpec spec;
    is >> word >> spec.nx >> spec.ny >> spec.nz;
    if (word != "resolution") throw_io("grid dump: expected 'resolution'");
    is >> word >> spec.bounds.min.x >> spec.bounds.min.y >> spec.bounds.min.z >>
        spec.bounds.max.x >> spec.bounds.max.y >> spec.bounds.max.z;
    if (word != "bounds") throw_io("grid dump: expected 'bounds'");
    is >> word >> spec.gladstone_dale;
    if (word != "gladstone_dale") throw_io("grid dump: expected 'gladstone_dale'");
    std::vector<double> density(spec.voxel_count());
    for (double& d : density) {
        if (!(is >> d)) throw_io("grid dump: truncated density array");
    }
    return VoxelGrid(spec, std::move(density));
}

}  // namespace heathaze
