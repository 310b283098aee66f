#pragma once

#include <optional>
#include <span>
#include <vector>

#include "heathaze/camera.hpp"
#include "heathaze/kernel.hpp"
#include "heathaze/neighbor_grid.hpp"
#include "heathaze/particle.hpp"
#include "heathaze/ray_tracer.hpp"
#include "heathaze/scene.hpp"
#include "heathaze/voxel_grid.hpp"

namespace heathaze {
namespace metrics {

// Turbulent kinetic energy per unit mass: mean kinetic energy of the
// mass-weighted velocity fluctuations.
double tke(std::span<const Particle> particles);

// SPH curl estimate of the velocity field at particle i.
Vec3 vorticity(std::size_t i, std::span<const Particle> particles,
               const NeighborTable& neighbors, const SpikyKernel& kernel);

// Mean vorticity magnitude over all particles.
double mean_vorticity(std::span<const Particle> particles, const NeighborTable& neighbors,
                      const SpikyKernel& kernel, unsigned threads = 1);

// Marker observation time series for one camera.
struct MarkerTrack {
    int marker_id = 0;
    int camera_id = 0;
    Vec3 world_position;
    double depth = 0.0;                  // m from the camera
    std::vector<double> u;               // apparent pixel column per frame
    std::vector<double> v;               // apparent pixel row per frame
};

// Unbiased sample variance of the track's pixel coordinates.
struct VariancePair {
    double var_u = 0.0;
    double var_v = 0.0;
    double total() const { return var_u + var_v; }
};
VariancePair displacement_variance(const MarkerTrack& track);

// Ordinary least squares of total variance against marker depth.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 1.0;
};
LinearFit depth_linearity(std::span<const double> depths, std::span<const double> variances);

// Normalized displacement histogram with a smoothing floor so KLD is
// well-defined. Bin edges must match between compared histograms.
struct DisplacementHistogram {
    std::vector<double> edges;   // size bins+1
    std::vector<double> prob;    // size bins, sums to 1
    double floor = 1e-6;
};

inline constexpr int k_histogram_bins = 41;
inline constexpr double k_histogram_floor = 1e-6;

// Uniform bins spanning +-5 sigma of the pooled samples.
std::vector<double> histogram_edges(std::span<const double> pooled_samples,
                                    int bins = k_histogram_bins);
DisplacementHistogram build_histogram(std::span<const double> samples,
                                      const std::vector<double>& edges,
                                      double floor = k_histogram_floor);

double kld(const DisplacementHistogram& p, const DisplacementHistogram& q);

// Mean squared elementwise difference between two equal-length series.
double mse_curves(std::span<const double> a, std::span<const double> b);

struct ApparentPosition {
    double u = 0.0;
    double v = 0.0;
    int pixel_u = 0;  // integer argmin of the ring search, before refinement
    int pixel_v = 0;
    double approach_distance = 0.0;  // m, closest pass of the best ray to the marker
};

// Continuous pixel coordinate whose refracted ray passes nearest the marker:
// expanding-ring search around the straight-line projection followed by
// per-axis sub-pixel bisection. Returns nullopt (marker lost) when no ray
// comes within `tolerance` of the marker.
std::optional<ApparentPosition> apparent_position(const Camera& camera, const VoxelGrid& grid,
                                                  const Scene& scene, const Vec3& marker,
                                                  const SteppingPolicy& policy,
                                                  double tolerance, int max_ring_radius = 32);

}  // namespace metrics
}  // namespace heathaze
