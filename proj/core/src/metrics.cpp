#include "heathaze/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "heathaze/errors.hpp"
#include "heathaze/parallel.hpp"

namespace heathaze {
namespace metrics {

double tke(std::span<const Particle> particles) {
    if (particles.empty()) throw_parameter("tke: needs at least one particle");
    double total_mass = 0.0;
    Vec3 momentum;
    for (const Particle& p : particles) {
        total_mass += p.mass;
        momentum += p.velocity * p.mass;
    }
    const Vec3 mean_velocity = momentum / total_mass;
    double sum = 0.0;
    for (const Particle& p : particles) sum += p.mass * norm_sq(p.velocity - mean_velocity);
    return sum / (2.0 * total_mass);
}

Vec3 vorticity(std::size_t i, std::span<const Particle> particles,
               const NeighborTable& neighbors, const SpikyKernel& kernel) {
    const Particle& pi = particles[i];
    Vec3 curl;
    // (v_i - v_j) x grad W: the pairwise curl whose continuum limit is the
    // analytic curl (rigid rotation evaluates to +2*Omega).
    for (std::uint32_t j : neighbors.of(i)) {
        if (j == i) continue;
        const Particle& pj = particles[j];
        const Vec3 grad = kernel.gradient(pi.position - pj.position);
        curl += cross(pi.velocity - pj.velocity, grad) * (pj.mass / pj.density);
    }
    return curl;
}

double mean_vorticity(std::span<const Particle> particles, const NeighborTable& neighbors,
                      const SpikyKernel& kernel, unsigned threads) {
    if (particles.empty()) throw_parameter("mean_vorticity: needs at least one particle");
    std::vector<double> mag(particles.size());
    parallel_for(particles.size(), threads, [&](std::size_t i) {
        mag[i] = norm(vorticity(i, particles, neighbors, kernel));
    });
    double sum = 0.0;
    for (double m : mag) sum += m;
    return sum / static_cast<double>(particles.size());
}

VariancePair displacement_variance(const MarkerTrack& track) {
    const std::size_t n = track.u.size();
    if (n < 2 || track.v.size() != n)
        throw_parameter("displacement_variance: need >= 2 frames with matching axes");
    auto variance = [n](const std::vector<double>& s) {
        double mean = 0.0;
        for (double x : s) mean += x;
        mean /= static_cast<double>(n);
        double acc = 0.0;
        for (double x : s) acc += (x - mean) * (x - mean);
        return acc / static_cast<double>(n - 1);
    };
    return {variance(track.u), variance(track.v)};
}

LinearFit depth_linearity(std::span<const double> depths, std::span<const double> variances) {
    if (depths.size() != variances.size())
        throw_parameter("depth_linearity: size mismatch");
    std::vector<double> distinct(depths.begin(), depths.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 3)
        throw_parameter("depth_linearity: need at least 3 distinct depths");

    const double n = static_cast<double>(depths.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < depths.size(); ++i) {
        mx += depths[i];
        my += variances[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < depths.size(); ++i) {
        const double dx = depths[i] - mx;
        const double dy = variances[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (syy > 0.0) {
        double ss_res = 0.0;
        for (std::size_t i = 0; i < depths.size(); ++i) {
            const double r = variances[i] - (fit.intercept + fit.slope * depths[i]);
            ss_res += r * r;
        }
        fit.r_squared = 1.0 - ss_res / syy;
    }
    return fit;
}

std::vector<double> histogram_edges(std::span<const double> pooled, int bins) {
    if (pooled.empty()) throw_parameter("histogram_edges: empty sample pool");
    if (bins < 1) throw_parameter("histogram_edges: need at least one bin");
    double mean = 0.0;
    for (double x : pooled) mean += x;
    mean /= static_cast<double>(pooled.size());
    double var = 0.0;
    for (double x : pooled) var += (x - mean) * (x - mean);
    var /= static_cast<double>(pooled.size());
    double half_span = 5.0 * std::sqrt(var);
    if (half_span == 0.0) half_span = 1.0;  // degenerate constant series
    std::vector<double> edges(bins + 1);
    for (int i = 0; i <= bins; ++i)
        edges[i] = mean - half_span + 2.0 * half_span * i / bins;
    return edges;
}

DisplacementHistogram build_histogram(std::span<const double> samples,
                                      const std::vector<double>& edges, double floor) {
    if (edges.size() < 2) throw_parameter("build_histogram: need at least one bin");
    if (samples.empty()) throw_parameter("build_histogram: empty sample set");
    const int bins = static_cast<int>(edges.size()) - 1;
    DisplacementHistogram h;
    h.edges = edges;
    h.floor = floor;
    h.prob.assign(bins, 0.0);
    const double lo = edges.front();
    const double hi = edges.back();
    const double width = (hi - lo) / bins;
    for (double x : samples) {
        int b = static_cast<int>(std::floor((x - lo) / width));
        b = std::clamp(b, 0, bins - 1);  // out-of-span samples land in end bins
        h.prob[b] += 1.0;
    }
    const double inv_n = 1.0 / static_cast<double>(samples.size());
    double sum = 0.0;
    for (double& p : h.prob) {
        p = std::max(p * inv_n, floor);
        sum += p;
    }
    for (double& p : h.prob) p /= sum;
    for (double& p : h.prob) p = std::max(p, floor);
    return h;
}

double kld(const DisplacementHistogram& p, const DisplacementHistogram& q) {
    if (p.edges != q.edges)
        throw_parameter("kld: histograms must share identical bin edges");
    double d = 0.0;
    for (std::size_t i = 0; i < p.prob.size(); ++i)
        d += p.prob[i] * std::log(p.prob[i] / q.prob[i]);
    return d;
}

double mse_curves(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw_parameter("mse_curves: series length mismatch");
    if (a.empty()) throw_parameter("mse_curves: empty series");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc / static_cast<double>(a.size());
}

namespace {

double ray_marker_distance(const Camera& camera, const VoxelGrid& grid, const Scene& scene,
                           const SteppingPolicy& policy, const Vec3& marker,
                           double u, double v) {
    const Vec3 dir = camera.ray_direction(u, v);
    const TraceResult r = trace_ray(camera.position, dir, grid, scene, policy, &marker);
    return r.probe_distance;
}

}  // namespace

std::optional<ApparentPosition> apparent_position(const Camera& camera, const VoxelGrid& grid,
                                                  const Scene& scene, const Vec3& marker,
                                                  const SteppingPolicy& policy,
                                                  double tolerance, int max_ring_radius) {
    const auto nominal = camera.project(marker);
    if (!nominal) throw_parameter("apparent_position: marker behind the camera");
    const int cu = static_cast<int>(std::lround(nominal->first));
    const int cv = static_cast<int>(std::lround(nominal->second));
    if (cu < 0 || cu >= camera.width || cv < 0 || cv >= camera.height)
        throw_parameter("apparent_position: nominal projection outside the image");

    auto eval = [&](double u, double v) {
        return ray_marker_distance(camera, grid, scene, policy, marker, u, v);
    };

    // Expanding ring search; stops a few rings past the best hit so the
    // argmin matches an exhaustive sweep on smooth distance fields.
    double best_d = std::numeric_limits<double>::infinity();
    int best_u = cu, best_v = cv, best_ring = 0;
    for (int ring = 0; ring <= max_ring_radius; ++ring) {
        if (ring > best_ring + 3 && best_d <= tolerance) break;
        bool any_pixel = false;
        for (int dv = -ring; dv <= ring; ++dv)
            for (int du = -ring; du <= ring; ++du) {
                if (std::max(std::abs(du), std::abs(dv)) != ring) continue;
                const int pu = cu + du;
                const int pv = cv + dv;
                if (pu < 0 || pu >= camera.width || pv < 0 || pv >= camera.height) continue;
                any_pixel = true;
                const double d = eval(pu, pv);
                if (d < best_d) {
                    best_d = d;
                    best_u = pu;
                    best_v = pv;
                    best_ring = ring;
                }
            }
        if (!any_pixel && ring > 0) break;
    }

    // Sub-pixel refinement: alternating per-axis bisection of the bracket
    // around the best integer pixel.
    double u = best_u, v = best_v;
    double span = 1.0;
    for (int sweep = 0; sweep < 2; ++sweep) {
        for (int axis = 0; axis < 2; ++axis) {
            double lo = (axis == 0 ? u : v) - span;
            double hi = (axis == 0 ? u : v) + span;
            for (int it = 0; it < 20; ++it) {
                const double m1 = lo + (hi - lo) / 3.0;
                const double m2 = hi - (hi - lo) / 3.0;
                const double d1 = axis == 0 ? eval(m1, v) : eval(u, m1);
                const double d2 = axis == 0 ? eval(m2, v) : eval(u, m2);
                if (d1 <= d2) hi = m2; else lo = m1;
            }
            const double mid = 0.5 * (lo + hi);
            if (axis == 0) u = mid; else v = mid;
        }
        span = 0.25;
    }
    const double final_d = eval(u, v);
    if (final_d <= best_d) {
        best_d = final_d;
    } else {
        u = best_u;
        v = best_v;
    }

    if (best_d > tolerance) return std::nullopt;
    return ApparentPosition{u, v, best_u, best_v, best_d};
}

}  // namespace metrics
}  // namespace heathaze
