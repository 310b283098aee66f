#pragma once

#include <numbers>

#include "heathaze/errors.hpp"
#include "heathaze/vec3.hpp"

namespace heathaze {

// Desbrun's spiky kernel with compact support of radius h, normalized so the
// volume integral is 1. Used for every interpolation in the simulator.
struct SpikyKernel {
    double h = 0.1;
    double coeff = 0.0;       // 15 / (pi h^6)
    double grad_coeff = 0.0;  // -45 / (pi h^6)

    explicit SpikyKernel(double h_) : h(h_) {
        if (h <= 0.0) throw_parameter("SpikyKernel: smoothing radius must be > 0");
        const double h6 = h * h * h * h * h * h;
        coeff = 15.0 / (std::numbers::pi * h6);
        grad_coeff = -45.0 / (std::numbers::pi * h6);
    }

    // W(r, h) = 15/(pi h^6) (h - r)^3 on [0, h], 0 beyond.
    double value(double distance) const {
        if (distance >= h) return 0.0;
        const double d = h - distance;
        return coeff * d * d * d;
    }

    // grad_i W(x_i - x_j) = -45/(pi h^6) (h - |r|)^2 r/|r|.
    // Zero vector at r = 0 (no defined direction) and beyond the support.
    Vec3 gradient(const Vec3& r_vec) const {
        const double r = norm(r_vec);
        if (r <= 0.0 || r > h) return {};
        const double d = h - r;
        return r_vec * (grad_coeff * d * d / r);
    }
};

}  // namespace heathaze
