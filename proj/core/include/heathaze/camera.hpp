#pragma once

#include <cmath>
#include <optional>
#include <utility>

#include "heathaze/errors.hpp"
#include "heathaze/vec3.hpp"

namespace heathaze {

// Pinhole camera. Image origin is the top-left pixel (0,0), rows top to
// bottom; continuous pixel coordinates put integer values at pixel centers.
struct Camera {
    Vec3 position;
    Vec3 right{1.0, 0.0, 0.0};
    Vec3 up{0.0, 1.0, 0.0};
    Vec3 forward{0.0, 0.0, 1.0};
    double vfov = 0.7853981633974483;  // radians
    int width = 256;
    int height = 256;

    static Camera look_at(const Vec3& position, const Vec3& target, const Vec3& up_hint,
                          double vfov, int width, int height) {
        Camera cam;
        cam.position = position;
        cam.forward = target - position;
        if (norm(cam.forward) == 0.0) throw_parameter("Camera: target equals position");
        cam.forward = normalized(cam.forward);
        const Vec3 r = cross(cam.forward, up_hint);
        if (norm(r) < 1e-12) throw_parameter("Camera: view direction parallel to up hint");
        cam.right = normalized(r);
        cam.up = cross(cam.right, cam.forward);
        cam.vfov = vfov;
        cam.width = width;
        cam.height = height;
        cam.validate();
        return cam;
    }

    void validate() const {
        if (width < 1 || height < 1) throw_parameter("Camera: image size must be positive");
        if (vfov <= 0.0 || vfov >= 3.141592653589793) throw_parameter("Camera: bad vertical FOV");
        const double tol = 1e-9;
        if (std::abs(norm(right) - 1.0) > tol || std::abs(norm(up) - 1.0) > tol ||
            std::abs(norm(forward) - 1.0) > tol || std::abs(dot(right, up)) > tol ||
            std::abs(dot(right, forward)) > tol || std::abs(dot(up, forward)) > tol)
            throw_parameter("Camera: basis is not orthonormal");
    }

    double tan_half_vfov() const { return std::tan(0.5 * vfov); }
    double aspect() const { return static_cast<double>(width) / height; }

    // Unit ray through continuous pixel coordinate (u, v).
    Vec3 ray_direction(double u, double v) const {
        const double th = tan_half_vfov();
        const double sx = (2.0 * (u + 0.5) / width - 1.0) * aspect() * th;
        const double sy = (1.0 - 2.0 * (v + 0.5) / height) * th;
        return normalized(right * sx + up * sy + forward);
    }

    // Continuous pixel coordinate of a world point; nullopt behind the camera.
    std::optional<std::pair<double, double>> project(const Vec3& point) const {
        const Vec3 d = point - position;
        const double depth = dot(d, forward);
        if (depth <= 0.0) return std::nullopt;
        const double th = tan_half_vfov();
        const double sx = dot(d, right) / depth;
        const double sy = dot(d, up) / depth;
        const double u = ((sx / (aspect() * th)) + 1.0) * 0.5 * width - 0.5;
        const double v = (1.0 - sy / th) * 0.5 * height - 0.5;
        return std::make_pair(u, v);
    }
};

}  // namespace heathaze
