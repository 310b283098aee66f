#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "heathaze/scene.hpp"

namespace heathaze {

// 8-bit RGB raster, row-major from the top-left pixel.
class Image {
public:
    Image() = default;
    Image(int width, int height) : width_(width), height_(height),
                                   data_(static_cast<std::size_t>(width) * height * 3, 0) {}

    int width() const { return width_; }
    int height() const { return height_; }
    const std::vector<std::uint8_t>& data() const { return data_; }

    void set(int x, int y, const Color& c);
    const std::uint8_t* pixel(int x, int y) const {
        return data_.data() + (static_cast<std::size_t>(y) * width_ + x) * 3;
    }

    bool operator==(const Image& o) const {
        return width_ == o.width_ && height_ == o.height_ && data_ == o.data_;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

// Per-pixel 32-bit step counts for the marching benchmark.
class StepMap {
public:
    StepMap() = default;
    StepMap(int width, int height) : width_(width), height_(height),
                                     counts_(static_cast<std::size_t>(width) * height, 0) {}

    int width() const { return width_; }
    int height() const { return height_; }
    std::uint32_t& at(int x, int y) { return counts_[static_cast<std::size_t>(y) * width_ + x]; }
    std::uint32_t at(int x, int y) const {
        return counts_[static_cast<std::size_t>(y) * width_ + x];
    }
    std::uint64_t total() const;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint32_t> counts_;
};

// Binary PPM (P6, maxval 255).
void write_ppm(const std::string& path, const Image& image);
Image read_ppm(const std::string& path);

// PGM-style ASCII dump of raw 32-bit counts (P2 layout with the true maximum
// as maxval; values can exceed the 16-bit PGM limit, documented in README).
void write_step_map(const std::string& path, const StepMap& map);

// Root-mean-square difference over all 8-bit channels, in [0,1] units.
double image_rmse(const Image& a, const Image& b);

}  // namespace heathaze
