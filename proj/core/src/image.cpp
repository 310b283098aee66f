#include "heathaze/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "heathaze/errors.hpp"

namespace heathaze {

namespace {
std::uint8_t quantize(double c) {
    const double v = std::clamp(c, 0.0, 1.0) * 255.0;
    return static_cast<std::uint8_t>(std::lround(v));
}
}  // namespace

void Image::set(int x, int y, const Color& c) {
    std::uint8_t* px = data_.data() + (static_cast<std::size_t>(y) * width_ + x) * 3;
    px[0] = quantize(c.r);
    px[1] = quantize(c.g);
    px[2] = quantize(c.b);
}

std::uint64_t StepMap::total() const {
    std::uint64_t sum = 0;
    for (std::uint32_t c : counts_) sum += c;
    return sum;
}

void write_ppm(const std::string& path, const Image& image) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw_io("cannot open for writing: " + path);
    os << "P6\n" << image.width() << ' ' << image.height() << "\n255\n";
    os.write(reinterpret_cast<const char*>(image.data().data()),
             static_cast<std::streamsize>(image.data().size()));
    if (!os) throw_io("write failure: " + path);
}

Image read_ppm(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw_io("cannot open for reading: " + path);
    std::string magic;
    int w = 0, h = 0, maxval = 0;
    is >> magic >> w >> h >> maxval;
    if (magic != "P6" || maxval != 255 || w < 1 || h < 1)
        throw_io("unsupported PPM: " + path);
    is.get();  // single whitespace after maxval
    Image img(w, h);
    std::vector<std::uint8_t> buf(static_cast<std::size_t>(w) * h * 3);
    is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!is) throw_io("truncated PPM: " + path);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const std::uint8_t* px = buf.data() + (static_cast<std::size_t>(y) * w + x) * 3;
            img.set(x, y, Color{px[0] / 255.0, px[1] / 255.0, px[2] / 255.0});
        }
    return img;
}

void write_step_map(const std::string& path, const StepMap& map) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw_io("cannot open for writing: " + path);
    std::uint32_t maxval = 0;
    for (int y = 0; y < map.height(); ++y)
        for (int x = 0; x < map.width(); ++x) maxval = std::max(maxval, map.at(x, y));
    os << "P2\n" << map.width() << ' ' << map.height() << '\n' << maxval << '\n';
    for (int y = 0; y < map.height(); ++y) {
        for (int x = 0; x < map.width(); ++x) {
            if (x) os << ' ';
            os << map.at(x, y);
        }
        os << '\n';
    }
    if (!os) throw_io("write failure: " + path);
}

double image_rmse(const Image& a, const Image& b) {
    if (a.width() != b.width() || a.height() != b.height())
        throw_parameter("image_rmse: size mismatch");
    const auto& da = a.data();
    const auto& db = b.data();
    double sum = 0.0;
    for (std::size_t i = 0; i < da.size(); ++i) {
        const double d = (static_cast<double>(da[i]) - static_cast<double>(db[i])) / 255.0;
        sum += d * d;
    }
    return da.empty() ? 0.0 : std::sqrt(sum / static_cast<double>(da.size()));
}

}  // namespace heathaze
