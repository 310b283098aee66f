#include "heathaze/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "heathaze/errors.hpp"

namespace heathaze {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_particle_dump(std::ostream& os, const ParticleList& particles, long frame) {
    os << "heathaze-particles v1\n";
    os << "frame " << frame << " count " << particles.size() << '\n';
    os << "index mass px py pz vx vy vz density temperature\n";
    for (std::size_t i = 0; i < particles.size(); ++i) {
        const Particle& p = particles[i];
        os << i << ' ' << format_double(p.mass) << ' ' << format_double(p.position.x) << ' '
           << format_double(p.position.y) << ' ' << format_double(p.position.z) << ' '
           << format_double(p.velocity.x) << ' ' << format_double(p.velocity.y) << ' '
           << format_double(p.velocity.z) << ' ' << format_double(p.density) << ' '
           << format_double(p.temperature) << '\n';
    }
}

ParticleList read_particle_dump(std::istream& is, long* frame_out) {
    std::string line;
    std::getline(is, line);
    if (line != "heathaze-particles v1")
        throw_io("particle dump: unrecognized header '" + line + "'");
    std::string word;
    long frame = 0;
    std::size_t count = 0;
    is >> word >> frame;
    if (word != "frame") throw_io("particle dump: expected 'frame'");
    is >> word >> count;
    if (word != "count") throw_io("particle dump: expected 'count'");
    std::getline(is, line);  // rest of the count line
    std::getline(is, line);  // column header
    ParticleList particles(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t idx = 0;
        Particle& p = particles[i];
        if (!(is >> idx >> p.mass >> p.position.x >> p.position.y >> p.position.z >>
              p.velocity.x >> p.velocity.y >> p.velocity.z >> p.density >> p.temperature))
            throw_io("particle dump: truncated at row " + std::to_string(i));
    }
    if (frame_out) *frame_out = frame;
    return particles;
}

struct CsvWriter::Impl {
    std::ofstream os;
    std::string path;
};

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : impl_(new Impl) {
    impl_->path = path;
    impl_->os.open(path);
    if (!impl_->os) {
        delete impl_;
        throw_io("cannot open for writing: " + path);
    }
    row(header);
}

CsvWriter::~CsvWriter() {
    try {
        close();
    } catch (...) {
        // destructor must not throw; an explicit close() reports failures
    }
    delete impl_;
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) impl_->os << ',';
        impl_->os << cells[i];
    }
    impl_->os << '\n';
}

void CsvWriter::close() {
    if (impl_ && impl_->os.is_open()) {
        impl_->os.flush();
        if (!impl_->os) throw_io("write failure: " + impl_->path);
        impl_->os.close();
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw_io("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw_io("cannot open for writing: " + path);
    os << content;
    if (!os) throw_io("write failure: " + path);
}

}  // namespace heathaze
