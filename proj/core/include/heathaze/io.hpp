#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "heathaze/particle.hpp"

namespace heathaze {

// Shortest round-trip decimal form; identical bytes for identical doubles,
// which is what the determinism gate compares.
std::string format_double(double v);

// Versioned structured-text particle dump:
//   heathaze-particles v1
//   frame <f> count <n>
//   index mass px py pz vx vy vz density temperature
//   <rows...>
void write_particle_dump(std::ostream& os, const ParticleList& particles, long frame);
ParticleList read_particle_dump(std::istream& is, long* frame_out = nullptr);

// Minimal CSV emitter; caller provides already-formatted cells.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path, const std::vector<std::string>& header);
    ~CsvWriter();
    void row(const std::vector<std::string>& cells);
    void close();

private:
    struct Impl;
    Impl* impl_;
};

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace heathaze
