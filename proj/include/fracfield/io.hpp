#pragma once

#include "fracfield/grid.hpp"

#include <string>
#include <vector>

namespace fracfield {

// FRCF field file, version 1, little-endian:
//   magic "FRCF" | u32 version | u8 dim | u32 points_per_axis | f64 box_length
//   | f64 s | payload: row-major f64 values of length M^dim.
// Round trips are bit-exact.
struct LoadedField {
    Field field;
    double s = 0.0;
};

void save_field(const std::string& path, const Field& u, double s);
LoadedField load_field(const std::string& path);

// Sequence manifest: one path per line, relative to the manifest directory,
// '#' comments and blank lines skipped.
std::vector<std::string> read_manifest(const std::string& path);
std::vector<LoadedField> load_sequence(const std::string& manifest_path);

// SHA-1 hex digest, used as the content hash of run inputs.
std::string sha1_hex(const void* data, std::size_t len);
std::string sha1_hex(const std::string& data);

} // namespace fracfield
