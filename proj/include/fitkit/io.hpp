#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fitkit/core.hpp"

namespace fitkit::io {

// Malformed or unreadable input data.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Write to a temporary sibling, then rename over the target.
void write_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_atomic(const std::filesystem::path& path, const std::string& text);
std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path);

// One sample per line, 17 significant digits, LF terminated.
Signal read_signal_csv(const std::filesystem::path& path, double sample_rate = 1.0);
void write_signal_csv(const std::filesystem::path& path, std::span<const double> samples);
std::string format_signal_csv(std::span<const double> samples);
Signal parse_signal_csv(const std::string& text, double sample_rate = 1.0);

// Binary P5 (gray) / P6 (RGB), maxval up to 255. Written at maxval 255
// after rounding and clamping.
Image parse_pnm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_pnm(const Image& img);
Image read_pnm(const std::filesystem::path& path);
void write_pnm(const std::filesystem::path& path, const Image& img);

// Headerless little-endian float32, row-major.
Plane read_raw_f32(const std::filesystem::path& path, std::size_t rows, std::size_t cols);
void write_raw_f32(const std::filesystem::path& path, const Plane& p);

// Linear min-max map to [0, 255] for viewing real-valued maps.
Plane to_display8(const Plane& p);

}  // namespace fitkit::io
