#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "fitkit/superres.hpp"

namespace fitkit::io {

// "FITSR1" | version u8 | basis u8 | media u8 | channels u8 | rows u32 |
// cols u32 | scalar count u8 | scalars f64 | LL data, row-major per channel.
// Multi-byte fields are little-endian. LL samples are f32 unless written
// with full precision, in which case they are f64; readers tell the two
// apart from the payload length.
inline constexpr char kContainerMagic[6] = {'F', 'I', 'T', 'S', 'R', '1'};

std::vector<std::uint8_t> serialize_payload(const SrPayload& p, bool full_precision = false);
SrPayload parse_payload(std::span<const std::uint8_t> bytes);

void write_payload(const std::filesystem::path& path, const SrPayload& p, bool full_precision = false);
SrPayload read_payload(const std::filesystem::path& path);

}  // namespace fitkit::io
