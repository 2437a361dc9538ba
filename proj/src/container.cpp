#include "fitkit/container.hpp"

#include <bit>
#include <cstring>

#include "fitkit/io.hpp"

namespace fitkit::io {

namespace {

template <typename U>
void put_le(std::vector<std::uint8_t>& out, U v) {
  for (std::size_t k = 0; k < sizeof(U); ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}

template <typename U>
U get_le(std::span<const std::uint8_t> b, std::size_t& pos) {
  if (b.size() - pos < sizeof(U)) throw FormatError("SR container: truncated");
  U v = 0;
  for (std::size_t k = 0; k < sizeof(U); ++k) v |= static_cast<U>(b[pos + k]) << (8 * k);
  pos += sizeof(U);
  return v;
}

}  // namespace

std::vector<std::uint8_t> serialize_payload(const SrPayload& p, bool full_precision) {
  if (p.ll.empty() || p.ll.size() > 255) throw std::invalid_argument("SR container: channel count out of range");
  if (p.scalars.size() > 255) throw std::invalid_argument("SR container: too many scalars");
  std::vector<std::uint8_t> out(std::begin(kContainerMagic), std::end(kContainerMagic));
  out.push_back(static_cast<std::uint8_t>(p.version));
  out.push_back(static_cast<std::uint8_t>(p.basis == Basis::haar ? 0 : 1));
  out.push_back(static_cast<std::uint8_t>(p.media));
  out.push_back(static_cast<std::uint8_t>(p.ll.size()));
  put_le<std::uint32_t>(out, p.rows);
  put_le<std::uint32_t>(out, p.cols);
  out.push_back(static_cast<std::uint8_t>(p.scalars.size()));
  for (double s : p.scalars) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(s));
  for (const Plane& ch : p.ll) {
    for (double v : ch.values()) {
      if (full_precision) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
      else put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    }
  }
  return out;
}

SrPayload parse_payload(std::span<const std::uint8_t> b) {
  if (b.size() < sizeof kContainerMagic || std::memcmp(b.data(), kContainerMagic, sizeof kContainerMagic) != 0) {
    throw FormatError("SR container: bad magic");
  }
  std::size_t pos = sizeof kContainerMagic;
  SrPayload p;
  p.version = get_le<std::uint8_t>(b, pos);
  if (p.version < 1 || p.version > 3) throw FormatError("SR container: bad version " + std::to_string(p.version));
  const auto basis = get_le<std::uint8_t>(b, pos);
  if (basis > 1) throw FormatError("SR container: bad basis byte");
  p.basis = basis == 0 ? Basis::haar : Basis::coslet;
  const auto media = get_le<std::uint8_t>(b, pos);
  if (media > 1) throw FormatError("SR container: bad media byte");
  p.media = static_cast<Media>(media);
  const std::size_t channels = get_le<std::uint8_t>(b, pos);
  p.rows = get_le<std::uint32_t>(b, pos);
  p.cols = get_le<std::uint32_t>(b, pos);
  const std::size_t nscalars = get_le<std::uint8_t>(b, pos);
  for (std::size_t i = 0; i < nscalars; ++i) p.scalars.push_back(std::bit_cast<double>(get_le<std::uint64_t>(b, pos)));

  if (channels == 0) throw FormatError("SR container: zero channels");
  if (p.cols == 0 || p.cols % 2 != 0) throw FormatError("SR container: bad column count");
  std::size_t ll_rows = 1;
  if (p.media == Media::image) {
    if (p.rows == 0 || p.rows % 2 != 0) throw FormatError("SR container: bad row count");
    ll_rows = p.rows / 2;
  } else if (p.rows != 1 || channels != 1) {
    throw FormatError("SR container: signal payload must be one row, one channel");
  }
  const std::size_t ll_cols = p.cols / 2;
  const std::size_t count = channels * ll_rows * ll_cols;
  const std::size_t remaining = b.size() - pos;
  bool f64 = false;
  if (remaining == count * 8) f64 = true;
  else if (remaining != count * 4) {
    throw FormatError("SR container: payload length " + std::to_string(remaining) + " does not match " +
                      std::to_string(count) + " samples");
  }
  for (std::size_t c = 0; c < channels; ++c) {
    Plane ch(ll_rows, ll_cols);
    for (auto& v : ch.values()) {
      v = f64 ? std::bit_cast<double>(get_le<std::uint64_t>(b, pos))
              : static_cast<double>(std::bit_cast<float>(get_le<std::uint32_t>(b, pos)));
    }
    p.ll.push_back(std::move(ch));
  }
  return p;
}

void write_payload(const std::filesystem::path& path, const SrPayload& p, bool full_precision) {
  write_atomic(path, serialize_payload(p, full_precision));
}

SrPayload read_payload(const std::filesystem::path& path) { return parse_payload(read_bytes(path)); }

}  // namespace fitkit::io
