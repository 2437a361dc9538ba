#include "fitkit/io.hpp"

#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace fitkit::io {

namespace fs = std::filesystem;

void write_atomic(const fs::path& path, std::span<const std::uint8_t> bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

void write_atomic(const fs::path& path, const std::string& text) {
  write_atomic(path, std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string format_signal_csv(std::span<const double> samples) {
  std::string out;
  out.reserve(samples.size() * 24);
  char buf[64];
  for (double v : samples) {
    const int n = std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out.append(buf, static_cast<std::size_t>(n));
  }
  return out;
}

Signal parse_signal_csv(const std::string& text, double sample_rate) {
  Signal s;
  s.sample_rate = sample_rate;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t");
    const char* b = line.data() + first;
    const char* e = line.data() + last + 1;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e) {
      throw FormatError("CSV line " + std::to_string(lineno) + ": not a number: '" + line + "'");
    }
    s.samples.push_back(v);
  }
  return s;
}

Signal read_signal_csv(const fs::path& path, double sample_rate) {
  const auto bytes = read_bytes(path);
  return parse_signal_csv(std::string(bytes.begin(), bytes.end()), sample_rate);
}

void write_signal_csv(const fs::path& path, std::span<const double> samples) {
  write_atomic(path, format_signal_csv(samples));
}

namespace {

class PnmReader {
 public:
  explicit PnmReader(std::span<const std::uint8_t> bytes) : b_(bytes) {}

  std::string token() {
    skip_space_and_comments();
    std::string t;
    while (pos_ < b_.size() && !std::isspace(b_[pos_]) && b_[pos_] != '#') t.push_back(static_cast<char>(b_[pos_++]));
    if (t.empty()) throw FormatError("PNM: truncated header");
    return t;
  }

  std::size_t number() {
    const std::string t = token();
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) throw FormatError("PNM: bad header field '" + t + "'");
    return v;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  void single_space() {
    if (pos_ >= b_.size() || !std::isspace(b_[pos_])) throw FormatError("PNM: missing whitespace before raster");
    ++pos_;
  }

  std::size_t pos() const { return pos_; }

 private:
  void skip_space_and_comments() {
    while (pos_ < b_.size()) {
      if (std::isspace(b_[pos_])) {
        ++pos_;
      } else if (b_[pos_] == '#') {
        while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 0;
};

}  // namespace

Image parse_pnm(std::span<const std::uint8_t> bytes) {
  PnmReader r(bytes);
  const std::string magic = r.token();
  std::size_t channels = 0;
  if (magic == "P5") channels = 1;
  else if (magic == "P6") channels = 3;
  else throw FormatError("PNM: unsupported magic '" + magic + "' (need P5 or P6)");
  const std::size_t cols = r.number();
  const std::size_t rows = r.number();
  const std::size_t maxval = r.number();
  if (cols == 0 || rows == 0) throw FormatError("PNM: zero dimension");
  if (maxval == 0 || maxval > 255) throw FormatError("PNM: unsupported maxval " + std::to_string(maxval));
  r.single_space();
  const std::size_t need = rows * cols * channels;
  if (bytes.size() - r.pos() < need) {
    throw FormatError("PNM: short file, need " + std::to_string(need) + " raster bytes, have " +
                      std::to_string(bytes.size() - r.pos()));
  }
  Image img(channels, rows, cols);
  const std::uint8_t* px = bytes.data() + r.pos();
  const double scale = 255.0 / static_cast<double>(maxval);
  for (std::size_t i = 0; i < rows * cols; ++i) {
    for (std::size_t c = 0; c < channels; ++c) {
      const double v = static_cast<double>(px[i * channels + c]);
      img.channels[c].values()[i] = maxval == 255 ? v : std::round(v * scale);
    }
  }
  return img;
}

std::vector<std::uint8_t> encode_pnm(const Image& img) {
  validate(img);
  const std::size_t ch = img.channel_count();
  const std::string header = std::string(ch == 1 ? "P5" : "P6") + "\n" + std::to_string(img.cols()) + " " +
                             std::to_string(img.rows()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  const Image q = quantize8(img);
  const std::size_t n = img.rows() * img.cols();
  out.reserve(out.size() + n * ch);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < ch; ++c) out.push_back(static_cast<std::uint8_t>(q.channels[c].values()[i]));
  }
  return out;
}

Image read_pnm(const fs::path& path) { return parse_pnm(read_bytes(path)); }

void write_pnm(const fs::path& path, const Image& img) { write_atomic(path, encode_pnm(img)); }

Plane read_raw_f32(const fs::path& path, std::size_t rows, std::size_t cols) {
  const auto bytes = read_bytes(path);
  if (bytes.size() != rows * cols * 4) {
    throw FormatError("raw f32: expected " + std::to_string(rows * cols * 4) + " bytes, got " +
                      std::to_string(bytes.size()));
  }
  Plane p(rows, cols);
  for (std::size_t i = 0; i < rows * cols; ++i) {
    std::uint32_t u = 0;
    for (int k = 3; k >= 0; --k) u = (u << 8) | bytes[i * 4 + static_cast<std::size_t>(k)];
    p.values()[i] = static_cast<double>(std::bit_cast<float>(u));
  }
  return p;
}

void write_raw_f32(const fs::path& path, const Plane& p) {
  std::vector<std::uint8_t> out;
  out.reserve(p.size() * 4);
  for (double v : p.values()) {
    const auto u = std::bit_cast<std::uint32_t>(static_cast<float>(v));
    for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(u >> (8 * k)));
  }
  write_atomic(path, out);
}

Plane to_display8(const Plane& p) {
  Plane out(p.rows(), p.cols());
  if (p.empty()) return out;
  const double lo = min_value(p.values());
  const double hi = max_value(p.values());
  if (hi == lo) return out;
  for (std::size_t i = 0; i < p.size(); ++i) out.values()[i] = std::round((p.values()[i] - lo) / (hi - lo) * 255.0);
  return out;
}

}  // namespace fitkit::io
