#include "fitkit/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fitkit {

Plane::Plane(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw std::invalid_argument("Plane: data length does not match rows*cols");
  }
}

Plane Plane::transposed() const {
  Plane t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Image::Image(std::vector<Plane> ch) : channels(std::move(ch)) {
  for (const auto& p : channels) {
    if (p.rows() != channels.front().rows() || p.cols() != channels.front().cols()) {
      throw std::invalid_argument("Image: channel sizes differ");
    }
  }
}

Image::Image(std::size_t channel_count, std::size_t rows, std::size_t cols, double fill)
    : channels(channel_count, Plane(rows, cols, fill)) {}

void validate(const Signal& s) {
  if (s.size() < 2) throw std::invalid_argument("signal needs at least 2 samples");
  if (!(s.sample_rate > 0.0) || !std::isfinite(s.sample_rate)) {
    throw std::invalid_argument("signal sample rate must be positive");
  }
  for (double v : s.samples) {
    if (!std::isfinite(v)) throw std::invalid_argument("signal contains non-finite samples");
  }
}

void validate(const Image& img) {
  if (img.channel_count() != 1 && img.channel_count() != 3) {
    throw std::invalid_argument("image must have 1 or 3 channels");
  }
  if (img.rows() < 2 || img.cols() < 2) throw std::invalid_argument("image must be at least 2x2");
  for (const auto& p : img.channels) {
    for (double v : p.values()) {
      if (!std::isfinite(v)) throw std::invalid_argument("image contains non-finite values");
    }
  }
}

PadMode parse_pad_mode(const std::string& name) {
  if (name == "zero") return PadMode::zero;
  if (name == "cyclic") return PadMode::cyclic;
  if (name == "mirror") return PadMode::mirror;
  if (name == "replicate") return PadMode::replicate;
  throw std::invalid_argument("unknown padding mode: " + name);
}

std::string to_string(PadMode mode) {
  switch (mode) {
    case PadMode::zero: return "zero";
    case PadMode::cyclic: return "cyclic";
    case PadMode::mirror: return "mirror";
    case PadMode::replicate: return "replicate";
  }
  return "?";
}

std::size_t wrap_index(std::ptrdiff_t i, std::size_t n, PadMode mode) {
  const auto sn = static_cast<std::ptrdiff_t>(n);
  if (i >= 0 && i < sn) return static_cast<std::size_t>(i);
  switch (mode) {
    case PadMode::zero:
      return n;
    case PadMode::cyclic: {
      auto m = i % sn;
      if (m < 0) m += sn;
      return static_cast<std::size_t>(m);
    }
    case PadMode::replicate:
      return i < 0 ? 0 : n - 1;
    case PadMode::mirror: {
      if (n == 1) return 0;
      const auto period = 2 * (sn - 1);
      auto m = i % period;
      if (m < 0) m += period;
      if (m >= sn) m = period - m;
      return static_cast<std::size_t>(m);
    }
  }
  return n;
}

std::vector<double> pad(std::span<const double> x, std::size_t margin, PadMode mode) {
  const std::size_t n = x.size();
  std::vector<double> out(n + 2 * margin, 0.0);
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto src = wrap_index(static_cast<std::ptrdiff_t>(k) - static_cast<std::ptrdiff_t>(margin), n, mode);
    out[k] = src < n ? x[src] : 0.0;
  }
  return out;
}

Signal pad_signal(const Signal& s, std::size_t margin, PadMode mode) {
  validate(s);
  return Signal{pad(s.samples, margin, mode), s.sample_rate};
}

Signal crop_signal(const Signal& s, std::size_t margin) {
  if (s.size() < 2 * margin) throw std::invalid_argument("crop margin exceeds signal length");
  return Signal{std::vector<double>(s.samples.begin() + static_cast<std::ptrdiff_t>(margin),
                                    s.samples.end() - static_cast<std::ptrdiff_t>(margin)),
                s.sample_rate};
}

Plane pad_plane(const Plane& p, std::size_t margin, PadMode mode) {
  Plane out(p.rows() + 2 * margin, p.cols() + 2 * margin, 0.0);
  const auto m = static_cast<std::ptrdiff_t>(margin);
  for (std::size_t r = 0; r < out.rows(); ++r) {
    const auto sr = wrap_index(static_cast<std::ptrdiff_t>(r) - m, p.rows(), mode);
    if (sr >= p.rows()) continue;
    for (std::size_t c = 0; c < out.cols(); ++c) {
      const auto sc = wrap_index(static_cast<std::ptrdiff_t>(c) - m, p.cols(), mode);
      if (sc >= p.cols()) continue;
      out(r, c) = p(sr, sc);
    }
  }
  return out;
}

Plane crop_plane(const Plane& p, std::size_t margin) {
  if (p.rows() < 2 * margin || p.cols() < 2 * margin) {
    throw std::invalid_argument("crop margin exceeds plane size");
  }
  Plane out(p.rows() - 2 * margin, p.cols() - 2 * margin);
  for (std::size_t r = 0; r < out.rows(); ++r)
    for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) = p(r + margin, c + margin);
  return out;
}

Image pad_image(const Image& img, std::size_t margin, PadMode mode) {
  Image out;
  for (const auto& ch : img.channels) out.channels.push_back(pad_plane(ch, margin, mode));
  return out;
}

Image crop_image(const Image& img, std::size_t margin) {
  Image out;
  for (const auto& ch : img.channels) out.channels.push_back(crop_plane(ch, margin));
  return out;
}

EqualizeResult equalize(std::span<const double> x, double lo, double hi) {
  if (!(hi > lo)) throw std::invalid_argument("equalize: hi must exceed lo");
  EqualizeResult res;
  res.values.resize(x.size());
  if (x.empty()) return res;
  const auto [mn_it, mx_it] = std::minmax_element(x.begin(), x.end());
  const double mn = *mn_it;
  const double mx = *mx_it;
  if (mx == mn) {
    std::fill(res.values.begin(), res.values.end(), lo);
    res.degenerate = true;
    return res;
  }
  const double scale = (hi - lo) / (mx - mn);
  for (std::size_t i = 0; i < x.size(); ++i) res.values[i] = (x[i] - mn) * scale + lo;
  // Pin the endpoints so min/max land exactly on lo/hi.
  res.values[static_cast<std::size_t>(mn_it - x.begin())] = lo;
  res.values[static_cast<std::size_t>(mx_it - x.begin())] = hi;
  return res;
}

Plane equalize(const Plane& p, double lo, double hi, bool* degenerate) {
  auto res = equalize(p.values(), lo, hi);
  if (degenerate) *degenerate = res.degenerate;
  return Plane(p.rows(), p.cols(), std::move(res.values));
}

Signal equalize(const Signal& s, double lo, double hi, bool* degenerate) {
  auto res = equalize(s.samples, lo, hi);
  if (degenerate) *degenerate = res.degenerate;
  return Signal{std::move(res.values), s.sample_rate};
}

Image equalize(const Image& img, double lo, double hi) {
  Image out;
  for (const auto& ch : img.channels) out.channels.push_back(equalize(ch, lo, hi));
  return out;
}

std::vector<double> hadamard_quotient(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("hadamard_quotient: shape mismatch");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (b[i] == 0.0) {
      throw DivisionByZero("hadamard_quotient: division by zero at index " + std::to_string(i), i);
    }
    out[i] = a[i] / b[i];
  }
  return out;
}

std::vector<double> hadamard_product(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("hadamard_product: shape mismatch");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

double mean(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("mean of empty array");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double mean_abs(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("mean of empty array");
  double acc = 0.0;
  for (double v : x) acc += std::abs(v);
  return acc / static_cast<double>(x.size());
}

double min_value(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("min of empty array");
  return *std::min_element(x.begin(), x.end());
}

double max_value(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("max of empty array");
  return *std::max_element(x.begin(), x.end());
}

void require_odd_mask(std::size_t m, const char* what) {
  if (m < 3 || m % 2 == 0) {
    throw std::invalid_argument(std::string(what) + ": mask size must be odd and >= 3, got " + std::to_string(m));
  }
}

Plane correlate2d(const Plane& in, const Plane& kernel, PadMode mode) {
  if (kernel.rows() % 2 == 0 || kernel.cols() % 2 == 0) {
    throw std::invalid_argument("correlate2d: kernel dimensions must be odd");
  }
  const auto kr = static_cast<std::ptrdiff_t>(kernel.rows() / 2);
  const auto kc = static_cast<std::ptrdiff_t>(kernel.cols() / 2);
  const auto rows = static_cast<std::ptrdiff_t>(in.rows());
  const auto cols = static_cast<std::ptrdiff_t>(in.cols());
  struct Tap {
    std::ptrdiff_t dr, dc;
    double w;
  };
  std::vector<Tap> taps;
  for (std::size_t i = 0; i < kernel.rows(); ++i)
    for (std::size_t j = 0; j < kernel.cols(); ++j)
      if (kernel(i, j) != 0.0)
        taps.push_back({static_cast<std::ptrdiff_t>(i) - kr, static_cast<std::ptrdiff_t>(j) - kc, kernel(i, j)});

  Plane out(in.rows(), in.cols());
  const double* src = in.values().data();
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    const bool row_inside = r >= kr && r + kr < rows;
    for (std::ptrdiff_t c = 0; c < cols; ++c) {
      double acc = 0.0;
      if (row_inside && c >= kc && c + kc < cols) {
        for (const Tap& t : taps) acc += t.w * src[(r + t.dr) * cols + c + t.dc];
      } else {
        // Border: resolve each tap through the padding rule.
        for (const Tap& t : taps) {
          const auto sr = wrap_index(r + t.dr, in.rows(), mode);
          const auto sc = wrap_index(c + t.dc, in.cols(), mode);
          if (sr < in.rows() && sc < in.cols()) acc += t.w * in(sr, sc);
        }
      }
      out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = acc;
    }
  }
  return out;
}

std::vector<double> correlate1d(std::span<const double> x, std::span<const double> kernel, PadMode mode) {
  if (kernel.size() % 2 == 0) throw std::invalid_argument("correlate1d: kernel length must be odd");
  const auto half = static_cast<std::ptrdiff_t>(kernel.size() / 2);
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  std::vector<double> out(x.size(), 0.0);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double acc = 0.0;
    if (i >= half && i + half < n) {
      for (std::ptrdiff_t j = -half; j <= half; ++j) acc += kernel[static_cast<std::size_t>(j + half)] * x[static_cast<std::size_t>(i + j)];
    } else {
      for (std::ptrdiff_t j = -half; j <= half; ++j) {
        const auto src = wrap_index(i + j, x.size(), mode);
        if (src < x.size()) acc += kernel[static_cast<std::size_t>(j + half)] * x[src];
      }
    }
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

Plane quantize8(const Plane& p) {
  Plane out(p.rows(), p.cols());
  for (std::size_t i = 0; i < p.size(); ++i) {
    out.values()[i] = std::clamp(std::round(p.values()[i]), 0.0, 255.0);
  }
  return out;
}

Image quantize8(const Image& img) {
  Image out;
  for (const auto& ch : img.channels) out.channels.push_back(quantize8(ch));
  return out;
}

}  // namespace fitkit
