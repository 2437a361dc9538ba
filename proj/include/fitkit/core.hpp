#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fitkit {

// Raised when an element-wise quotient meets a zero divisor. Carries the
// flat index (and row/column for 2D data) of the first offending element.
class DivisionByZero : public std::domain_error {
 public:
  DivisionByZero(const std::string& what, std::size_t index, std::size_t row = 0, std::size_t col = 0)
      : std::domain_error(what), index_(index), row_(row), col_(col) {}
  std::size_t index() const noexcept { return index_; }
  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t index_;
  std::size_t row_;
  std::size_t col_;
};

// Dense row-major real matrix. One colour channel of an image, a subband,
// or a 2D convolution kernel.
class Plane {
 public:
  Plane() = default;
  Plane(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Plane(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }
  const std::vector<double>& vector() const noexcept { return data_; }

  Plane transposed() const;

  bool operator==(const Plane&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Uniformly sampled real signal.
struct Signal {
  std::vector<double> samples;
  double sample_rate = 1.0;

  std::size_t size() const noexcept { return samples.size(); }
};

// Image with one (gray) or three (RGB) channels of equal size. Values are
// kept in double precision; 8-bit quantisation happens only on export.
struct Image {
  std::vector<Plane> channels;

  Image() = default;
  explicit Image(std::vector<Plane> ch);
  Image(std::size_t channel_count, std::size_t rows, std::size_t cols, double fill = 0.0);

  std::size_t channel_count() const noexcept { return channels.size(); }
  std::size_t rows() const noexcept { return channels.empty() ? 0 : channels.front().rows(); }
  std::size_t cols() const noexcept { return channels.empty() ? 0 : channels.front().cols(); }
  std::size_t sample_count() const noexcept { return channel_count() * rows() * cols(); }
};

void validate(const Signal& s);
void validate(const Image& img);

enum class PadMode { zero, cyclic, mirror, replicate };

PadMode parse_pad_mode(const std::string& name);
std::string to_string(PadMode mode);

// Index into [0, n) for an out-of-range position under the given mode.
// Returns n for zero padding (caller treats it as "outside, value 0").
std::size_t wrap_index(std::ptrdiff_t i, std::size_t n, PadMode mode);

std::vector<double> pad(std::span<const double> x, std::size_t margin, PadMode mode);
Signal pad_signal(const Signal& s, std::size_t margin, PadMode mode);
Signal crop_signal(const Signal& s, std::size_t margin);

Plane pad_plane(const Plane& p, std::size_t margin, PadMode mode = PadMode::zero);
Plane crop_plane(const Plane& p, std::size_t margin);
Image pad_image(const Image& img, std::size_t margin, PadMode mode = PadMode::zero);
Image crop_image(const Image& img, std::size_t margin);

struct EqualizeResult {
  std::vector<double> values;
  bool degenerate = false;  // input was constant, output is all-lo
};

// Affine min-max map onto [lo, hi]. Signals use [1, 2], 8-bit images [1, 256].
EqualizeResult equalize(std::span<const double> x, double lo, double hi);
Plane equalize(const Plane& p, double lo, double hi, bool* degenerate = nullptr);
Signal equalize(const Signal& s, double lo, double hi, bool* degenerate = nullptr);
Image equalize(const Image& img, double lo, double hi);

inline constexpr double kSignalEqLo = 1.0;
inline constexpr double kSignalEqHi = 2.0;
inline constexpr double kImageEqLo = 1.0;
inline constexpr double kImageEqHi = 256.0;

// Element-wise a ./ b. Throws DivisionByZero naming the first zero divisor.
std::vector<double> hadamard_quotient(std::span<const double> a, std::span<const double> b);
std::vector<double> hadamard_product(std::span<const double> a, std::span<const double> b);

double mean(std::span<const double> x);
double mean_abs(std::span<const double> x);
double min_value(std::span<const double> x);
double max_value(std::span<const double> x);

void require_odd_mask(std::size_t m, const char* what);

// Same-size correlation (no kernel flip) of a plane with an odd-sized
// kernel; borders are handled by padding with `mode` and cropping back.
Plane correlate2d(const Plane& in, const Plane& kernel, PadMode mode = PadMode::zero);

// Same-size 1D correlation with an odd-length kernel.
std::vector<double> correlate1d(std::span<const double> x, std::span<const double> kernel, PadMode mode);

// Round and clamp to [0, 255]; used only when exporting 8-bit data.
Plane quantize8(const Plane& p);
Image quantize8(const Image& img);

}  // namespace fitkit
