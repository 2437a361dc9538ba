#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "fitkit/core.hpp"

namespace fitkit {

double mae(std::span<const double> x, std::span<const double> y);
double mse(std::span<const double> x, std::span<const double> y);
// Colour images: channel-summed error over rows * cols * channels.
double mae(const Image& x, const Image& y);
double mse(const Image& x, const Image& y);

inline constexpr double kPsnrInfinite = std::numeric_limits<double>::infinity();

// 10 log10(max^2 / mse); +infinity when mse is zero.
double psnr_from_mse(double mse_value, double max_val);
double psnr(std::span<const double> x, std::span<const double> y, double max_val);
double psnr(const Image& x, const Image& y, double max_val = 255.0);

double compression_ratio(double uncompressed, double compressed);
double percentage_space_saving(double cr);

struct Histogram {
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;
  double lo = 0.0;
  double hi = 0.0;
};

// Uniform bins over [lo, hi]; values outside are clamped into the end bins.
Histogram histogram(std::span<const double> x, std::size_t bins, double lo, double hi);
// 256 bins over [0, 255] (8-bit data).
Histogram histogram8(std::span<const double> x);
// 256 bins over [min(x), max(x)].
Histogram histogram_minmax(std::span<const double> x, std::size_t bins = 256);

double entropy(const Histogram& h);

enum class Binning { fixed8, minmax };

double entropy(std::span<const double> x, Binning b = Binning::fixed8);
double joint_entropy(std::span<const double> x, std::span<const double> y, Binning b = Binning::fixed8);
// H(X) + H(Y) - H(X, Y), clamped at 0 when it dips below by <= 1e-9.
double mutual_information(std::span<const double> x, std::span<const double> y, Binning b = Binning::fixed8);

// (max - min) / (max + min); 0 when max + min is 0.
double michelson_contrast(std::span<const double> x);

struct Spectrum {
  std::vector<double> frequency;  // Hz
  std::vector<double> power;
};

// Direct DFT of the zero-padded signal, |X|^2 / (nfft * L), bins 0..nfft/2-1.
Spectrum psd(const Signal& s, std::size_t nfft);

// Full nfft-point DFT power |X_k|^2, for reference checks.
std::vector<double> dft_power(std::span<const double> x, std::size_t nfft);

}  // namespace fitkit
