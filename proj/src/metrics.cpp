#include "fitkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fitkit {

namespace {

void require_same(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": shape mismatch");
  if (a == 0) throw std::invalid_argument(std::string(what) + ": empty input");
}

void require_same(const Image& x, const Image& y, const char* what) {
  if (x.channel_count() != y.channel_count() || x.rows() != y.rows() || x.cols() != y.cols()) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch");
  }
}

std::size_t bin_of(double v, std::size_t bins, double lo, double hi) {
  if (hi <= lo) return 0;
  const double t = (v - lo) / (hi - lo) * static_cast<double>(bins);
  if (!(t > 0.0)) return 0;
  return std::min(static_cast<std::size_t>(t), bins - 1);
}

std::vector<std::size_t> bin_indices(std::span<const double> x, Binning b) {
  double lo = 0.0;
  double hi = 255.0;
  if (b == Binning::minmax) {
    lo = min_value(x);
    hi = max_value(x);
  }
  std::vector<std::size_t> idx(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) idx[i] = bin_of(x[i], 256, lo, hi);
  return idx;
}

double entropy_of_counts(const std::vector<std::uint64_t>& counts, std::uint64_t total) {
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace

double mae(std::span<const double> x, std::span<const double> y) {
  require_same(x.size(), y.size(), "mae");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::abs(x[i] - y[i]);
  return acc / static_cast<double>(x.size());
}

double mse(std::span<const double> x, std::span<const double> y) {
  require_same(x.size(), y.size(), "mse");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    acc += d * d;
  }
  return acc / static_cast<double>(x.size());
}

double mae(const Image& x, const Image& y) {
  require_same(x, y, "mae");
  double acc = 0.0;
  for (std::size_t c = 0; c < x.channel_count(); ++c) {
    acc += mae(x.channels[c].values(), y.channels[c].values());
  }
  return acc / static_cast<double>(x.channel_count());
}

double mse(const Image& x, const Image& y) {
  require_same(x, y, "mse");
  double acc = 0.0;
  for (std::size_t c = 0; c < x.channel_count(); ++c) {
    acc += mse(x.channels[c].values(), y.channels[c].values());
  }
  return acc / static_cast<double>(x.channel_count());
}

double psnr_from_mse(double mse_value, double max_val) {
  if (mse_value == 0.0) return kPsnrInfinite;
  return 10.0 * std::log10(max_val * max_val / mse_value);
}

double psnr(std::span<const double> x, std::span<const double> y, double max_val) {
  return psnr_from_mse(mse(x, y), max_val);
}

double psnr(const Image& x, const Image& y, double max_val) { return psnr_from_mse(mse(x, y), max_val); }

double compression_ratio(double uncompressed, double compressed) {
  if (!(uncompressed > 0.0)) throw std::invalid_argument("compression_ratio: sizes must be positive");
  if (!(compressed > 0.0)) throw std::invalid_argument("compression_ratio: compressed size is zero");
  return uncompressed / compressed;
}

double percentage_space_saving(double cr) {
  if (!(cr > 0.0)) throw std::invalid_argument("percentage_space_saving: CR must be positive");
  return (1.0 - 1.0 / cr) * 100.0;
}

Histogram histogram(std::span<const double> x, std::size_t bins, double lo, double hi) {
  if (bins == 0) throw std::invalid_argument("histogram: need at least one bin");
  Histogram h;
  h.counts.assign(bins, 0);
  h.lo = lo;
  h.hi = hi;
  for (double v : x) ++h.counts[bin_of(v, bins, lo, hi)];
  h.total = x.size();
  return h;
}

Histogram histogram8(std::span<const double> x) { return histogram(x, 256, 0.0, 255.0); }

Histogram histogram_minmax(std::span<const double> x, std::size_t bins) {
  if (x.empty()) return histogram(x, bins, 0.0, 0.0);
  return histogram(x, bins, min_value(x), max_value(x));
}

double entropy(const Histogram& h) {
  if (h.total == 0) return 0.0;
  return entropy_of_counts(h.counts, h.total);
}

double entropy(std::span<const double> x, Binning b) {
  if (x.empty()) throw std::invalid_argument("entropy: empty input");
  const auto idx = bin_indices(x, b);
  std::vector<std::uint64_t> counts(256, 0);
  for (auto i : idx) ++counts[i];
  return entropy_of_counts(counts, x.size());
}

double joint_entropy(std::span<const double> x, std::span<const double> y, Binning b) {
  require_same(x.size(), y.size(), "joint_entropy");
  const auto ix = bin_indices(x, b);
  const auto iy = bin_indices(y, b);
  std::vector<std::uint64_t> counts(256 * 256, 0);
  for (std::size_t i = 0; i < ix.size(); ++i) ++counts[ix[i] * 256 + iy[i]];
  return entropy_of_counts(counts, x.size());
}

double mutual_information(std::span<const double> x, std::span<const double> y, Binning b) {
  const double mi = entropy(x, b) + entropy(y, b) - joint_entropy(x, y, b);
  if (mi < 0.0 && mi >= -1e-9) return 0.0;
  return mi;
}

double michelson_contrast(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("michelson_contrast: empty input");
  const double lo = min_value(x);
  const double hi = max_value(x);
  if (hi + lo == 0.0) return 0.0;
  return (hi - lo) / (hi + lo);
}

std::vector<double> dft_power(std::span<const double> x, std::size_t nfft) {
  if (nfft < x.size()) throw std::invalid_argument("dft: nfft shorter than signal");
  std::vector<double> power(nfft);
  const double w = 2.0 * std::numbers::pi / static_cast<double>(nfft);
  for (std::size_t k = 0; k < nfft; ++k) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t n = 0; n < x.size(); ++n) {
      // (k * n) mod nfft keeps the angle small for large indices.
      const double a = w * static_cast<double>((k * n) % nfft);
      re += x[n] * std::cos(a);
      im -= x[n] * std::sin(a);
    }
    power[k] = re * re + im * im;
  }
  return power;
}

Spectrum psd(const Signal& s, std::size_t nfft) {
  validate(s);
  const auto full = dft_power(s.samples, nfft);
  Spectrum out;
  const double norm = static_cast<double>(nfft) * static_cast<double>(s.size());
  for (std::size_t k = 0; k < nfft / 2; ++k) {
    out.frequency.push_back(s.sample_rate * static_cast<double>(k) / static_cast<double>(nfft));
    out.power.push_back(full[k] / norm);
  }
  return out;
}

}  // namespace fitkit
