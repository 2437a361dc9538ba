#pragma once

#include <span>
#include <string>
#include <vector>

#include "fitkit/core.hpp"
#include "fitkit/multires.hpp"

namespace fitkit {

// keep: zero inside the dead zone, untouched outside (conventional "hard").
// shrink: zero inside, pulled toward 0 by lambda outside (conventional "soft").
enum class ThresholdMode { keep, shrink };

ThresholdMode parse_threshold_mode(const std::string& name);
std::string to_string(ThresholdMode m);

// median(|c|) / 0.6745
double mad_sigma(std::span<const double> c);

// mad_sigma(c) * sqrt(2 ln N)
double universal_threshold(std::span<const double> c);

std::vector<double> threshold(std::span<const double> c, double lambda, ThresholdMode mode);
Plane threshold(const Plane& c, double lambda, ThresholdMode mode);

// Directional smoothing. Every sample/pixel is processed: the input is padded
// by one (cyclic for signals, replicate for planes) before the window scan.
std::vector<double> ds1d(std::span<const double> s, int passes = 1);
Plane ds2d(const Plane& p, int passes = 1, bool round8 = false);
Image ds2d(const Image& img, int passes = 1, bool round8 = false);

// Mean filtering. The 1D form is the {0.9S, S, 1.1S} x 3 window mean, which
// reduces to a cyclic 3-tap moving average.
std::vector<double> mf1d(std::span<const double> s, int passes = 1);
Plane mf2d(const Plane& p, std::size_t m = 3, int passes = 1);
Image mf2d(const Image& img, std::size_t m = 3, int passes = 1);

struct SavGolFilter {
  std::vector<double> taps;  // n = -nL .. nR
  std::size_t n_left = 0;
  std::size_t n_right = 0;
  int degree = 0;
  int deriv = 0;
};

SavGolFilter savgol_coeffs_1d(std::size_t n_left, std::size_t n_right, int degree, int deriv = 0);
std::vector<double> savgol_apply_1d(std::span<const double> s, const SavGolFilter& f,
                                    PadMode mode = PadMode::mirror);

// One window x window filter per polynomial term, ordered by total degree
// then by descending x power: a00, a10, a01, a20, a11, a02, a30, ...
// Kernel rows run over y = -h..h, columns over x = -h..h.
std::vector<Plane> savgol_filters_2d(std::size_t window, int degree);

enum class WaveletMethod { keep, shrink, mf, ds };

WaveletMethod parse_wavelet_method(const std::string& name);
std::string to_string(WaveletMethod m);

struct WaveletDenoiseOptions {
  Basis basis = Basis::haar;
  int levels = 3;
  WaveletMethod method = WaveletMethod::shrink;
  int passes = 1;  // mf/ds only
};

std::vector<double> wavelet_denoise(std::span<const double> s, const WaveletDenoiseOptions& opts);
Signal wavelet_denoise(const Signal& s, const WaveletDenoiseOptions& opts);
Plane wavelet_denoise(const Plane& p, const WaveletDenoiseOptions& opts);
Image wavelet_denoise(const Image& img, const WaveletDenoiseOptions& opts);

}  // namespace fitkit
