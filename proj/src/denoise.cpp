#include "fitkit/denoise.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace fitkit {

ThresholdMode parse_threshold_mode(const std::string& name) {
  if (name == "keep") return ThresholdMode::keep;
  if (name == "shrink") return ThresholdMode::shrink;
  throw std::invalid_argument("unknown threshold mode: " + name);
}

std::string to_string(ThresholdMode m) { return m == ThresholdMode::keep ? "keep" : "shrink"; }

double mad_sigma(std::span<const double> c) {
  if (c.empty()) throw std::invalid_argument("mad_sigma: empty input");
  std::vector<double> a(c.size());
  std::transform(c.begin(), c.end(), a.begin(), [](double v) { return std::abs(v); });
  const std::size_t mid = a.size() / 2;
  std::nth_element(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(mid), a.end());
  double med = a[mid];
  if (a.size() % 2 == 0) {
    const double lower = *std::max_element(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(mid));
    med = 0.5 * (med + lower);
  }
  return med / 0.6745;
}

double universal_threshold(std::span<const double> c) {
  if (c.size() < 2) throw std::invalid_argument("universal_threshold: need at least 2 coefficients");
  return mad_sigma(c) * std::sqrt(2.0 * std::log(static_cast<double>(c.size())));
}

std::vector<double> threshold(std::span<const double> c, double lambda, ThresholdMode mode) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("threshold: lambda must be finite and >= 0");
  std::vector<double> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double v = c[i];
    if (std::abs(v) <= lambda && lambda > 0.0) {
      out[i] = 0.0;
    } else if (mode == ThresholdMode::keep) {
      out[i] = v;
    } else {
      out[i] = std::copysign(std::abs(v) - lambda, v);
    }
  }
  return out;
}

Plane threshold(const Plane& c, double lambda, ThresholdMode mode) {
  return Plane(c.rows(), c.cols(), threshold(c.values(), lambda, mode));
}

namespace {

std::vector<double> ds1d_pass(std::span<const double> s) {
  const std::size_t n = s.size();
  const auto p = pad(s, 2, PadMode::cyclic);
  const std::size_t len = p.size();
  std::vector<double> d(len, 0.0);
  for (std::size_t j = 1; j + 1 < len; ++j) d[j] = (p[j + 1] - p[j - 1]) / 2.0;
  std::vector<double> u(len);
  double acc = 0.0;
  for (std::size_t j = 0; j < len; ++j) u[j] = acc += p[j];

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t t = i + 2;
    const double cand[4] = {
        (d[t - 1] + p[t] + u[t + 1]) / 3.0,
        (d[t] + p[t] + u[t]) / 3.0,
        (d[t + 1] + p[t] + u[t - 1]) / 3.0,
        (p[t - 1] + p[t] + p[t + 1]) / 3.0,
    };
    std::size_t best = 0;
    for (std::size_t k = 1; k < 4; ++k) {
      if (std::abs(cand[k] - p[t]) < std::abs(cand[best] - p[t])) best = k;
    }
    out[i] = cand[best];
  }
  return out;
}

Plane ds2d_pass(const Plane& in, bool round8) {
  const Plane p = pad_plane(in, 1, PadMode::replicate);
  Plane out(in.rows(), in.cols());
  for (std::size_t r = 1; r <= in.rows(); ++r) {
    for (std::size_t c = 1; c <= in.cols(); ++c) {
      const double v = p(r, c);
      const double cand[4] = {
          (p(r + 1, c - 1) + v + p(r - 1, c + 1)) / 3.0,
          (p(r - 1, c) + v + p(r + 1, c)) / 3.0,
          (p(r - 1, c - 1) + v + p(r + 1, c + 1)) / 3.0,
          (p(r, c - 1) + v + p(r, c + 1)) / 3.0,
      };
      std::size_t best = 0;
      for (std::size_t k = 1; k < 4; ++k) {
        if (std::abs(cand[k] - v) < std::abs(cand[best] - v)) best = k;
      }
      out(r - 1, c - 1) = round8 ? std::round(cand[best]) : cand[best];
    }
  }
  return out;
}

}  // namespace

std::vector<double> ds1d(std::span<const double> s, int passes) {
  if (s.size() < 3) throw std::invalid_argument("ds1d: need at least 3 samples");
  std::vector<double> out(s.begin(), s.end());
  for (int k = 0; k < passes; ++k) out = ds1d_pass(out);
  return out;
}

Plane ds2d(const Plane& p, int passes, bool round8) {
  if (p.rows() < 3 || p.cols() < 3) throw std::invalid_argument("ds2d: plane must be at least 3x3");
  Plane out = p;
  for (int k = 0; k < passes; ++k) out = ds2d_pass(out, round8);
  return out;
}

Image ds2d(const Image& img, int passes, bool round8) {
  Image out;
  for (const auto& ch : img.channels) out.channels.push_back(ds2d(ch, passes, round8));
  return out;
}

std::vector<double> mf1d(std::span<const double> s, int passes) {
  if (s.size() < 3) throw std::invalid_argument("mf1d: need at least 3 samples");
  std::vector<double> out(s.begin(), s.end());
  for (int k = 0; k < passes; ++k) {
    const auto p = pad(out, 1, PadMode::cyclic);
    for (std::size_t t = 0; t < out.size(); ++t) {
      double acc = 0.0;
      for (std::size_t j = t; j < t + 3; ++j) acc += 0.9 * p[j] + p[j] + 1.1 * p[j];
      out[t] = acc / 9.0;
    }
  }
  return out;
}

Plane mf2d(const Plane& p, std::size_t m, int passes) {
  require_odd_mask(m, "mf2d");
  const Plane kernel(m, m, 1.0 / static_cast<double>(m * m));
  Plane out = p;
  for (int k = 0; k < passes; ++k) out = correlate2d(out, kernel, PadMode::replicate);
  return out;
}

Image mf2d(const Image& img, std::size_t m, int passes) {
  Image out;
  for (const auto& ch : img.channels) out.channels.push_back(mf2d(ch, m, passes));
  return out;
}

SavGolFilter savgol_coeffs_1d(std::size_t n_left, std::size_t n_right, int degree, int deriv) {
  if (degree < 0 || deriv < 0 || deriv > degree) throw std::invalid_argument("savgol: need 0 <= deriv <= degree");
  const std::size_t n = n_left + n_right + 1;
  if (n < static_cast<std::size_t>(degree) + 1) throw std::invalid_argument("savgol: window too short for degree");

  Eigen::MatrixXd a(static_cast<Eigen::Index>(n), degree + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) - static_cast<double>(n_left);
    double pw = 1.0;
    for (int j = 0; j <= degree; ++j) {
      a(static_cast<Eigen::Index>(i), j) = pw;
      pw *= x;
    }
  }
  const Eigen::MatrixXd pinv =
      a.colPivHouseholderQr().solve(Eigen::MatrixXd::Identity(a.rows(), a.rows()));

  double fact = 1.0;
  for (int k = 2; k <= deriv; ++k) fact *= k;

  SavGolFilter f;
  f.n_left = n_left;
  f.n_right = n_right;
  f.degree = degree;
  f.deriv = deriv;
  f.taps.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.taps[i] = fact * pinv(deriv, static_cast<Eigen::Index>(i));
  return f;
}

std::vector<double> savgol_apply_1d(std::span<const double> s, const SavGolFilter& f, PadMode mode) {
  if (f.taps.size() > s.size()) throw std::invalid_argument("savgol_apply_1d: filter longer than signal");
  const std::size_t margin = std::max(f.n_left, f.n_right);
  const auto p = pad(s, margin, mode);
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    double acc = 0.0;
    const std::size_t start = i + margin - f.n_left;
    for (std::size_t k = 0; k < f.taps.size(); ++k) acc += f.taps[k] * p[start + k];
    out[i] = acc;
  }
  return out;
}

std::vector<Plane> savgol_filters_2d(std::size_t window, int degree) {
  if (window % 2 == 0 || window < 3) throw std::invalid_argument("savgol_filters_2d: window must be odd and >= 3");
  if (degree < 0) throw std::invalid_argument("savgol_filters_2d: negative degree");
  std::vector<std::pair<int, int>> terms;  // (x power, y power)
  for (int k = 0; k <= degree; ++k) {
    for (int px = k; px >= 0; --px) terms.emplace_back(px, k - px);
  }
  const std::size_t n = window * window;
  if (n < terms.size()) throw std::invalid_argument("savgol_filters_2d: window too small for degree");

  const int h = static_cast<int>(window / 2);
  Eigen::MatrixXd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(terms.size()));
  for (std::size_t r = 0; r < window; ++r) {
    for (std::size_t c = 0; c < window; ++c) {
      const double y = static_cast<double>(static_cast<int>(r) - h);
      const double x = static_cast<double>(static_cast<int>(c) - h);
      for (std::size_t t = 0; t < terms.size(); ++t) {
        a(static_cast<Eigen::Index>(r * window + c), static_cast<Eigen::Index>(t)) =
            std::pow(x, terms[t].first) * std::pow(y, terms[t].second);
      }
    }
  }
  const Eigen::MatrixXd coeffs =
      a.colPivHouseholderQr().solve(Eigen::MatrixXd::Identity(a.rows(), a.rows()));

  std::vector<Plane> filters;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    Plane k(window, window);
    for (std::size_t i = 0; i < n; ++i) k.values()[i] = coeffs(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i));
    filters.push_back(std::move(k));
  }
  return filters;
}

WaveletMethod parse_wavelet_method(const std::string& name) {
  if (name == "keep") return WaveletMethod::keep;
  if (name == "shrink") return WaveletMethod::shrink;
  if (name == "mf") return WaveletMethod::mf;
  if (name == "ds") return WaveletMethod::ds;
  throw std::invalid_argument("unknown wavelet denoising method: " + name);
}

std::string to_string(WaveletMethod m) {
  switch (m) {
    case WaveletMethod::keep: return "keep";
    case WaveletMethod::shrink: return "shrink";
    case WaveletMethod::mf: return "mf";
    case WaveletMethod::ds: return "ds";
  }
  return "?";
}

std::vector<double> wavelet_denoise(std::span<const double> s, const WaveletDenoiseOptions& opts) {
  Pyramid1D pyr = split_levels(s, opts.basis, opts.levels);
  switch (opts.method) {
    case WaveletMethod::keep:
    case WaveletMethod::shrink: {
      const auto mode = opts.method == WaveletMethod::keep ? ThresholdMode::keep : ThresholdMode::shrink;
      for (auto& d : pyr.details) d = threshold(d, universal_threshold(d), mode);
      break;
    }
    case WaveletMethod::mf:
      pyr.details.front() = mf1d(pyr.details.front(), opts.passes);
      break;
    case WaveletMethod::ds:
      pyr.details.front() = ds1d(pyr.details.front(), opts.passes);
      break;
  }
  return merge_levels(pyr);
}

Signal wavelet_denoise(const Signal& s, const WaveletDenoiseOptions& opts) {
  validate(s);
  return Signal{wavelet_denoise(std::span<const double>(s.samples), opts), s.sample_rate};
}

Plane wavelet_denoise(const Plane& p, const WaveletDenoiseOptions& opts) {
  Pyramid2D pyr = split_levels(p, opts.basis, opts.levels);
  switch (opts.method) {
    case WaveletMethod::keep:
    case WaveletMethod::shrink: {
      const auto mode = opts.method == WaveletMethod::keep ? ThresholdMode::keep : ThresholdMode::shrink;
      for (auto& level : pyr.details) {
        for (auto& band : level) band = threshold(band, universal_threshold(band.values()), mode);
      }
      break;
    }
    case WaveletMethod::mf:
      for (auto& band : pyr.details.front()) band = mf2d(band, 3, opts.passes);
      break;
    case WaveletMethod::ds:
      for (auto& band : pyr.details.front()) band = ds2d(band, opts.passes, false);
      break;
  }
  return merge_levels(pyr);
}

Image wavelet_denoise(const Image& img, const WaveletDenoiseOptions& opts) {
  validate(img);
  Image out;
  for (const auto& ch : img.channels) out.channels.push_back(wavelet_denoise(ch, opts));
  return out;
}

}  // namespace fitkit
