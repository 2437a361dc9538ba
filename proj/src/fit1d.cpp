#include "fitkit/fit1d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fitkit/multires.hpp"

namespace fitkit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kZeroMean = 1e-12;

double sample_at(std::span<const double> s, std::ptrdiff_t i, PadMode mode) {
  const auto k = wrap_index(i, s.size(), mode);
  return k < s.size() ? s[k] : 0.0;
}

std::vector<double> centered_diff(std::span<const double> s, PadMode mode) {
  const auto n = static_cast<std::ptrdiff_t>(s.size());
  std::vector<double> d(s.size());
  for (std::ptrdiff_t i = 1; i + 1 < n; ++i) d[static_cast<std::size_t>(i)] = (s[static_cast<std::size_t>(i + 1)] - s[static_cast<std::size_t>(i - 1)]) / 2.0;
  for (std::ptrdiff_t i : {std::ptrdiff_t{0}, n - 1}) {
    d[static_cast<std::size_t>(i)] = (sample_at(s, i + 1, mode) - sample_at(s, i - 1, mode)) / 2.0;
  }
  return d;
}

std::vector<double> forward_diff(std::span<const double> s, PadMode mode) {
  const auto n = static_cast<std::ptrdiff_t>(s.size());
  std::vector<double> d(s.size());
  for (std::ptrdiff_t i = 0; i + 1 < n; ++i) d[static_cast<std::size_t>(i)] = s[static_cast<std::size_t>(i + 1)] - s[static_cast<std::size_t>(i)];
  d[static_cast<std::size_t>(n - 1)] = sample_at(s, n, mode) - s[static_cast<std::size_t>(n - 1)];
  return d;
}

// |num| / |den| / 2pi, computed in place over num.
std::vector<double> magnitude_ratio(std::vector<double> num, std::span<const double> den) {
  for (std::size_t n = 0; n < num.size(); ++n) {
    if (den[n] == 0.0) {
      throw DivisionByZero("FIT: zero denominator at sample " + std::to_string(n), n);
    }
    num[n] = std::abs(num[n]) / std::abs(den[n]) / kTwoPi;
  }
  return num;
}

std::vector<double> scaled_by(std::vector<double> num, double den) {
  if (den == 0.0) {
    // Only reachable for an all-zero signal, whose numerator is zero too.
    std::fill(num.begin(), num.end(), 0.0);
    return num;
  }
  const double k = 1.0 / (std::abs(den) * kTwoPi);
  for (auto& v : num) v = std::abs(v) * k;
  return num;
}

// Derivatives are per sample; fs converts cycles/sample to Hz.
void to_hertz(std::vector<double>& hz, double fs) {
  if (fs == 1.0) return;
  for (auto& v : hz) v *= fs;
}

}  // namespace

Fit1DVariant parse_fit1d_variant(const std::string& name) {
  if (name == "raw") return Fit1DVariant::raw;
  if (name == "equalized" || name == "eq") return Fit1DVariant::equalized;
  if (name == "averaged" || name == "av") return Fit1DVariant::averaged;
  if (name == "mask_eq") return Fit1DVariant::mask_eq;
  if (name == "mask_av") return Fit1DVariant::mask_av;
  if (name == "diff_eq") return Fit1DVariant::diff_eq;
  if (name == "diff_av") return Fit1DVariant::diff_av;
  throw std::invalid_argument("unknown FIT variant: " + name);
}

std::string to_string(Fit1DVariant v) {
  switch (v) {
    case Fit1DVariant::raw: return "raw";
    case Fit1DVariant::equalized: return "equalized";
    case Fit1DVariant::averaged: return "averaged";
    case Fit1DVariant::mask_eq: return "mask_eq";
    case Fit1DVariant::mask_av: return "mask_av";
    case Fit1DVariant::diff_eq: return "diff_eq";
    case Fit1DVariant::diff_av: return "diff_av";
  }
  return "?";
}

NonOverlapVariant parse_nonoverlap_variant(const std::string& name) {
  if (name == "raw") return NonOverlapVariant::raw;
  if (name == "eq" || name == "equalized") return NonOverlapVariant::eq;
  if (name == "av" || name == "averaged") return NonOverlapVariant::av;
  throw std::invalid_argument("unknown non-overlap variant: " + name);
}

std::string to_string(NonOverlapVariant v) {
  switch (v) {
    case NonOverlapVariant::raw: return "raw";
    case NonOverlapVariant::eq: return "eq";
    case NonOverlapVariant::av: return "av";
  }
  return "?";
}

FitForm parse_fit_form(const std::string& name) {
  if (name == "sqrt_conj") return FitForm::sqrt_conj;
  if (name == "abs") return FitForm::abs;
  throw std::invalid_argument("unknown FIT form: " + name);
}

PhaseMode parse_phase_mode(const std::string& name) {
  if (name == "overlap") return PhaseMode::overlap;
  if (name == "nonoverlap") return PhaseMode::nonoverlap;
  throw std::invalid_argument("unknown phase-plane mode: " + name);
}

std::vector<double> scaling_mask(std::size_t m) {
  require_odd_mask(m, "scaling_mask");
  return std::vector<double>(m, 1.0 / static_cast<double>(m));
}

std::vector<double> wavelet_mask(std::size_t m) {
  require_odd_mask(m, "wavelet_mask");
  std::vector<double> pi(m, 0.0);
  const std::size_t half = m / 2;
  const double w = 1.0 / static_cast<double>(m - 1);
  for (std::size_t j = 0; j < half; ++j) {
    pi[j] = -w;
    pi[m - 1 - j] = w;
  }
  return pi;
}

double averaged_denominator(std::span<const double> s, bool* used_abs_fallback) {
  double avg = mean(s);
  bool fallback = false;
  if (std::abs(avg) <= kZeroMean) {
    avg = mean_abs(s);
    fallback = true;
  }
  if (used_abs_fallback) *used_abs_fallback = fallback;
  return avg;
}

FitSeries fit_overlap(const Signal& s, Fit1DVariant variant, const Fit1DOptions& opts) {
  validate(s);
  FitSeries out;
  out.variant = to_string(variant);
  out.alignment = FitSeries::Alignment::per_sample;
  const auto& x = s.samples;

  switch (variant) {
    case Fit1DVariant::raw: {
      out.hz = magnitude_ratio(centered_diff(x, opts.padding), x);
      break;
    }
    case Fit1DVariant::equalized: {
      auto eq = equalize(x, kSignalEqLo, kSignalEqHi);
      out.degenerate_input = eq.degenerate;
      out.hz = magnitude_ratio(centered_diff(eq.values, opts.padding), eq.values);
      break;
    }
    case Fit1DVariant::averaged: {
      const double den = averaged_denominator(x, &out.abs_mean_fallback);
      out.hz = scaled_by(centered_diff(x, opts.padding), den);
      break;
    }
    case Fit1DVariant::mask_eq: {
      require_odd_mask(opts.mask_size, "fit_overlap mask_eq");
      auto eq = equalize(x, kSignalEqLo, kSignalEqHi);
      out.degenerate_input = eq.degenerate;
      const auto num = correlate1d(eq.values, wavelet_mask(opts.mask_size), opts.padding);
      const auto den = correlate1d(eq.values, scaling_mask(opts.mask_size), opts.padding);
      out.hz = magnitude_ratio(num, den);
      break;
    }
    case Fit1DVariant::mask_av: {
      require_odd_mask(opts.mask_size, "fit_overlap mask_av");
      const auto num = correlate1d(x, wavelet_mask(opts.mask_size), opts.padding);
      out.hz = scaled_by(num, averaged_denominator(x, &out.abs_mean_fallback));
      break;
    }
    case Fit1DVariant::diff_eq: {
      auto eq = equalize(x, kSignalEqLo, kSignalEqHi);
      out.degenerate_input = eq.degenerate;
      out.hz = magnitude_ratio(forward_diff(eq.values, opts.padding), eq.values);
      break;
    }
    case Fit1DVariant::diff_av: {
      const double den = averaged_denominator(x, &out.abs_mean_fallback);
      out.hz = scaled_by(forward_diff(x, opts.padding), den);
      break;
    }
  }
  to_hertz(out.hz, s.sample_rate);
  return out;
}

FitSeries fit_nonoverlap(const Signal& s, NonOverlapVariant variant, FitForm form) {
  validate(s);
  if (s.size() % 2 != 0) throw std::invalid_argument("fit_nonoverlap: signal length must be even");
  FitSeries out;
  out.variant = "nonoverlap_" + to_string(variant);
  out.alignment = FitSeries::Alignment::per_pair;

  std::vector<double> base = s.samples;
  if (variant == NonOverlapVariant::eq) {
    auto eq = equalize(base, kSignalEqLo, kSignalEqHi);
    out.degenerate_input = eq.degenerate;
    base = std::move(eq.values);
  }
  const auto sb = haar1d_forward(base);
  const double av = variant == NonOverlapVariant::av ? averaged_denominator(sb.low, &out.abs_mean_fallback) : 0.0;

  out.hz.resize(sb.low.size());
  for (std::size_t k = 0; k < sb.low.size(); ++k) {
    const double h = sb.high[k];
    const double den = variant == NonOverlapVariant::av ? av : sb.low[k];
    if (den == 0.0) {
      if (variant == NonOverlapVariant::av) {
        out.hz[k] = 0.0;
        continue;
      }
      throw DivisionByZero("fit_nonoverlap: zero approximation coefficient at " + std::to_string(k), k);
    }
    if (form == FitForm::sqrt_conj) {
      // sqrt(w * conj(w)) with w = i h / den, purely imaginary.
      const double w = h / den;
      out.hz[k] = std::sqrt(w * w) / kTwoPi;
    } else {
      out.hz[k] = std::abs(h) / std::abs(den) / kTwoPi;
    }
  }
  to_hertz(out.hz, s.sample_rate);
  return out;
}

std::vector<double> witness_bars(const Signal& s, std::size_t levels) {
  validate(s);
  if (levels < 2) throw std::invalid_argument("witness_bars: levels must be >= 2");
  const auto& x = s.samples;
  const double lo = min_value(x);
  const double hi = max_value(x);
  std::vector<double> bars;
  if (hi == lo) return bars;

  for (std::size_t j = 0; j < levels; ++j) {
    const double y = j + 1 == levels ? hi : lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(levels - 1);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == y) {
        bars.push_back(static_cast<double>(i));
        continue;
      }
      if (i + 1 < x.size()) {
        const double a = x[i] - y;
        const double b = x[i + 1] - y;
        if (a * b < 0.0) bars.push_back(static_cast<double>(i) + a / (a - b));
      }
    }
  }
  std::sort(bars.begin(), bars.end());
  bars.erase(std::unique(bars.begin(), bars.end()), bars.end());
  return bars;
}

std::vector<std::pair<double, double>> phase_plane(const Signal& s, PhaseMode mode) {
  validate(s);
  std::vector<std::pair<double, double>> pts;
  if (mode == PhaseMode::overlap) {
    const auto d = centered_diff(s.samples, PadMode::cyclic);
    pts.reserve(s.size());
    for (std::size_t n = 0; n < s.size(); ++n) pts.emplace_back(s.samples[n], d[n]);
  } else {
    if (s.size() % 2 != 0) throw std::invalid_argument("phase_plane: non-overlap mode needs even length");
    const auto sb = haar1d_forward(s.samples);
    pts.reserve(sb.low.size());
    for (std::size_t k = 0; k < sb.low.size(); ++k) pts.emplace_back(sb.low[k], sb.high[k]);
  }
  return pts;
}

}  // namespace fitkit
