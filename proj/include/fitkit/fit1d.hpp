#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fitkit/core.hpp"

namespace fitkit {

enum class Fit1DVariant { raw, equalized, averaged, mask_eq, mask_av, diff_eq, diff_av };
enum class NonOverlapVariant { raw, eq, av };
enum class FitForm { sqrt_conj, abs };

Fit1DVariant parse_fit1d_variant(const std::string& name);
std::string to_string(Fit1DVariant v);
NonOverlapVariant parse_nonoverlap_variant(const std::string& name);
std::string to_string(NonOverlapVariant v);
FitForm parse_fit_form(const std::string& name);

// Frequency-in-time series in Hz (cycles/sample when fs = 1).
struct FitSeries {
  enum class Alignment { per_sample, per_pair };

  std::vector<double> hz;
  Alignment alignment = Alignment::per_sample;
  std::string variant;
  bool abs_mean_fallback = false;  // averaged variants: mean was ~0, mean |s| used instead
  bool degenerate_input = false;   // equalized variants: constant input
};

struct Fit1DOptions {
  std::size_t mask_size = 3;  // M, odd; used by the mask variants
  PadMode padding = PadMode::cyclic;
};

// Overlapping (per-sample) FIT. Output length equals the input length.
FitSeries fit_overlap(const Signal& s, Fit1DVariant variant, const Fit1DOptions& opts = {});

// Non-overlapping FIT from the level-1 Haar pair (L, H). Output length N/2.
FitSeries fit_nonoverlap(const Signal& s, NonOverlapVariant variant, FitForm form = FitForm::abs);

// Scaling (D = ones/M) and wavelet (Pi = [-1 .. -1 0 1 .. 1]/(M-1)) masks.
std::vector<double> scaling_mask(std::size_t m);
std::vector<double> wavelet_mask(std::size_t m);

// Denominator used by the averaged variants: mean(s), or mean(|s|) when
// the plain mean is below 1e-12 in magnitude.
double averaged_denominator(std::span<const double> s, bool* used_abs_fallback = nullptr);

// Abscissae (fractional sample index) where `levels` equidistant horizontal
// lines spanning [min, max] cross the signal. Sorted, strictly increasing.
std::vector<double> witness_bars(const Signal& s, std::size_t levels);

enum class PhaseMode { overlap, nonoverlap };
PhaseMode parse_phase_mode(const std::string& name);

// (x, x') pairs: overlap uses (s_n, (s_{n+1}-s_{n-1})/2) with cyclic padding;
// non-overlap uses the Haar pair (l_k, h_k).
std::vector<std::pair<double, double>> phase_plane(const Signal& s, PhaseMode mode);

}  // namespace fitkit
