// Acceptance checks. One PASS/FAIL line per criterion; exit status is the
// number of failures.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "fitkit/container.hpp"
#include "fitkit/denoise.hpp"
#include "fitkit/edges.hpp"
#include "fitkit/fit1d.hpp"
#include "fitkit/fit2d.hpp"
#include "fitkit/io.hpp"
#include "fitkit/metrics.hpp"
#include "fitkit/multires.hpp"
#include "fitkit/qsa.hpp"
#include "fitkit/superres.hpp"
#include "fitkit/synth.hpp"
#include "oracles.hpp"

using namespace fitkit;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double norm2(const std::vector<double>& v) {
  double a = 0.0;
  for (double x : v) a += x * x;
  return std::sqrt(a);
}

double peak_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// ---------------------------------------------------------------------------

Outcome haar_exactness() {
  constexpr double kTol = 1e-12;
  constexpr double kBudget = 5.0;
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<std::size_t> half(1, 256);
  double worst = 0.0;
  const auto t0 = Clock::now();
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t rows = 2 * half(rng);
    const std::size_t cols = 2 * half(rng);
    const auto x = oracle::random_vector(rng, rows * cols, -255, 255);
    worst = std::max(worst, oracle::max_abs_diff(haar1d_inverse(haar1d_forward(x)), x));
    const Plane p(rows, cols, x);
    worst = std::max(worst, oracle::max_abs_diff(haar2d_inverse(haar2d_forward(p)), p));
  }
  const double t = seconds_since(t0);
  return {worst <= kTol && t < kBudget, "max err " + fmt("%.3g", worst) + ", " + fmt("%.2f", t) + " s"};
}

Outcome coslet_bijection() {
  constexpr double kRelTol = 1e-9;
  constexpr double kParsevalTol = 1e-9;
  std::mt19937_64 rng(102);
  const Plane p = oracle::random_plane(rng, 256, 256, -1, 1);
  const Plane back = coslet2d_inverse(coslet2d_forward(p));
  std::vector<double> diff(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) diff[i] = back.vector()[i] - p.vector()[i];
  const double rel = norm2(diff) / norm2(p.vector());

  const double e = std::pow(norm2(p.vector()), 2);
  const double parseval2d = std::abs(std::pow(norm2(dct2d(p).vector()), 2) - e) / e;
  const auto x = oracle::random_vector(rng, 1000, -1, 1);
  const double ex = std::pow(norm2(x), 2);
  const double parseval1d = std::abs(std::pow(norm2(dct1d(x)), 2) - ex) / ex;
  const double parseval = std::max(parseval1d, parseval2d);
  return {rel <= kRelTol && parseval <= kParsevalTol,
          "round-trip rel " + fmt("%.3g", rel) + ", parseval rel " + fmt("%.3g", parseval)};
}

Outcome savgol_tables() {
  constexpr double kTol = 1e-3;
  struct Row {
    std::size_t nl, nr;
    int degree;
    std::vector<double> taps;
  };
  const std::vector<Row> rows = {
      {2, 2, 2, {-0.086, 0.343, 0.486, 0.343, -0.086}},
      {3, 1, 2, {-0.143, 0.171, 0.343, 0.371, 0.257}},
      {4, 0, 2, {0.086, -0.143, -0.086, 0.257, 0.886}},
      {5, 5, 2, {-0.084, 0.021, 0.103, 0.161, 0.196, 0.207, 0.196, 0.161, 0.103, 0.021, -0.084}},
      {4, 4, 4, {0.035, -0.128, 0.070, 0.315, 0.417, 0.315, 0.070, -0.128, 0.035}},
      {5, 5, 4, {0.042, -0.105, -0.023, 0.140, 0.280, 0.333, 0.280, 0.140, -0.023, -0.105, 0.042}},
  };
  double worst1 = 0.0;
  for (const auto& r : rows)
    worst1 = std::max(worst1, oracle::max_abs_diff(savgol_coeffs_1d(r.nl, r.nr, r.degree).taps, r.taps));

  const Plane c00(5, 5, std::vector<double>{-0.0743, 0.0114, 0.0400, 0.0114, -0.0743,  //
                                            0.0114,  0.0971, 0.1257, 0.0971, 0.0114,   //
                                            0.0400,  0.1257, 0.1543, 0.1257, 0.0400,   //
                                            0.0114,  0.0971, 0.1257, 0.0971, 0.0114,   //
                                            -0.0743, 0.0114, 0.0400, 0.0114, -0.0743});
  // The reference derivative matrices are laid out with rows along x, so
  // they are compared transposed.
  const Plane c10(5, 5, std::vector<double>{0.0738,  -0.0119, -0.0405, -0.0119, 0.0738,   //
                                            -0.1048, -0.1476, -0.1619, -0.1476, -0.1048,  //
                                            0,       0,       0,       0,       0,        //
                                            0.1048,  0.1476,  0.1619,  0.1476,  0.1048,   //
                                            -0.0738, 0.0119,  0.0405,  0.0119,  -0.0738});
  const Plane c01(5, 5, std::vector<double>{0.0738,  -0.1048, 0, 0.1048, -0.0738,  //
                                            -0.0119, -0.1476, 0, 0.1476, 0.0119,   //
                                            -0.0405, -0.1619, 0, 0.1619, 0.0405,   //
                                            -0.0119, -0.1476, 0, 0.1476, 0.0119,   //
                                            0.0738,  -0.1048, 0, 0.1048, -0.0738});
  const auto f = savgol_filters_2d(5, 3);
  const double worst2 = std::max({oracle::max_abs_diff(f[0], c00), oracle::max_abs_diff(f[1], c10.transposed()),
                                   oracle::max_abs_diff(f[2], c01.transposed())});
  return {worst1 <= kTol && worst2 <= kTol,
          "1D max tap err " + fmt("%.2g", worst1) + ", 2D max entry err " + fmt("%.2g", worst2)};
}

Outcome deblur_masks() {
  constexpr double kConstraintTol = 1e-9;
  double worst = 0.0;
  auto check = [&](const DeblurMask& m) {
    const double n2 = static_cast<double>(m.n * m.n);
    worst = std::max(worst, std::abs((n2 - 1.0) * m.alpha + m.beta - 1.0));
    double sum = 0.0;
    const Plane k = m.kernel();
    for (double v : k.values()) sum += v;
    worst = std::max(worst, std::abs(sum - 1.0));
  };

  for (std::size_t n = 3; n <= 15; n += 2)
    for (double beta : {1.0, 1.2, 1.63, 2.5}) check(deblur_mask_from_beta(n, beta));
  const DeblurMask preset = preset_deblur_mask();
  check(preset);
  const bool preset_ok = preset.n == 7 && std::abs(preset.alpha - (1.0 - kPresetDeblurBeta) / 48.0) < 1e-15;

  // Corpus: blocky and smooth synthetic scenes, each blurred by a 3x3 mean.
  std::vector<TrainingPair> pairs;
  std::mt19937_64 rng(104);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 4; ++i) {
    Plane p(48, 48);
    const double fx = 0.05 + 0.2 * u(rng);
    const double fy = 0.05 + 0.2 * u(rng);
    for (std::size_t r = 0; r < 48; ++r)
      for (std::size_t c = 0; c < 48; ++c) {
        const bool block = (r / 12 + c / 12 + static_cast<std::size_t>(i)) % 2 == 0;
        p(r, c) = 128.0 + 50.0 * std::sin(fx * static_cast<double>(r)) * std::cos(fy * static_cast<double>(c)) +
                  (block ? 60.0 : -60.0);
      }
    pairs.emplace_back(p, mf2d(p, 3, 1));
  }

  GaConfig cfg;
  cfg.seed = 2024;
  const GaResult ga = ga_tune_mask(pairs, cfg);
  const GaResult again = ga_tune_mask(pairs, cfg);
  check(ga.mask);
  const bool deterministic = ga.mse == again.mse && ga.mask.alpha == again.mask.alpha;

  std::mt19937_64 rr(105);
  std::uniform_real_distribution<double> ua(cfg.alpha_lo, cfg.alpha_hi);
  std::uniform_real_distribution<double> ub(cfg.beta_lo, cfg.beta_hi);
  double best_random = INFINITY;
  for (int i = 0; i < 20; ++i) {
    const DeblurMask m = chromosome_to_mask(ua(rr), ub(rr), cfg.max_n);
    check(m);
    best_random = std::min(best_random, deblur_fitness(pairs, m));
  }
  const bool pass = worst <= kConstraintTol && preset_ok && deterministic && ga.mse < best_random;
  return {pass, "constraint err " + fmt("%.2g", worst) + ", preset N=" + std::to_string(preset.n) + ", GA mse " +
                    fmt("%.3f", ga.mse) + " vs best random " + fmt("%.3f", best_random) +
                    (deterministic ? "" : ", NOT deterministic")};
}

Outcome fit_vs_bruteforce() {
  constexpr double kTol = 1e-10;
  constexpr double kFormTol = 1e-12;
  std::mt19937_64 rng(105);
  std::uniform_int_distribution<std::size_t> half(8, 256);
  const char* overlap[] = {"raw", "equalized", "averaged", "mask_eq", "mask_av", "diff_eq", "diff_av"};
  const char* nonoverlap[] = {"raw", "eq", "av"};
  double worst = 0.0;
  double worst_form = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Signal s{oracle::random_vector(rng, 2 * half(rng), 0.25, 4.0), 1.0};
    for (const char* v : overlap) {
      for (std::size_t m : {3u, 5u, 9u}) {
        const auto got = fit_overlap(s, parse_fit1d_variant(v), {m, PadMode::cyclic});
        worst = std::max(worst, oracle::max_abs_diff(got.hz, oracle::fit_overlap(s.samples, v, m)));
      }
    }
    for (const char* v : nonoverlap) {
      const auto a = fit_nonoverlap(s, parse_nonoverlap_variant(v), FitForm::abs);
      const auto b = fit_nonoverlap(s, parse_nonoverlap_variant(v), FitForm::sqrt_conj);
      worst = std::max(worst, oracle::max_abs_diff(a.hz, oracle::fit_nonoverlap(s.samples, v)));
      worst_form = std::max(worst_form, oracle::max_abs_diff(a.hz, b.hz));
    }
  }
  for (int trial = 0; trial < 10; ++trial) {
    const Plane p = oracle::random_plane(rng, 2 * half(rng) / 4 + 4, 2 * half(rng) / 4 + 4, 0, 255);
    const auto got = fit_image_overlap(Image({p}), Fit2DVariant::equalized);
    worst = std::max(worst, oracle::max_abs_diff(got.channels[0], oracle::fit2d_equalized_segmental3(p)));
  }
  return {worst <= kTol && worst_form <= kFormTol,
          "max err " + fmt("%.3g", worst) + ", form disagreement " + fmt("%.3g", worst_form)};
}

// Largest index in [lo, hi] by value.
std::size_t argmax_in(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
  std::size_t best = lo;
  for (std::size_t i = lo; i <= hi; ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

std::vector<double> abs_centered_diff(const std::vector<double>& s) {
  const std::size_t n = s.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto t = static_cast<std::ptrdiff_t>(i);
    d[i] = std::abs(s[oracle::cyc(t + 1, n)] - s[oracle::cyc(t - 1, n)]) / 2.0;
  }
  return d;
}

Outcome flank_localization() {
  constexpr std::ptrdiff_t kTolSamples = 1;
  std::mt19937_64 rng(106);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::ptrdiff_t worst = 0;
  std::ptrdiff_t family_worst = 0;
  std::size_t windows = 0;
  std::string breakdown;
  auto close_family = [&](const char* name) {
    breakdown += std::string(breakdown.empty() ? "" : ", ") + name + " " + std::to_string(family_worst);
    worst = std::max(worst, family_worst);
    family_worst = 0;
  };

  auto compare = [&](const std::vector<double>& fit, const std::vector<double>& d, double centre, double half_width) {
    const auto lo = static_cast<std::size_t>(std::ceil(centre - half_width));
    const auto hi = static_cast<std::size_t>(std::floor(centre + half_width));
    const auto a = static_cast<std::ptrdiff_t>(argmax_in(fit, lo, hi));
    const auto b = static_cast<std::ptrdiff_t>(argmax_in(d, lo, hi));
    family_worst = std::max(family_worst, std::abs(a - b));
    ++windows;
  };

  // Sines: every zero crossing is a flank; each is examined over its own
  // quarter-period neighbourhood.
  for (int trial = 0; trial < 20; ++trial) {
    const double period = 8.0 + 56.0 * u(rng);
    const double phase = 2.0 * std::numbers::pi * u(rng);
    Signal s{{}, 1.0};
    for (int n = 0; n < 256; ++n) s.samples.push_back(3.0 + std::sin(oracle::kTwoPi * n / period + phase));
    const auto fit = fit_overlap(s, Fit1DVariant::equalized).hz;
    const auto d = abs_centered_diff(s.samples);
    for (int k = 0;; ++k) {
      const double centre = (k * std::numbers::pi - phase) * period / oracle::kTwoPi;
      if (centre - period / 4 < 2) continue;
      if (centre + period / 4 > 253) break;
      compare(fit, d, centre, period / 4);
    }
  }
  close_family("sines");

  // Square-ish pulses with soft edges.
  for (int trial = 0; trial < 20; ++trial) {
    const double w = 0.3 + 1.7 * u(rng);
    std::vector<double> edges;
    for (double e = 20.0 + 10.0 * u(rng); e < 236.0; e += 24.0 + 16.0 * u(rng)) edges.push_back(e);
    Signal s{std::vector<double>(256, 0.0), 1.0};
    for (std::size_t n = 0; n < 256; ++n) {
      double level = 1.0;
      for (std::size_t j = 0; j < edges.size(); ++j)
        level += (j % 2 ? -1.0 : 1.0) * 0.5 * (1.0 + std::tanh((static_cast<double>(n) - edges[j]) / w));
      s.samples[n] = level;
    }
    const auto fit = fit_overlap(s, Fit1DVariant::equalized).hz;
    const auto d = abs_centered_diff(s.samples);
    for (double e : edges) compare(fit, d, e, 8.0);
  }
  close_family("pulses");

  // 2D: a soft-edged square, examined along its centre row and column.
  for (double w : {0.5, 1.2}) {
    const std::size_t n = 64;
    Plane p(n, n);
    auto edge = [w](double x, double a, double b) {
      return 0.5 * (std::tanh((x - a) / w) - std::tanh((x - b) / w));
    };
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        p(r, c) = 40.0 + 180.0 * edge(static_cast<double>(r), 20.3, 43.7) * edge(static_cast<double>(c), 18.6, 45.2);
    const auto fit = fit_image_overlap(Image({p}), Fit2DVariant::equalized, {MaskKind::segmental, 3, PadMode::replicate});
    const auto grad = directional_derivative(p, MaskKind::segmental, 3, PadMode::replicate);
    std::vector<double> fr, dr, fc, dc;
    for (std::size_t i = 0; i < n; ++i) {
      fr.push_back(fit.channels[0](32, i));
      dr.push_back(grad.magnitude(32, i));
      fc.push_back(fit.channels[0](i, 32));
      dc.push_back(grad.magnitude(i, 32));
    }
    compare(fr, dr, 18.6, 8.0);
    compare(fr, dr, 45.2, 8.0);
    compare(fc, dc, 20.3, 8.0);
    compare(fc, dc, 43.7, 8.0);
  }
  close_family("2D");
  return {worst <= kTolSamples, "worst offset " + std::to_string(worst) + " samples over " + std::to_string(windows) +
                                    " flanks (" + breakdown + ")"};
}

Outcome denoising_direction() {
  constexpr int kSeeds = 20;
  constexpr double kNoisePercent = 5.0;
  constexpr double kCosletMarginDb = 1.0;
  constexpr double kBudget = 60.0;
  const auto t0 = Clock::now();
  SynthSpec spec;
  spec.kind = SynthKind::ecg_like;
  const Signal clean = synth(spec);
  const double peak = peak_abs(clean.samples);

  using Method = std::pair<std::string, std::function<std::vector<double>(const Signal&)>>;
  auto wavelet = [](Basis b, WaveletMethod m, int passes) {
    return [=](const Signal& s) { return wavelet_denoise(s, {b, 3, m, passes}).samples; };
  };
  auto sr = [](Basis b, int v) {
    return [=](const Signal& s) { return sr_decode_signal(sr_encode(s, b, v)).samples; };
  };
  const std::vector<Method> methods = {
      {"SG", [](const Signal& s) { return savgol_apply_1d(s.samples, savgol_coeffs_1d(20, 20, 3)); }},
      {"MF", [](const Signal& s) { return mf1d(s.samples, 26); }},
      {"DS", [](const Signal& s) { return ds1d(s.samples, 2); }},
      {"haar/keep", wavelet(Basis::haar, WaveletMethod::keep, 1)},
      {"haar/shrink", wavelet(Basis::haar, WaveletMethod::shrink, 1)},
      {"haar/MF", wavelet(Basis::haar, WaveletMethod::mf, 5)},
      {"haar/DS", wavelet(Basis::haar, WaveletMethod::ds, 10)},
      {"coslet/keep", wavelet(Basis::coslet, WaveletMethod::keep, 1)},
      {"coslet/shrink", wavelet(Basis::coslet, WaveletMethod::shrink, 1)},
      {"coslet/MF", wavelet(Basis::coslet, WaveletMethod::mf, 5)},
      {"coslet/DS", wavelet(Basis::coslet, WaveletMethod::ds, 20)},
      {"haar/SR-1", sr(Basis::haar, 1)},
      {"haar/SR-2", sr(Basis::haar, 2)},
      {"haar/SR-3", sr(Basis::haar, 3)},
      {"coslet/SR-1", sr(Basis::coslet, 1)},
      {"coslet/SR-2", sr(Basis::coslet, 2)},
      {"coslet/SR-3", sr(Basis::coslet, 3)},
  };

  std::vector<double> noisy_psnr;
  std::vector<std::vector<double>> out_psnr(methods.size());
  for (int seed = 1; seed <= kSeeds; ++seed) {
    const Signal noisy = add_gaussian_noise(clean, kNoisePercent, static_cast<std::uint64_t>(seed));
    noisy_psnr.push_back(psnr(clean.samples, noisy.samples, peak));
    for (std::size_t i = 0; i < methods.size(); ++i)
      out_psnr[i].push_back(psnr(clean.samples, methods[i].second(noisy), peak));
  }
  const double base = median(noisy_psnr);
  bool improves = true;
  std::string losers;
  double haar_keep = 0.0;
  double coslet_keep = 0.0;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    const double m = median(out_psnr[i]);
    if (!(m > base)) {
      improves = false;
      losers += " " + methods[i].first + "(" + fmt("%.2f", m) + ")";
    }
    if (methods[i].first == "haar/keep") haar_keep = m;
    if (methods[i].first == "coslet/keep") coslet_keep = m;
  }
  const double t = seconds_since(t0);
  const bool pass = improves && coslet_keep - haar_keep >= kCosletMarginDb && t < kBudget;
  std::string detail = "noisy " + fmt("%.2f", base) + " dB, coslet/keep " + fmt("%.2f", coslet_keep) +
                       " vs haar/keep " + fmt("%.2f", haar_keep) + " dB, " + fmt("%.1f", t) + " s";
  if (!losers.empty()) detail += ", not improving:" + losers;
  return {pass, detail};
}

Outcome sr_ordering() {
  constexpr double kMarginDb = 10.0;
  std::mt19937_64 rng(108);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double fs = 1024.0;
  double worst_margin = INFINITY;
  double worst_full_band = INFINITY;
  bool accounting = true;
  // Smooth: every tone has at least 16 samples per period. Tones up to fs/8
  // are run as well and reported, but not gated.
  for (int trial = 0; trial < 100; ++trial) {
    const bool gated = trial < 50;
    const double band = gated ? fs / 16.0 : fs / 8.0;
    Signal s{std::vector<double>(1024, 0.0), fs};
    for (int tone = 0; tone < 5; ++tone) {
      const double f = band * u(rng);
      const double a = 0.2 + u(rng);
      const double ph = oracle::kTwoPi * u(rng);
      for (std::size_t n = 0; n < s.size(); ++n)
        s.samples[n] += a * std::sin(oracle::kTwoPi * f * static_cast<double>(n) / fs + ph);
    }
    const double peak = peak_abs(s.samples);
    for (int v : {1, 2}) {
      const double h = psnr(s.samples, sr_decode_signal(sr_encode(s, Basis::haar, v)).samples, peak);
      const double c = psnr(s.samples, sr_decode_signal(sr_encode(s, Basis::coslet, v)).samples, peak);
      double& slot = gated ? worst_margin : worst_full_band;
      slot = std::min(slot, c - h);
    }
    for (Basis b : {Basis::haar, Basis::coslet})
      for (int v : {1, 2, 3}) {
        const double cr = sr_encode(s, b, v).compression_ratio();
        accounting = accounting && cr == 2.0 && percentage_space_saving(cr) == 50.0;
      }
  }
  const Image img(3, 64, 48, 100.0);
  for (Basis b : {Basis::haar, Basis::coslet})
    for (int v : {1, 2, 3}) {
      const double cr = sr_encode(img, b, v).compression_ratio();
      accounting = accounting && cr == 4.0 && percentage_space_saving(cr) == 75.0;
    }
  return {worst_margin >= kMarginDb && accounting,
          "worst coslet-haar margin " + fmt("%.1f", worst_margin) + " dB below fs/16 (" +
              fmt("%.1f", worst_full_band) + " dB up to fs/8, not gated)" +
              (accounting ? ", CR/PSS exact" : ", CR/PSS mismatch")};
}

Outcome qsa_recovery() {
  using namespace fitkit::qsa;
  constexpr double kOmegaRelTol = 0.01;
  constexpr double kResidualTol = 0.01;
  constexpr double kShrink = 3.0;
  constexpr double kDt = 1e-4;
  constexpr std::size_t kSteps = 10000;

  State psi0(4);
  psi0 << 0.5, std::complex<double>(0.0, 0.5), -0.5, std::complex<double>(0.3, 0.4);
  psi0.normalize();

  // Constant omega, both from the exact solution and from stepping.
  const double omega = oracle::kTwoPi * 50.0;
  double worst_rel = 0.0;
  {
    const auto traj = evolve_exact_diagonal(psi0, Eigen::VectorXd::Constant(4, omega), kDt, kSteps);
    for (double w : qsa_monotone(traj).omega) worst_rel = std::max(worst_rel, std::abs(w - omega) / omega);
    const Generator g = Generator::Identity(4, 4) * omega;
    const auto stepped = evolve(psi0, g, kDt, kSteps);
    for (double w : qsa_monotone(stepped).omega) worst_rel = std::max(worst_rel, std::abs(w - omega) / omega);
  }

  // Multitone: compare the estimated generator against the analytic
  // derivative, since against its own finite difference it is exact.
  Eigen::VectorXd omegas(4);
  omegas << oracle::kTwoPi * 5.0, oracle::kTwoPi * 20.0, oracle::kTwoPi * 50.0, oracle::kTwoPi * 80.0;
  auto residual = [&](double dt, std::size_t steps) {
    const auto traj = evolve_exact_diagonal(psi0, omegas, dt, steps);
    const auto gens = qsa_multitone(traj);
    double worst = 0.0;
    for (std::size_t k = 0; k < gens.size(); ++k) {
      const State& psi = traj.states[k + 1];
      const State i_dpsi = omegas.cast<std::complex<double>>().cwiseProduct(psi);  // i * d/dt psi
      worst = std::max(worst, (gens[k] * psi - i_dpsi).norm() / i_dpsi.norm());
    }
    return worst;
  };
  const double r1 = residual(kDt, kSteps);
  const double r2 = residual(kDt / 2, 2 * kSteps);
  const bool pass = worst_rel <= kOmegaRelTol && r1 <= kResidualTol && r1 / r2 >= kShrink;
  return {pass, "monotone rel err " + fmt("%.3g", worst_rel) + ", multitone residual " + fmt("%.3g", r1) +
                    ", halving dt shrinks " + fmt("%.2f", r1 / r2) + "x"};
}

double time_median(const std::function<void()>& f, int runs = 5) {
  f();  // warm-up
  std::vector<double> t;
  for (int i = 0; i < runs; ++i) {
    const auto t0 = Clock::now();
    f();
    t.push_back(seconds_since(t0));
  }
  return median(t);
}

Outcome complexity_scaling() {
  constexpr double kRatio1d = 2.5;
  constexpr double kRatio2d = 4.5;
  std::mt19937_64 rng(110);
  double worst1 = 0.0;
  double prev = 0.0;
  for (int e = 16; e <= 20; ++e) {
    const Signal s{oracle::random_vector(rng, std::size_t{1} << e, 1.0, 2.0), 1.0};
    volatile double sink = 0.0;
    const double t = time_median([&] {
      sink = sink + fit_overlap(s, Fit1DVariant::equalized).hz[0] +
             fit_overlap(s, Fit1DVariant::mask_eq, {5, PadMode::cyclic}).hz[0] +
             fit_nonoverlap(s, NonOverlapVariant::eq).hz[0];
    });
    if (prev > 0.0) worst1 = std::max(worst1, t / prev);
    prev = t;
  }
  double worst2 = 0.0;
  prev = 0.0;
  for (std::size_t n = 256; n <= 2048; n *= 2) {
    const Image img({oracle::random_plane(rng, n, n, 0, 255)});
    volatile double sink = 0.0;
    const double t = time_median([&] {
      sink = sink + fit_image_overlap(img, Fit2DVariant::equalized).channels[0](0, 0) +
             fit_image_nonoverlap(img, NonOverlapVariant::eq).horizontal[0](0, 0);
    });
    if (prev > 0.0) worst2 = std::max(worst2, t / prev);
    prev = t;
  }
  return {worst1 <= kRatio1d && worst2 <= kRatio2d,
          "worst 1D doubling " + fmt("%.2f", worst1) + "x, worst 2D doubling " + fmt("%.2f", worst2) + "x"};
}

Outcome metric_invariants() {
  constexpr double kTol = 1e-9;
  constexpr double kPsnrRef = 48.13;
  constexpr double kPsnrTol = 0.01;
  std::mt19937_64 rng(111);
  std::uniform_int_distribution<int> px(0, 255);
  double worst_self = 0.0;
  double worst_sym = 0.0;
  double min_mi = INFINITY;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> x(4096), y(4096);
    for (auto& v : x) v = px(rng);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = trial % 2 ? px(rng) : std::min(255.0, x[i] / 2 + px(rng) % 8);
    worst_self = std::max(worst_self, std::abs(mutual_information(x, x) - entropy(x)));
    worst_sym = std::max(worst_sym, std::abs(mutual_information(x, y) - mutual_information(y, x)));
    min_mi = std::min(min_mi, mutual_information(x, y));
  }
  const double p = psnr_from_mse(1.0, 255.0);
  const double mc = michelson_contrast(std::vector<double>{0.0, 255.0});
  const bool pass = worst_self <= kTol && worst_sym <= kTol && min_mi >= -kTol &&
                    std::abs(p - kPsnrRef) <= kPsnrTol && mc == 1.0;
  return {pass, "I(X,X)-H " + fmt("%.2g", worst_self) + ", asym " + fmt("%.2g", worst_sym) + ", min I " +
                    fmt("%.3g", min_mi) + ", PSNR(mse=1) " + fmt("%.3f", p) + ", michelson " + fmt("%.3g", mc)};
}

// Counter-clockwise quarter turn: out(i, j) = in(j, n - 1 - i).
Plane rot90(const Plane& in) {
  Plane out(in.cols(), in.rows());
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) = in(j, in.cols() - 1 - i);
  return out;
}

Outcome edge_localization() {
  constexpr double kRotTol = 1e-9;
  const std::size_t n = 40;
  const std::size_t step = 21;  // first bright column; the edge sits between step-1 and step
  std::mt19937_64 rng(112);
  std::normal_distribution<double> noise(0.0, 2.0);
  Plane p(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) p(r, c) = (c >= step ? 200.0 : 50.0) + noise(rng);

  std::string misses;
  auto located = [&](const Plane& m, const std::string& name) {
    for (std::size_t r = 2; r + 2 < n; ++r) {
      std::size_t best = 0;
      for (std::size_t c = 1; c < n; ++c)
        if (m(r, c) > m(r, best)) best = c;
      if (best + 1 != step && best != step) {
        misses += " " + name;
        return;
      }
    }
  };
  located(gradient_edges(p, GradientOperator::sobel).magnitude, "sobel");
  located(gradient_edges(p, GradientOperator::prewitt).magnitude, "prewitt");
  located(gradient_edges(p, GradientOperator::roberts).magnitude, "roberts");
  located(fit_edges(p, MaskKind::segmental, 3).magnitude, "fit");
  located(fit_edges(p, MaskKind::square, 3).magnitude, "fit-square");
  {
    const Plane mag = canny(p, 1.0, 0.0, 1.0).magnitude;
    double top = 0.0;
    for (double v : mag.values()) top = std::max(top, v);
    const EdgeMap e = canny(p, 1.0, 0.1 * top, 0.3 * top);
    located(e.binary, "canny");
  }

  // Rotation: Sobel and Prewitt maps rotate exactly. The 2x2 Roberts window
  // is anchored at its top-left tap, so its rotated map is offset by one
  // column: M_rot(i, j) = M(j, n - 2 - i).
  const Plane q = oracle::random_plane(rng, 24, 24, 0, 255);
  const Plane rq = rot90(q);
  double worst = 0.0;
  for (auto op : {GradientOperator::sobel, GradientOperator::prewitt}) {
    worst = std::max(worst, oracle::max_abs_diff(gradient_edges(rq, op).magnitude, rot90(gradient_edges(q, op).magnitude)));
  }
  {
    const Plane m = gradient_edges(q, GradientOperator::roberts).magnitude;
    const Plane mr = gradient_edges(rq, GradientOperator::roberts).magnitude;
    const std::size_t k = q.rows();
    for (std::size_t i = 0; i + 1 < k; ++i)
      for (std::size_t j = 0; j + 1 < k; ++j) worst = std::max(worst, std::abs(mr(i, j) - m(j, k - 2 - i)));
  }
  return {misses.empty() && worst <= kRotTol,
          (misses.empty() ? std::string("all operators on the step") : "off the step:" + misses) +
              ", rotation err " + fmt("%.2g", worst)};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + FITKIT_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

Outcome container_integrity() {
  const fs::path dir = fs::temp_directory_path() / ("fitkit_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto q = [](const fs::path& p) { return "\"" + p.string() + "\""; };
  std::string failures;

  // Signal: float64 container must reproduce the in-memory decode exactly.
  SynthSpec spec;
  spec.kind = SynthKind::ecg_like;
  const Signal noisy = add_gaussian_noise(synth(spec), 5.0, 3);
  const fs::path csv = dir / "ecg.csv";
  io::write_signal_csv(csv, noisy.samples);
  for (const char* basis : {"haar", "coslet"}) {
    for (int v : {1, 2, 3}) {
      const fs::path box = dir / "ecg.fsr";
      const fs::path out = dir / "ecg_out.csv";
      const std::string tag = std::string(basis) + "/v" + std::to_string(v);
      if (run_cli("sr-encode " + q(csv) + " --basis " + basis + " --version " + std::to_string(v) + " --f64 -o " +
                  q(box)) != 0 ||
          run_cli("sr-decode " + q(box) + " -o " + q(out)) != 0) {
        failures += " cli-signal-" + tag;
        continue;
      }
      const Signal expect = sr_decode_signal(sr_encode(io::read_signal_csv(csv), parse_basis(basis), v));
      const Signal got = io::read_signal_csv(out);
      if (got.samples != expect.samples) failures += " signal-" + tag;
    }
  }

  // Image: dimensions and the exported 8-bit rendering.
  Image img(3, 48, 64);
  for (std::size_t ch = 0; ch < 3; ++ch)
    for (std::size_t r = 0; r < 48; ++r)
      for (std::size_t c = 0; c < 64; ++c)
        img.channels[ch](r, c) =
            std::round(128.0 + 80.0 * std::sin(0.1 * static_cast<double>(r + 7 * ch)) * std::cos(0.13 * static_cast<double>(c)));
  const fs::path ppm = dir / "scene.ppm";
  io::write_pnm(ppm, img);
  const fs::path box = dir / "scene.fsr";
  const fs::path out = dir / "scene_out.ppm";
  if (run_cli("sr-encode " + q(ppm) + " --basis coslet --version 2 --f64 -o " + q(box)) != 0 ||
      run_cli("sr-decode " + q(box) + " -o " + q(out)) != 0) {
    failures += " cli-image";
  } else {
    const Image got = io::read_pnm(out);
    const Image expect = quantize8(sr_decode_image(sr_encode(io::read_pnm(ppm), Basis::coslet, 2)));
    if (got.rows() != 48 || got.cols() != 64 || got.channel_count() != 3) failures += " image-dims";
    else
      for (std::size_t ch = 0; ch < 3; ++ch)
        if (!(got.channels[ch] == expect.channels[ch])) failures += " image-ch" + std::to_string(ch);
  }

  // Corruption must be rejected.
  const auto bytes = io::read_bytes(box);
  auto bad = bytes;
  bad[0] = 'G';
  io::write_atomic(dir / "bad_magic.fsr", bad);
  auto cut = bytes;
  cut.resize(cut.size() - 5);
  io::write_atomic(dir / "truncated.fsr", cut);
  auto header_only = bytes;
  header_only.resize(10);
  io::write_atomic(dir / "header_only.fsr", header_only);
  for (const char* name : {"bad_magic.fsr", "truncated.fsr", "header_only.fsr"})
    if (run_cli("sr-decode " + q(dir / name) + " -o " + q(dir / "never.ppm")) == 0) failures += std::string(" accepted-") + name;

  fs::remove_all(dir);
  return {failures.empty(), failures.empty() ? "round trips exact, corrupt inputs rejected" : "failures:" + failures};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"haar exactness", haar_exactness},
      {"coslet bijection", coslet_bijection},
      {"savitzky-golay coefficients", savgol_tables},
      {"deblur mask constraint and GA", deblur_masks},
      {"FIT vs brute force", fit_vs_bruteforce},
      {"FIT flank localization", flank_localization},
      {"denoising direction", denoising_direction},
      {"SR basis ordering and accounting", sr_ordering},
      {"QSA recovery", qsa_recovery},
      {"complexity scaling", complexity_scaling},
      {"metric invariants", metric_invariants},
      {"edge localization and rotation", edge_localization},
      {"container integrity", container_integrity},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed;
}
