#include "fitkit/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace fitkit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Wave {
  double offset;  // seconds relative to the R peak
  double amplitude;
  double width;  // Gaussian sigma, seconds
};

// P, Q, R, S, T bumps of a single beat.
constexpr Wave kBeat[] = {
    {-0.20, 0.15, 0.025}, {-0.025, -0.15, 0.010}, {0.0, 1.00, 0.012}, {0.025, -0.25, 0.010}, {0.30, 0.30, 0.050},
};

double ecg_value(double t, double period) {
  // Phase relative to the nearest R peak; neighbours add their tails.
  const double phase = t - period * std::floor(t / period) - 0.5 * period;
  double v = 0.0;
  for (int k = -1; k <= 1; ++k) {
    for (const Wave& w : kBeat) {
      const double d = phase - w.offset + k * period;
      v += w.amplitude * std::exp(-d * d / (2.0 * w.width * w.width));
    }
  }
  return v;
}

}  // namespace

SynthKind parse_synth_kind(const std::string& name) {
  if (name == "four_tone") return SynthKind::four_tone;
  if (name == "two_tone") return SynthKind::two_tone;
  if (name == "sine") return SynthKind::sine;
  if (name == "ecg_like" || name == "ecg") return SynthKind::ecg_like;
  throw std::invalid_argument("unknown synthetic signal kind: " + name);
}

std::string to_string(SynthKind k) {
  switch (k) {
    case SynthKind::four_tone: return "four_tone";
    case SynthKind::two_tone: return "two_tone";
    case SynthKind::sine: return "sine";
    case SynthKind::ecg_like: return "ecg_like";
  }
  return "?";
}

Signal add_gaussian_noise(const Signal& s, double percent, std::uint64_t seed) {
  if (!(percent >= 0.0)) throw std::invalid_argument("noise percent must be >= 0");
  Signal out = s;
  if (percent == 0.0 || s.samples.empty()) return out;
  double rms = 0.0;
  for (double v : s.samples) rms += v * v;
  rms = std::sqrt(rms / static_cast<double>(s.size()));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, percent / 100.0 * rms);
  for (auto& v : out.samples) v += noise(rng);
  return out;
}

Signal synth(const SynthSpec& spec) {
  double fs = spec.fs;
  double duration = spec.duration;
  double t0 = 0.0;
  switch (spec.kind) {
    case SynthKind::four_tone:
      if (fs == 0.0) fs = 400.0;
      if (duration == 0.0) duration = 20.0;
      break;
    case SynthKind::two_tone:
      if (fs == 0.0) fs = 400.0;
      if (duration == 0.0) duration = 2.0;
      t0 = -duration / 2.0;
      break;
    case SynthKind::sine:
      if (fs == 0.0) fs = 1024.0;
      if (duration == 0.0) duration = 1.0;
      break;
    case SynthKind::ecg_like:
      if (fs == 0.0) fs = 1024.0;
      if (duration == 0.0) duration = 8.0;
      break;
  }
  if (!(fs > 0.0) || !(duration > 0.0)) throw std::invalid_argument("synth: fs and duration must be positive");
  if (spec.kind == SynthKind::ecg_like && !(spec.pulse_rate > 0.0)) {
    throw std::invalid_argument("synth: pulse rate must be positive");
  }

  const auto n = static_cast<std::size_t>(std::llround(fs * duration));
  Signal s;
  s.sample_rate = fs;
  s.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t0 + static_cast<double>(i) / fs;
    double v = 0.0;
    switch (spec.kind) {
      case SynthKind::four_tone: {
        const double f = t < 5.0 ? 10.0 : t < 10.0 ? 25.0 : t < 15.0 ? 50.0 : 100.0;
        v = std::cos(kTwoPi * f * t);
        break;
      }
      case SynthKind::two_tone:
        v = t <= 0.0 ? std::cos(kTwoPi * t) : std::cos(2.0 * kTwoPi * t);
        break;
      case SynthKind::sine:
        v = std::sin(kTwoPi * spec.frequency * t);
        break;
      case SynthKind::ecg_like:
        v = spec.ecg_baseline + ecg_value(t, 1.0 / spec.pulse_rate);
        break;
    }
    s.samples[i] = v;
  }
  return add_gaussian_noise(s, spec.noise_percent, spec.seed);
}

}  // namespace fitkit
