#pragma once

#include <cstdint>
#include <string>

#include "fitkit/core.hpp"

namespace fitkit {

enum class SynthKind { four_tone, two_tone, sine, ecg_like };

SynthKind parse_synth_kind(const std::string& name);
std::string to_string(SynthKind k);

struct SynthSpec {
  SynthKind kind = SynthKind::sine;
  double fs = 0.0;        // 0 picks the kind's default
  double duration = 0.0;  // seconds; 0 picks the kind's default
  double noise_percent = 0.0;
  std::uint64_t seed = 1;
  double frequency = 10.0;         // sine only
  double pulse_rate = 80.0 / 60.0;  // ecg_like, pulses per second
  // ecg_like DC level under the unit-height beat. With noise scaled to the
  // RMS, this sets how strong the noise is against the beat shape.
  double ecg_baseline = 1.0;
};

// Defaults: four_tone 400 Hz / 20 s, two_tone 400 Hz / 2 s (t from -1),
// sine 1024 Hz / 1 s, ecg_like 1024 Hz / 8 s.
Signal synth(const SynthSpec& spec);

// Noise std = percent / 100 * RMS(s); seeded, deterministic.
Signal add_gaussian_noise(const Signal& s, double percent, std::uint64_t seed);

}  // namespace fitkit
