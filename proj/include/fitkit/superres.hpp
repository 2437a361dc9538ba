#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fitkit/core.hpp"
#include "fitkit/multires.hpp"

namespace fitkit {

enum class Media : std::uint8_t { signal = 0, image = 1 };

// What the encoder keeps: the level-1 approximation of every channel, plus
// projection scalars for version 1. Signals are stored as 1 x N/2 planes.
struct SrPayload {
  Basis basis = Basis::haar;
  int version = 1;
  Media media = Media::image;
  std::uint32_t rows = 0;  // original dimensions; signals use rows = 1
  std::uint32_t cols = 0;
  double sample_rate = 1.0;  // signals only; not serialized
  std::vector<Plane> ll;
  std::vector<double> scalars;  // v1: {cH} per signal, {cLH, cHL, cHH} per image channel

  std::size_t channel_count() const { return ll.size(); }
  std::size_t original_samples() const;
  std::size_t payload_samples() const;
  double compression_ratio() const;
};

enum class V2Alternative { elementwise, scalar_proj, res_scalar };

V2Alternative parse_v2_alternative(const std::string& name);
std::string to_string(V2Alternative a);

// <h|l> / <l|l> over flattened arrays.
double projection_coeff(std::span<const double> h, std::span<const double> l);

// Replicated element of subband: every element becomes a 2x2 block.
Plane res_upsample(const Plane& a);
std::vector<double> res_upsample(std::span<const double> a);

SrPayload sr_encode(const Signal& s, Basis basis, int version);
SrPayload sr_encode(const Image& img, Basis basis, int version);

Signal sr_decode_signal(const SrPayload& p, V2Alternative alt = V2Alternative::elementwise);
Image sr_decode_image(const SrPayload& p, V2Alternative alt = V2Alternative::elementwise);

// N x N kernel: alpha everywhere except beta at the centre.
struct DeblurMask {
  std::size_t n = 3;
  double alpha = 0.0;
  double beta = 1.0;

  Plane kernel() const;
};

// Both values given: (N^2-1) alpha + beta must equal 1 (or 0 in edge mode)
// within 1e-9.
DeblurMask make_deblur_mask(std::size_t n, double alpha, double beta, bool edge_mode = false);
// Only beta given: alpha = (1 - beta) / (N^2 - 1).
DeblurMask deblur_mask_from_beta(std::size_t n, double beta);

// Odd N >= 3 closest to sqrt(1 + (1 - beta) / alpha), capped at max_n.
std::size_t nearest_constraint_size(double alpha, double beta, std::size_t max_n = 15);

inline constexpr double kPresetDeblurAlpha = -0.0129;
inline constexpr double kPresetDeblurBeta = 1.63;
// Standard (alpha, beta) pair resolved to a constraint-consistent mask.
DeblurMask preset_deblur_mask();

Plane deblur_2d(const Plane& p, const DeblurMask& m);
Image deblur_2d(const Image& img, const DeblurMask& m);
// Stack of N rows S * (1 + 0.1 k), k = -(N-1)/2 .. (N-1)/2, convolved with
// the mask; the centre row is returned.
Signal deblur_1d(const Signal& s, const DeblurMask& m);

struct GaConfig {
  std::size_t population = 64;
  std::size_t survivors = 16;
  double mutation_rate = 0.05;
  double mutation_sigma = 0.05;  // fraction of each bound's range
  std::size_t generations = 100;
  double alpha_lo = -0.1;
  double alpha_hi = 0.0;
  double beta_lo = 1.0;
  double beta_hi = 2.0;
  std::size_t max_n = 15;
  std::uint64_t seed = 1;
};

struct GaResult {
  DeblurMask mask;
  double mse = 0.0;
};

using TrainingPair = std::pair<Plane, Plane>;  // (original, degraded)

// Mean MSE of deblur_2d(degraded) against original over the set.
double deblur_fitness(const std::vector<TrainingPair>& pairs, const DeblurMask& m);

// Chromosome (alpha, beta) -> constraint-consistent mask.
DeblurMask chromosome_to_mask(double alpha, double beta, std::size_t max_n = 15);

GaResult ga_tune_mask(const std::vector<TrainingPair>& pairs, const GaConfig& cfg = {});

}  // namespace fitkit
