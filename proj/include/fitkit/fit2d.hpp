#pragma once

#include <string>
#include <vector>

#include "fitkit/core.hpp"
#include "fitkit/fit1d.hpp"

namespace fitkit {

enum class MaskKind { segmental, square };
enum class Fit2DVariant { raw, equalized, averaged, mask };

MaskKind parse_mask_kind(const std::string& name);
std::string to_string(MaskKind k);
Fit2DVariant parse_fit2d_variant(const std::string& name);
std::string to_string(Fit2DVariant v);

// Derivative and smoothing masks for odd M.
Plane segmental_derivative_mask(std::size_t m);  // 1 x M, [-1 .. -1 0 1 .. 1]/(M-1)
Plane segmental_smoothing_mask(std::size_t m);   // 1 x M, ones/M
Plane square_derivative_mask(std::size_t m);     // M x M, anti-diagonal split, /(M(M-1))
Plane square_smoothing_mask(std::size_t m);      // M x M box mean

struct DirectionalDerivative {
  Plane horizontal;  // I_H, empty for the square mask
  Plane vertical;    // I_V, empty for the square mask
  Plane magnitude;   // I-dot
};

DirectionalDerivative directional_derivative(const Plane& p, MaskKind kind, std::size_t m,
                                             PadMode mode = PadMode::zero);
Plane smoothing_denominator(const Plane& p, MaskKind kind, std::size_t m, PadMode mode = PadMode::zero);

struct FitImage {
  std::vector<Plane> channels;  // overlap: full-resolution FIT per channel

  // Non-overlap: half-resolution directional FIT per channel.
  std::vector<Plane> horizontal;
  std::vector<Plane> vertical;
  std::vector<Plane> diagonal;

  bool abs_mean_fallback = false;
};

struct Fit2DOptions {
  MaskKind kind = MaskKind::segmental;
  std::size_t mask_size = 3;
  PadMode padding = PadMode::zero;
};

FitImage fit_image_overlap(const Image& img, Fit2DVariant variant, const Fit2DOptions& opts = {});
FitImage fit_image_nonoverlap(const Image& img, NonOverlapVariant variant, FitForm form = FitForm::abs);

}  // namespace fitkit
