#pragma once

#include <string>

#include "fitkit/core.hpp"
#include "fitkit/fit2d.hpp"

namespace fitkit {

enum class GradientOperator { roberts, sobel, prewitt };
enum class MagnitudeMode { l2, l1, max };
enum class GrayMode { luminance, channel_max };

GradientOperator parse_gradient_operator(const std::string& name);
std::string to_string(GradientOperator op);
MagnitudeMode parse_magnitude_mode(const std::string& name);
GrayMode parse_gray_mode(const std::string& name);

// Luminance 0.299 R + 0.587 G + 0.114 B, or per-pixel channel max.
Plane to_gray(const Image& img, GrayMode mode = GrayMode::luminance);

struct EdgeMap {
  Plane magnitude;
  Plane orientation;  // radians, empty when not computed
  Plane binary;       // 0/1, empty when not thresholded
};

// (Gx, Gy) masks. Roberts is 2x2 anchored at the top-left tap.
std::pair<Plane, Plane> gradient_masks(GradientOperator op);

// Borders use replicate padding so flat regions give exactly zero.
EdgeMap gradient_edges(const Plane& gray, GradientOperator op, MagnitudeMode mode = MagnitudeMode::l2);

Plane gaussian_smooth(const Plane& p, double sigma);

// Gaussian smoothing, 2x2 differences P/Q, 4-sector non-maximum
// suppression, 8-connected hysteresis. Thresholds act on the gradient
// magnitude.
EdgeMap canny(const Plane& gray, double sigma, double t_low, double t_high);

// Equalized-variant FIT as an edge map. binary_fraction in (0, 1] marks
// pixels at or above that fraction of the maximum; <= 0 skips it.
EdgeMap fit_edges(const Plane& gray, MaskKind kind, std::size_t m, double binary_fraction = 0.0);

}  // namespace fitkit
