#include "fitkit/edges.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace fitkit {

GradientOperator parse_gradient_operator(const std::string& name) {
  if (name == "roberts") return GradientOperator::roberts;
  if (name == "sobel") return GradientOperator::sobel;
  if (name == "prewitt") return GradientOperator::prewitt;
  throw std::invalid_argument("unknown gradient operator: " + name);
}

std::string to_string(GradientOperator op) {
  switch (op) {
    case GradientOperator::roberts: return "roberts";
    case GradientOperator::sobel: return "sobel";
    case GradientOperator::prewitt: return "prewitt";
  }
  return "?";
}

MagnitudeMode parse_magnitude_mode(const std::string& name) {
  if (name == "l2") return MagnitudeMode::l2;
  if (name == "l1") return MagnitudeMode::l1;
  if (name == "max") return MagnitudeMode::max;
  throw std::invalid_argument("unknown magnitude mode: " + name);
}

GrayMode parse_gray_mode(const std::string& name) {
  if (name == "luminance") return GrayMode::luminance;
  if (name == "max" || name == "channel_max") return GrayMode::channel_max;
  throw std::invalid_argument("unknown gray mode: " + name);
}

Plane to_gray(const Image& img, GrayMode mode) {
  validate(img);
  if (img.channel_count() == 1) return img.channels.front();
  Plane out(img.rows(), img.cols());
  const auto& r = img.channels[0].values();
  const auto& g = img.channels[1].values();
  const auto& b = img.channels[2].values();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.values()[i] = mode == GrayMode::luminance ? 0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i]
                                                  : std::max({r[i], g[i], b[i]});
  }
  return out;
}

std::pair<Plane, Plane> gradient_masks(GradientOperator op) {
  switch (op) {
    case GradientOperator::roberts:
      return {Plane(2, 2, {1, 0, 0, -1}), Plane(2, 2, {0, -1, 1, 0})};
    case GradientOperator::sobel:
      return {Plane(3, 3, {-1, 0, 1, -2, 0, 2, -1, 0, 1}), Plane(3, 3, {1, 2, 1, 0, 0, 0, -1, -2, -1})};
    case GradientOperator::prewitt:
      return {Plane(3, 3, {-1, 0, 1, -1, 0, 1, -1, 0, 1}), Plane(3, 3, {1, 1, 1, 0, 0, 0, -1, -1, -1})};
  }
  throw std::invalid_argument("unknown gradient operator");
}

namespace {

// 2x2 correlation anchored at the top-left tap, replicate on bottom/right.
Plane correlate_2x2(const Plane& in, const Plane& k) {
  Plane out(in.rows(), in.cols());
  for (std::size_t r = 0; r < in.rows(); ++r) {
    const std::size_t r1 = std::min(r + 1, in.rows() - 1);
    for (std::size_t c = 0; c < in.cols(); ++c) {
      const std::size_t c1 = std::min(c + 1, in.cols() - 1);
      out(r, c) = k(0, 0) * in(r, c) + k(0, 1) * in(r, c1) + k(1, 0) * in(r1, c) + k(1, 1) * in(r1, c1);
    }
  }
  return out;
}

double combine(double gx, double gy, MagnitudeMode mode) {
  switch (mode) {
    case MagnitudeMode::l2: return std::sqrt(gx * gx + gy * gy);
    case MagnitudeMode::l1: return std::abs(gx) + std::abs(gy);
    case MagnitudeMode::max: return std::max(std::abs(gx), std::abs(gy));
  }
  return 0.0;
}

}  // namespace

EdgeMap gradient_edges(const Plane& gray, GradientOperator op, MagnitudeMode mode) {
  if (gray.rows() < 2 || gray.cols() < 2) throw std::invalid_argument("gradient_edges: image too small");
  const auto [mx, my] = gradient_masks(op);
  const Plane gx = op == GradientOperator::roberts ? correlate_2x2(gray, mx) : correlate2d(gray, mx, PadMode::replicate);
  const Plane gy = op == GradientOperator::roberts ? correlate_2x2(gray, my) : correlate2d(gray, my, PadMode::replicate);
  EdgeMap e;
  e.magnitude = Plane(gray.rows(), gray.cols());
  e.orientation = Plane(gray.rows(), gray.cols());
  for (std::size_t i = 0; i < gray.size(); ++i) {
    const double x = gx.values()[i];
    const double y = gy.values()[i];
    e.magnitude.values()[i] = combine(x, y, mode);
    e.orientation.values()[i] = std::atan2(y, x);
  }
  return e;
}

Plane gaussian_smooth(const Plane& p, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_smooth: sigma must be positive");
  const auto radius = static_cast<std::size_t>(std::ceil(3.0 * sigma));
  std::vector<double> taps(2 * radius + 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < taps.size(); ++i) {
    const double x = static_cast<double>(i) - static_cast<double>(radius);
    taps[i] = std::exp(-x * x / (2.0 * sigma * sigma));
    sum += taps[i];
  }
  for (auto& t : taps) t /= sum;
  const Plane row(1, taps.size(), taps);
  return correlate2d(correlate2d(p, row, PadMode::replicate), row.transposed(), PadMode::replicate);
}

EdgeMap canny(const Plane& gray, double sigma, double t_low, double t_high) {
  if (!(t_low >= 0.0) || !(t_low < t_high)) throw std::invalid_argument("canny: need 0 <= t_low < t_high");
  if (gray.rows() < 2 || gray.cols() < 2) throw std::invalid_argument("canny: image too small");
  const Plane s = gaussian_smooth(gray, sigma);
  const std::size_t rows = s.rows();
  const std::size_t cols = s.cols();

  Plane mag(rows, cols);
  Plane theta(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::size_t i1 = std::min(i + 1, rows - 1);
    for (std::size_t j = 0; j < cols; ++j) {
      const std::size_t j1 = std::min(j + 1, cols - 1);
      const double p = (s(i, j1) - s(i, j) + s(i1, j1) - s(i1, j)) / 2.0;
      const double q = (s(i, j) - s(i1, j) + s(i, j1) - s(i1, j1)) / 2.0;
      mag(i, j) = std::sqrt(p * p + q * q);
      theta(i, j) = std::atan2(q, p);
    }
  }

  // Q grows upward, so the gradient in (row, col) steps is (-Q, P).
  Plane nms(rows, cols);
  auto at = [&](std::ptrdiff_t r, std::ptrdiff_t c) {
    if (r < 0 || c < 0 || r >= static_cast<std::ptrdiff_t>(rows) || c >= static_cast<std::ptrdiff_t>(cols)) return 0.0;
    return mag(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
  };
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double m = mag(i, j);
      if (m == 0.0) continue;
      double deg = -theta(i, j) * 180.0 / std::numbers::pi;  // angle of (col, row) direction
      deg = std::fmod(deg + 180.0, 180.0);
      int dr = 0;
      int dc = 0;
      if (deg < 22.5 || deg >= 157.5) dc = 1;
      else if (deg < 67.5) { dr = 1; dc = 1; }
      else if (deg < 112.5) dr = 1;
      else { dr = 1; dc = -1; }
      const auto r = static_cast<std::ptrdiff_t>(i);
      const auto c = static_cast<std::ptrdiff_t>(j);
      const double a = at(r + dr, c + dc);
      const double b = at(r - dr, c - dc);
      if (m >= a && m > b) nms(i, j) = m;
    }
  }

  EdgeMap e;
  e.magnitude = mag;
  e.orientation = theta;
  e.binary = Plane(rows, cols);
  std::vector<std::size_t> stack;
  for (std::size_t k = 0; k < nms.size(); ++k) {
    if (nms.values()[k] >= t_high) {
      e.binary.values()[k] = 1.0;
      stack.push_back(k);
    }
  }
  while (!stack.empty()) {
    const std::size_t k = stack.back();
    stack.pop_back();
    const auto r = static_cast<std::ptrdiff_t>(k / cols);
    const auto c = static_cast<std::ptrdiff_t>(k % cols);
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        const auto rr = r + dr;
        const auto cc = c + dc;
        if (rr < 0 || cc < 0 || rr >= static_cast<std::ptrdiff_t>(rows) || cc >= static_cast<std::ptrdiff_t>(cols)) continue;
        const std::size_t n = static_cast<std::size_t>(rr) * cols + static_cast<std::size_t>(cc);
        if (e.binary.values()[n] == 0.0 && nms.values()[n] >= t_low && nms.values()[n] > 0.0) {
          e.binary.values()[n] = 1.0;
          stack.push_back(n);
        }
      }
    }
  }
  return e;
}

EdgeMap fit_edges(const Plane& gray, MaskKind kind, std::size_t m, double binary_fraction) {
  Fit2DOptions opts;
  opts.kind = kind;
  opts.mask_size = m;
  opts.padding = PadMode::replicate;
  const FitImage f = fit_image_overlap(Image(std::vector<Plane>{gray}), Fit2DVariant::equalized, opts);
  EdgeMap e;
  e.magnitude = f.channels.front();
  if (binary_fraction > 0.0) {
    const double cut = binary_fraction * max_value(e.magnitude.values());
    e.binary = Plane(gray.rows(), gray.cols());
    for (std::size_t i = 0; i < gray.size(); ++i) {
      e.binary.values()[i] = (cut > 0.0 && e.magnitude.values()[i] >= cut) ? 1.0 : 0.0;
    }
  }
  return e;
}

}  // namespace fitkit
