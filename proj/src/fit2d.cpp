#include "fitkit/fit2d.hpp"

#include <cmath>
#include <numbers>

#include "fitkit/multires.hpp"

namespace fitkit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Both helpers overwrite and return the numerator plane.
Plane per_pixel_ratio(Plane num, const Plane& den) {
  for (std::size_t r = 0; r < num.rows(); ++r) {
    for (std::size_t c = 0; c < num.cols(); ++c) {
      const double d = den(r, c);
      if (d == 0.0) {
        throw DivisionByZero("FIT: zero denominator at pixel (" + std::to_string(r) + ", " + std::to_string(c) + ")",
                             r * num.cols() + c, r, c);
      }
      num(r, c) = std::abs(num(r, c)) / std::abs(d) / kTwoPi;
    }
  }
  return num;
}

Plane scaled_plane(Plane num, double den) {
  if (den == 0.0) return Plane(num.rows(), num.cols());  // all-zero channel
  const double k = 1.0 / (std::abs(den) * kTwoPi);
  for (auto& v : num.values()) v = std::abs(v) * k;
  return num;
}

Plane equalized_channel(const Plane& p) { return equalize(p, kImageEqLo, kImageEqHi); }

}  // namespace

MaskKind parse_mask_kind(const std::string& name) {
  if (name == "segmental") return MaskKind::segmental;
  if (name == "square") return MaskKind::square;
  throw std::invalid_argument("unknown mask kind: " + name);
}

std::string to_string(MaskKind k) { return k == MaskKind::segmental ? "segmental" : "square"; }

Fit2DVariant parse_fit2d_variant(const std::string& name) {
  if (name == "raw") return Fit2DVariant::raw;
  if (name == "equalized" || name == "eq") return Fit2DVariant::equalized;
  if (name == "averaged" || name == "av") return Fit2DVariant::averaged;
  if (name == "mask") return Fit2DVariant::mask;
  throw std::invalid_argument("unknown 2D FIT variant: " + name);
}

std::string to_string(Fit2DVariant v) {
  switch (v) {
    case Fit2DVariant::raw: return "raw";
    case Fit2DVariant::equalized: return "equalized";
    case Fit2DVariant::averaged: return "averaged";
    case Fit2DVariant::mask: return "mask";
  }
  return "?";
}

Plane segmental_derivative_mask(std::size_t m) {
  const auto w = wavelet_mask(m);
  return Plane(1, m, w);
}

Plane segmental_smoothing_mask(std::size_t m) { return Plane(1, m, scaling_mask(m)); }

Plane square_derivative_mask(std::size_t m) {
  require_odd_mask(m, "square_derivative_mask");
  Plane k(m, m);
  const double norm = static_cast<double>(m * (m - 1));
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c) {
      if (r + c < m - 1) k(r, c) = -1.0 / norm;
      else if (r + c > m - 1) k(r, c) = 1.0 / norm;
    }
  }
  return k;
}

Plane square_smoothing_mask(std::size_t m) {
  require_odd_mask(m, "square_smoothing_mask");
  return Plane(m, m, 1.0 / static_cast<double>(m * m));
}

DirectionalDerivative directional_derivative(const Plane& p, MaskKind kind, std::size_t m, PadMode mode) {
  DirectionalDerivative out;
  if (kind == MaskKind::square) {
    out.magnitude = correlate2d(p, square_derivative_mask(m), mode);
    for (auto& v : out.magnitude.values()) v = std::abs(v);
    return out;
  }
  const Plane nh = segmental_derivative_mask(m);
  out.horizontal = correlate2d(p, nh, mode);
  out.vertical = correlate2d(p, nh.transposed(), mode);
  out.magnitude = Plane(p.rows(), p.cols());
  for (std::size_t i = 0; i < p.size(); ++i) {
    out.magnitude.values()[i] = std::hypot(out.horizontal.values()[i], out.vertical.values()[i]);
  }
  return out;
}

Plane smoothing_denominator(const Plane& p, MaskKind kind, std::size_t m, PadMode mode) {
  if (kind == MaskKind::square) return correlate2d(p, square_smoothing_mask(m), mode);
  const Plane dh = segmental_smoothing_mask(m);
  const Plane h = correlate2d(p, dh, mode);
  const Plane v = correlate2d(p, dh.transposed(), mode);
  Plane out(p.rows(), p.cols());
  for (std::size_t i = 0; i < p.size(); ++i) out.values()[i] = std::hypot(h.values()[i], v.values()[i]);
  return out;
}

FitImage fit_image_overlap(const Image& img, Fit2DVariant variant, const Fit2DOptions& opts) {
  validate(img);
  require_odd_mask(opts.mask_size, "fit_image_overlap");
  FitImage out;
  for (const Plane& ch : img.channels) {
    switch (variant) {
      case Fit2DVariant::raw: {
        auto d = directional_derivative(ch, opts.kind, opts.mask_size, opts.padding);
        out.channels.push_back(per_pixel_ratio(std::move(d.magnitude), ch));
        break;
      }
      case Fit2DVariant::equalized: {
        const Plane eq = equalized_channel(ch);
        auto d = directional_derivative(eq, opts.kind, opts.mask_size, opts.padding);
        out.channels.push_back(per_pixel_ratio(std::move(d.magnitude), eq));
        break;
      }
      case Fit2DVariant::averaged: {
        auto d = directional_derivative(ch, opts.kind, opts.mask_size, opts.padding);
        bool fallback = false;
        const double den = averaged_denominator(ch.values(), &fallback);
        out.abs_mean_fallback = out.abs_mean_fallback || fallback;
        out.channels.push_back(scaled_plane(std::move(d.magnitude), den));
        break;
      }
      case Fit2DVariant::mask: {
        // Both terms from the equalized channel; with zero padding the border
        // denominator still stays positive because every window holds >= 1 value >= 1.
        const Plane eq = equalized_channel(ch);
        auto d = directional_derivative(eq, opts.kind, opts.mask_size, opts.padding);
        const Plane den = smoothing_denominator(eq, opts.kind, opts.mask_size, opts.padding);
        out.channels.push_back(per_pixel_ratio(std::move(d.magnitude), den));
        break;
      }
    }
  }
  return out;
}

FitImage fit_image_nonoverlap(const Image& img, NonOverlapVariant variant, FitForm form) {
  validate(img);
  if (img.rows() % 2 != 0 || img.cols() % 2 != 0) {
    throw std::invalid_argument("fit_image_nonoverlap: image dimensions must be even");
  }
  FitImage out;
  for (const Plane& ch : img.channels) {
    const Plane base = variant == NonOverlapVariant::eq ? equalized_channel(ch) : ch;
    const Subbands2D sb = haar2d_forward(base);
    double av = 0.0;
    if (variant == NonOverlapVariant::av) {
      bool fallback = false;
      av = averaged_denominator(sb.ll.values(), &fallback);
      out.abs_mean_fallback = out.abs_mean_fallback || fallback;
    }
    auto band = [&](const Plane& detail) {
      Plane f(detail.rows(), detail.cols());
      for (std::size_t r = 0; r < detail.rows(); ++r) {
        for (std::size_t c = 0; c < detail.cols(); ++c) {
          const double den = variant == NonOverlapVariant::av ? av : sb.ll(r, c);
          if (den == 0.0) {
            if (variant == NonOverlapVariant::av) continue;
            throw DivisionByZero("fit_image_nonoverlap: zero LL coefficient at (" + std::to_string(r) + ", " +
                                     std::to_string(c) + ")",
                                 r * detail.cols() + c, r, c);
          }
          const double w = detail(r, c) / den;
          f(r, c) = (form == FitForm::sqrt_conj ? std::sqrt(w * w) : std::abs(detail(r, c)) / std::abs(den)) / kTwoPi;
        }
      }
      return f;
    };
    out.horizontal.push_back(band(sb.lh));
    out.vertical.push_back(band(sb.hl));
    out.diagonal.push_back(band(sb.hh));
  }
  return out;
}

}  // namespace fitkit
