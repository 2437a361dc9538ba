#include "fitkit/multires.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

namespace fitkit {

Basis parse_basis(const std::string& name) {
  if (name == "haar") return Basis::haar;
  if (name == "coslet") return Basis::coslet;
  throw std::invalid_argument("unknown basis: " + name);
}

std::string to_string(Basis b) { return b == Basis::haar ? "haar" : "coslet"; }

namespace {

void require_even(std::size_t n, const char* what) {
  if (n == 0 || n % 2 != 0) {
    throw std::invalid_argument(std::string(what) + ": length must be even and non-zero, got " + std::to_string(n));
  }
}

// Orthonormal DCT-II through one complex FFT of the even/odd reordered
// input (Makhoul). Works for any length.
class Dct {
 public:
  void forward(const double* in, double* out, std::size_t n) {
    if (n == 1) {
      out[0] = in[0];
      return;
    }
    prepare(n);
    for (std::size_t k = 0; 2 * k < n; ++k) v_[k] = in[2 * k];
    for (std::size_t k = 0; 2 * k + 1 < n; ++k) v_[n - 1 - k] = in[2 * k + 1];
    fft_.fwd(spec_, v_);
    for (std::size_t k = 0; k < n; ++k) out[k] = weight(k, n) * (twiddle_[k].real() * spec_[k].real() - twiddle_[k].imag() * spec_[k].imag());
  }

  void inverse(const double* in, double* out, std::size_t n) {
    if (n == 1) {
      out[0] = in[0];
      return;
    }
    prepare(n);
    // Undo the weights, then rebuild V_k = e^{i pi k / 2n} (u_k - i u_{n-k}).
    for (std::size_t k = 0; k < n; ++k) {
      const double u = in[k] / weight(k, n);
      const double w = k == 0 ? 0.0 : in[n - k] / weight(n - k, n);
      spec_[k] = std::conj(twiddle_[k]) * std::complex<double>(u, -w);
    }
    fft_.inv(back_, spec_);
    for (std::size_t k = 0; 2 * k < n; ++k) out[2 * k] = back_[k].real();
    for (std::size_t k = 0; 2 * k + 1 < n; ++k) out[2 * k + 1] = back_[n - 1 - k].real();
  }

 private:
  static double weight(std::size_t k, std::size_t n) {
    return std::sqrt((k == 0 ? 1.0 : 2.0) / static_cast<double>(n));
  }

  void prepare(std::size_t n) {
    if (n == n_) return;
    n_ = n;
    v_.assign(n, 0.0);
    spec_.assign(n, {});
    back_.assign(n, {});
    twiddle_.resize(n);
    // e^{-i pi k / 2n}
    for (std::size_t k = 0; k < n; ++k) {
      const double a = std::numbers::pi * static_cast<double>(k) / (2.0 * static_cast<double>(n));
      twiddle_[k] = {std::cos(a), -std::sin(a)};
    }
  }

  std::size_t n_ = 0;
  Eigen::FFT<double> fft_;
  std::vector<double> v_;
  std::vector<std::complex<double>> spec_;
  std::vector<std::complex<double>> back_;
  std::vector<std::complex<double>> twiddle_;
};

Dct& dct_engine() {
  thread_local Dct engine;
  return engine;
}

template <bool Forward>
Plane separable_dct(const Plane& p) {
  const std::size_t rows = p.rows();
  const std::size_t cols = p.cols();
  Plane out(rows, cols);
  Dct& dct = dct_engine();
  for (std::size_t r = 0; r < rows; ++r) {
    const double* src = p.values().data() + r * cols;
    double* dst = out.values().data() + r * cols;
    if constexpr (Forward) dct.forward(src, dst, cols);
    else dct.inverse(src, dst, cols);
  }
  std::vector<double> col(rows);
  std::vector<double> res(rows);
  for (std::size_t c = 0; c < cols; ++c) {
    double* base = out.values().data() + c;
    for (std::size_t r = 0; r < rows; ++r) col[r] = base[r * cols];
    if constexpr (Forward) dct.forward(col.data(), res.data(), rows);
    else dct.inverse(col.data(), res.data(), rows);
    for (std::size_t r = 0; r < rows; ++r) base[r * cols] = res[r];
  }
  return out;
}

Plane quadrant(const Plane& p, std::size_t r0, std::size_t c0, std::size_t rows, std::size_t cols) {
  Plane q(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) q(r, c) = p(r0 + r, c0 + c);
  return q;
}

void place(Plane& dst, const Plane& q, std::size_t r0, std::size_t c0) {
  for (std::size_t r = 0; r < q.rows(); ++r)
    for (std::size_t c = 0; c < q.cols(); ++c) dst(r0 + r, c0 + c) = q(r, c);
}

void require_same_shape(const Subbands2D& sb) {
  const auto& a = sb.ll;
  for (const Plane* p : {&sb.lh, &sb.hl, &sb.hh}) {
    if (p->rows() != a.rows() || p->cols() != a.cols()) {
      throw std::invalid_argument("subband shapes differ");
    }
  }
}

}  // namespace

Subbands1D haar1d_forward(std::span<const double> s) {
  require_even(s.size(), "haar1d_forward");
  Subbands1D sb;
  const std::size_t half = s.size() / 2;
  sb.low.resize(half);
  sb.high.resize(half);
  for (std::size_t k = 0; k < half; ++k) {
    const double a = s[2 * k];
    const double b = s[2 * k + 1];
    sb.low[k] = (a + b) / 2.0;
    sb.high[k] = (b - a) / 2.0;
  }
  return sb;
}

std::vector<double> haar1d_inverse(const Subbands1D& sb) {
  if (sb.low.size() != sb.high.size()) throw std::invalid_argument("haar1d_inverse: band lengths differ");
  std::vector<double> s(2 * sb.low.size());
  for (std::size_t k = 0; k < sb.low.size(); ++k) {
    s[2 * k] = sb.low[k] - sb.high[k];
    s[2 * k + 1] = sb.low[k] + sb.high[k];
  }
  return s;
}

Subbands2D haar2d_forward(const Plane& p) {
  require_even(p.rows(), "haar2d_forward rows");
  require_even(p.cols(), "haar2d_forward cols");
  const std::size_t hr = p.rows() / 2;
  const std::size_t hc = p.cols() / 2;
  Subbands2D sb{Plane(hr, hc), Plane(hr, hc), Plane(hr, hc), Plane(hr, hc), 1, Basis::haar};
  for (std::size_t r = 0; r < hr; ++r) {
    for (std::size_t c = 0; c < hc; ++c) {
      const double a = p(2 * r, 2 * c);
      const double b = p(2 * r, 2 * c + 1);
      const double cc = p(2 * r + 1, 2 * c);
      const double d = p(2 * r + 1, 2 * c + 1);
      sb.ll(r, c) = (a + b + cc + d) / 4.0;
      sb.lh(r, c) = (-a + b - cc + d) / 4.0;
      sb.hl(r, c) = (-a - b + cc + d) / 4.0;
      sb.hh(r, c) = (a - b - cc + d) / 4.0;
    }
  }
  return sb;
}

Plane haar2d_inverse(const Subbands2D& sb) {
  require_same_shape(sb);
  Plane p(sb.ll.rows() * 2, sb.ll.cols() * 2);
  for (std::size_t r = 0; r < sb.ll.rows(); ++r) {
    for (std::size_t c = 0; c < sb.ll.cols(); ++c) {
      const double ll = sb.ll(r, c);
      const double lh = sb.lh(r, c);
      const double hl = sb.hl(r, c);
      const double hh = sb.hh(r, c);
      p(2 * r, 2 * c) = ll - lh - hl + hh;
      p(2 * r, 2 * c + 1) = ll + lh - hl - hh;
      p(2 * r + 1, 2 * c) = ll - lh + hl - hh;
      p(2 * r + 1, 2 * c + 1) = ll + lh + hl + hh;
    }
  }
  return p;
}

std::vector<double> dct1d(std::span<const double> x) {
  if (x.empty()) return {};
  std::vector<double> out(x.size());
  dct_engine().forward(x.data(), out.data(), x.size());
  return out;
}

std::vector<double> idct1d(std::span<const double> c) {
  if (c.empty()) return {};
  std::vector<double> out(c.size());
  dct_engine().inverse(c.data(), out.data(), c.size());
  return out;
}

Plane dct2d(const Plane& p) {
  if (p.empty()) return p;
  return separable_dct<true>(p);
}

Plane idct2d(const Plane& c) {
  if (c.empty()) return c;
  return separable_dct<false>(c);
}

Subbands1D coslet1d_forward(std::span<const double> s) {
  require_even(s.size(), "coslet1d_forward");
  const auto spec = dct1d(s);
  const std::size_t half = s.size() / 2;
  Subbands1D sb;
  sb.basis = Basis::coslet;
  sb.low = idct1d(std::span<const double>(spec).first(half));
  sb.high = idct1d(std::span<const double>(spec).subspan(half));
  return sb;
}

std::vector<double> coslet1d_inverse(const Subbands1D& sb) {
  if (sb.low.size() != sb.high.size()) throw std::invalid_argument("coslet1d_inverse: band lengths differ");
  auto lo = dct1d(sb.low);
  const auto hi = dct1d(sb.high);
  lo.insert(lo.end(), hi.begin(), hi.end());
  return idct1d(lo);
}

Subbands2D coslet2d_forward(const Plane& p) {
  require_even(p.rows(), "coslet2d_forward rows");
  require_even(p.cols(), "coslet2d_forward cols");
  const Plane spec = dct2d(p);
  const std::size_t hr = p.rows() / 2;
  const std::size_t hc = p.cols() / 2;
  Subbands2D sb;
  sb.basis = Basis::coslet;
  sb.ll = idct2d(quadrant(spec, 0, 0, hr, hc));
  sb.lh = idct2d(quadrant(spec, 0, hc, hr, hc));
  sb.hl = idct2d(quadrant(spec, hr, 0, hr, hc));
  sb.hh = idct2d(quadrant(spec, hr, hc, hr, hc));
  return sb;
}

Plane coslet2d_inverse(const Subbands2D& sb) {
  require_same_shape(sb);
  const std::size_t hr = sb.ll.rows();
  const std::size_t hc = sb.ll.cols();
  Plane spec(2 * hr, 2 * hc);
  place(spec, dct2d(sb.ll), 0, 0);
  place(spec, dct2d(sb.lh), 0, hc);
  place(spec, dct2d(sb.hl), hr, 0);
  place(spec, dct2d(sb.hh), hr, hc);
  return idct2d(spec);
}

Subbands1D forward1d(std::span<const double> s, Basis basis) {
  return basis == Basis::haar ? haar1d_forward(s) : coslet1d_forward(s);
}

std::vector<double> inverse1d(const Subbands1D& sb) {
  return sb.basis == Basis::haar ? haar1d_inverse(sb) : coslet1d_inverse(sb);
}

Subbands2D forward2d(const Plane& p, Basis basis) {
  return basis == Basis::haar ? haar2d_forward(p) : coslet2d_forward(p);
}

Plane inverse2d(const Subbands2D& sb) {
  return sb.basis == Basis::haar ? haar2d_inverse(sb) : coslet2d_inverse(sb);
}

Pyramid1D split_levels(std::span<const double> s, Basis basis, int levels) {
  if (levels < 1) throw std::invalid_argument("split_levels: levels must be >= 1");
  const std::size_t div = std::size_t{1} << levels;
  if (s.empty() || s.size() % div != 0) {
    throw std::invalid_argument("split_levels: length not divisible by 2^levels");
  }
  Pyramid1D pyr;
  pyr.basis = basis;
  std::vector<double> current(s.begin(), s.end());
  for (int l = 0; l < levels; ++l) {
    auto sb = forward1d(current, basis);
    pyr.details.push_back(std::move(sb.high));
    current = std::move(sb.low);
  }
  pyr.approx = std::move(current);
  return pyr;
}

std::vector<double> merge_levels(const Pyramid1D& pyr) {
  std::vector<double> current = pyr.approx;
  for (int l = pyr.levels() - 1; l >= 0; --l) {
    Subbands1D sb{current, pyr.details[static_cast<std::size_t>(l)], l + 1, pyr.basis};
    current = inverse1d(sb);
  }
  return current;
}

Pyramid2D split_levels(const Plane& p, Basis basis, int levels) {
  if (levels < 1) throw std::invalid_argument("split_levels: levels must be >= 1");
  const std::size_t div = std::size_t{1} << levels;
  if (p.empty() || p.rows() % div != 0 || p.cols() % div != 0) {
    throw std::invalid_argument("split_levels: dimensions not divisible by 2^levels");
  }
  Pyramid2D pyr;
  pyr.basis = basis;
  Plane current = p;
  for (int l = 0; l < levels; ++l) {
    auto sb = forward2d(current, basis);
    pyr.details.push_back({std::move(sb.lh), std::move(sb.hl), std::move(sb.hh)});
    current = std::move(sb.ll);
  }
  pyr.approx = std::move(current);
  return pyr;
}

Plane merge_levels(const Pyramid2D& pyr) {
  Plane current = pyr.approx;
  for (int l = pyr.levels() - 1; l >= 0; --l) {
    const auto& d = pyr.details[static_cast<std::size_t>(l)];
    Subbands2D sb{current, d[0], d[1], d[2], l + 1, pyr.basis};
    current = inverse2d(sb);
  }
  return current;
}

}  // namespace fitkit
