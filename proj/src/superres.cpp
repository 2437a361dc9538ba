#include "fitkit/superres.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace fitkit {

std::size_t SrPayload::original_samples() const {
  return static_cast<std::size_t>(rows) * cols * channel_count();
}

std::size_t SrPayload::payload_samples() const {
  std::size_t n = 0;
  for (const auto& p : ll) n += p.size();
  return n;
}

double SrPayload::compression_ratio() const {
  return static_cast<double>(original_samples()) / static_cast<double>(payload_samples());
}

V2Alternative parse_v2_alternative(const std::string& name) {
  if (name == "elementwise") return V2Alternative::elementwise;
  if (name == "scalar_proj") return V2Alternative::scalar_proj;
  if (name == "res_scalar") return V2Alternative::res_scalar;
  throw std::invalid_argument("unknown v2 alternative: " + name);
}

std::string to_string(V2Alternative a) {
  switch (a) {
    case V2Alternative::elementwise: return "elementwise";
    case V2Alternative::scalar_proj: return "scalar_proj";
    case V2Alternative::res_scalar: return "res_scalar";
  }
  return "?";
}

double projection_coeff(std::span<const double> h, std::span<const double> l) {
  if (h.size() != l.size()) throw std::invalid_argument("projection_coeff: shape mismatch");
  double hl = 0.0;
  double ll = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    hl += h[i] * l[i];
    ll += l[i] * l[i];
  }
  if (ll == 0.0) throw DivisionByZero("projection_coeff: <l|l> is zero", 0);
  return hl / ll;
}

Plane res_upsample(const Plane& a) {
  Plane out(a.rows() * 2, a.cols() * 2);
  for (std::size_t r = 0; r < out.rows(); ++r) {
    for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) = a(r / 2, c / 2);
  }
  return out;
}

std::vector<double> res_upsample(std::span<const double> a) {
  std::vector<double> out(a.size() * 2);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i / 2];
  return out;
}

namespace {

// Zero approximation band means zero details can be inferred.
double safe_projection(std::span<const double> h, std::span<const double> l) {
  double ll = 0.0;
  for (double v : l) ll += v * v;
  return ll == 0.0 ? 0.0 : projection_coeff(h, l);
}

void require_version(int v) {
  if (v < 1 || v > 3) throw std::invalid_argument("SR version must be 1, 2 or 3");
}

std::vector<double> scaled(std::span<const double> x, double c) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = c * x[i];
  return out;
}

// Elementwise ratio transfer H2res / LL2res * LL1, shifted so the
// denominator is at least 1.
std::vector<double> ratio_transfer(std::span<const double> h2res, std::span<const double> l2res,
                                   std::span<const double> l1) {
  const double k = std::max(0.0, 1.0 - min_value(l2res));
  std::vector<double> out(l1.size());
  for (std::size_t i = 0; i < l1.size(); ++i) out[i] = h2res[i] / (l2res[i] + k) * (l1[i] + k);
  return out;
}

std::vector<double> synthesize_detail_1d(const SrPayload& p, std::span<const double> l, V2Alternative alt) {
  switch (p.version) {
    case 1:
      return scaled(l, p.scalars.at(0));
    case 2: {
      const Subbands1D lvl2 = forward1d(l, p.basis);
      if (alt == V2Alternative::scalar_proj) return scaled(l, safe_projection(lvl2.high, lvl2.low));
      const auto h2 = res_upsample(lvl2.high);
      const auto l2 = res_upsample(lvl2.low);
      if (alt == V2Alternative::res_scalar) return scaled(l, safe_projection(h2, l2));
      return ratio_transfer(h2, l2, l);
    }
    default: {
      if (p.basis == Basis::coslet) return std::vector<double>(l.size(), 0.0);
      // Haar detail (b - a)/2 is a quarter of the centred difference taken
      // on the half-rate approximation grid.
      const double kernel[3] = {-0.5, 0.0, 0.5};
      return scaled(correlate1d(l, kernel, PadMode::replicate), 0.25);
    }
  }
}

std::array<Plane, 3> synthesize_detail_2d(const SrPayload& p, const Plane& ll, std::size_t channel,
                                          V2Alternative alt) {
  auto scaled_plane = [&](double c) { return Plane(ll.rows(), ll.cols(), scaled(ll.values(), c)); };
  switch (p.version) {
    case 1:
      return {scaled_plane(p.scalars.at(3 * channel)), scaled_plane(p.scalars.at(3 * channel + 1)),
              scaled_plane(p.scalars.at(3 * channel + 2))};
    case 2: {
      const Subbands2D lvl2 = forward2d(ll, p.basis);
      const std::array<const Plane*, 3> bands = {&lvl2.lh, &lvl2.hl, &lvl2.hh};
      std::array<Plane, 3> out;
      if (alt == V2Alternative::scalar_proj) {
        for (std::size_t b = 0; b < 3; ++b) out[b] = scaled_plane(safe_projection(bands[b]->values(), lvl2.ll.values()));
        return out;
      }
      const Plane l2 = res_upsample(lvl2.ll);
      for (std::size_t b = 0; b < 3; ++b) {
        const Plane h2 = res_upsample(*bands[b]);
        if (alt == V2Alternative::res_scalar) {
          out[b] = scaled_plane(safe_projection(h2.values(), l2.values()));
        } else {
          out[b] = Plane(ll.rows(), ll.cols(), ratio_transfer(h2.values(), l2.values(), ll.values()));
        }
      }
      return out;
    }
    default: {
      if (p.basis == Basis::coslet) {
        return {Plane(ll.rows(), ll.cols()), Plane(ll.rows(), ll.cols()), Plane(ll.rows(), ll.cols())};
      }
      const Plane nh(1, 3, std::vector<double>{-0.5, 0.0, 0.5});
      const Plane nv = nh.transposed();
      Plane lh = correlate2d(ll, nh, PadMode::replicate);
      Plane hl = correlate2d(ll, nv, PadMode::replicate);
      Plane hh = correlate2d(hl, nh, PadMode::replicate);
      for (auto& v : lh.values()) v *= 0.25;
      for (auto& v : hl.values()) v *= 0.25;
      for (auto& v : hh.values()) v *= 0.0625;
      return {std::move(lh), std::move(hl), std::move(hh)};
    }
  }
}

void check_payload(const SrPayload& p) {
  require_version(p.version);
  if (p.ll.empty()) throw std::invalid_argument("SR payload has no channels");
  if (p.media == Media::signal && (p.ll.size() != 1 || p.rows != 1)) {
    throw std::invalid_argument("SR payload: signals carry one 1-row channel");
  }
  const std::size_t want_rows = p.media == Media::signal ? 1 : p.rows / 2;
  for (const auto& ch : p.ll) {
    if (ch.rows() != want_rows || ch.cols() * 2 != p.cols || (p.media == Media::image && p.rows % 2 != 0)) {
      throw std::invalid_argument("SR payload: approximation size does not match declared dimensions");
    }
  }
  const std::size_t want = p.version == 1 ? (p.media == Media::signal ? 1 : 3 * p.ll.size()) : 0;
  if (p.scalars.size() != want) throw std::invalid_argument("SR payload: wrong scalar count for version");
}

}  // namespace

SrPayload sr_encode(const Signal& s, Basis basis, int version) {
  validate(s);
  require_version(version);
  if (s.size() % 2 != 0) throw std::invalid_argument("sr_encode: signal length must be even");
  if (version == 2 && s.size() % 4 != 0) throw std::invalid_argument("sr_encode: version 2 needs length divisible by 4");
  const Subbands1D sb = forward1d(s.samples, basis);
  SrPayload p;
  p.basis = basis;
  p.version = version;
  p.media = Media::signal;
  p.rows = 1;
  p.cols = static_cast<std::uint32_t>(s.size());
  p.sample_rate = s.sample_rate;
  p.ll.emplace_back(1, sb.low.size(), sb.low);
  if (version == 1) p.scalars.push_back(safe_projection(sb.high, sb.low));
  return p;
}

SrPayload sr_encode(const Image& img, Basis basis, int version) {
  validate(img);
  require_version(version);
  if (img.rows() % 2 != 0 || img.cols() % 2 != 0) throw std::invalid_argument("sr_encode: image dimensions must be even");
  if (version == 2 && (img.rows() % 4 != 0 || img.cols() % 4 != 0)) {
    throw std::invalid_argument("sr_encode: version 2 needs dimensions divisible by 4");
  }
  SrPayload p;
  p.basis = basis;
  p.version = version;
  p.media = Media::image;
  p.rows = static_cast<std::uint32_t>(img.rows());
  p.cols = static_cast<std::uint32_t>(img.cols());
  for (const auto& ch : img.channels) {
    Subbands2D sb = forward2d(ch, basis);
    if (version == 1) {
      p.scalars.push_back(safe_projection(sb.lh.values(), sb.ll.values()));
      p.scalars.push_back(safe_projection(sb.hl.values(), sb.ll.values()));
      p.scalars.push_back(safe_projection(sb.hh.values(), sb.ll.values()));
    }
    p.ll.push_back(std::move(sb.ll));
  }
  return p;
}

Signal sr_decode_signal(const SrPayload& p, V2Alternative alt) {
  if (p.media != Media::signal) throw std::invalid_argument("sr_decode_signal: payload holds an image");
  check_payload(p);
  Subbands1D sb;
  sb.basis = p.basis;
  sb.low = p.ll.front().vector();
  sb.high = synthesize_detail_1d(p, sb.low, alt);
  return Signal{inverse1d(sb), p.sample_rate};
}

Image sr_decode_image(const SrPayload& p, V2Alternative alt) {
  if (p.media != Media::image) throw std::invalid_argument("sr_decode_image: payload holds a signal");
  check_payload(p);
  Image out;
  for (std::size_t c = 0; c < p.ll.size(); ++c) {
    auto details = synthesize_detail_2d(p, p.ll[c], c, alt);
    Subbands2D sb;
    sb.basis = p.basis;
    sb.ll = p.ll[c];
    sb.lh = std::move(details[0]);
    sb.hl = std::move(details[1]);
    sb.hh = std::move(details[2]);
    out.channels.push_back(inverse2d(sb));
  }
  return out;
}

Plane DeblurMask::kernel() const {
  Plane k(n, n, alpha);
  k(n / 2, n / 2) = beta;
  return k;
}

DeblurMask make_deblur_mask(std::size_t n, double alpha, double beta, bool edge_mode) {
  require_odd_mask(n, "deblur mask");
  const double target = edge_mode ? 0.0 : 1.0;
  const double sum = static_cast<double>(n * n - 1) * alpha + beta;
  if (std::abs(sum - target) > 1e-9) {
    throw std::invalid_argument("deblur mask violates (N^2-1)*alpha + beta = " + std::to_string(target));
  }
  return DeblurMask{n, alpha, beta};
}

DeblurMask deblur_mask_from_beta(std::size_t n, double beta) {
  require_odd_mask(n, "deblur mask");
  return DeblurMask{n, (1.0 - beta) / static_cast<double>(n * n - 1), beta};
}

std::size_t nearest_constraint_size(double alpha, double beta, std::size_t max_n) {
  if (max_n < 3) max_n = 3;
  if (!(alpha < 0.0) || !(beta > 1.0)) return 3;
  const double n_real = std::sqrt(1.0 + (1.0 - beta) / alpha);
  const double k = std::round((n_real - 1.0) / 2.0);
  const auto n = static_cast<std::size_t>(std::max(1.0, k)) * 2 + 1;
  return std::min(n, max_n % 2 == 1 ? max_n : max_n - 1);
}

DeblurMask preset_deblur_mask() {
  return deblur_mask_from_beta(nearest_constraint_size(kPresetDeblurAlpha, kPresetDeblurBeta), kPresetDeblurBeta);
}

namespace {

// Sum over the n x n window, replicate borders; separable running sums.
Plane box_sum(const Plane& p, std::size_t n) {
  const std::size_t h = n / 2;
  const Plane padded = pad_plane(p, h, PadMode::replicate);
  Plane rows(padded.rows(), p.cols());
  for (std::size_t r = 0; r < padded.rows(); ++r) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += padded(r, j);
    rows(r, 0) = acc;
    for (std::size_t c = 1; c < p.cols(); ++c) {
      acc += padded(r, c + n - 1) - padded(r, c - 1);
      rows(r, c) = acc;
    }
  }
  Plane out(p.rows(), p.cols());
  for (std::size_t c = 0; c < p.cols(); ++c) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += rows(i, c);
    out(0, c) = acc;
    for (std::size_t r = 1; r < p.rows(); ++r) {
      acc += rows(r + n - 1, c) - rows(r - 1, c);
      out(r, c) = acc;
    }
  }
  return out;
}

}  // namespace

Plane deblur_2d(const Plane& p, const DeblurMask& m) {
  require_odd_mask(m.n, "deblur_2d");
  if (m.n > p.rows() || m.n > p.cols()) throw std::invalid_argument("deblur_2d: mask larger than image");
  // alpha on every tap plus (beta - alpha) extra at the centre.
  const Plane s = box_sum(p, m.n);
  Plane out(p.rows(), p.cols());
  for (std::size_t i = 0; i < p.size(); ++i) out.values()[i] = m.alpha * s.values()[i] + (m.beta - m.alpha) * p.values()[i];
  return out;
}

Image deblur_2d(const Image& img, const DeblurMask& m) {
  Image out;
  for (const auto& ch : img.channels) out.channels.push_back(deblur_2d(ch, m));
  return out;
}

Signal deblur_1d(const Signal& s, const DeblurMask& m) {
  validate(s);
  require_odd_mask(m.n, "deblur_1d");
  const std::size_t h = m.n / 2;
  Plane stack(m.n, s.size());
  for (std::size_t i = 0; i < m.n; ++i) {
    const double gain = 1.0 + 0.1 * (static_cast<double>(i) - static_cast<double>(h));
    for (std::size_t t = 0; t < s.size(); ++t) stack(m.n - 1 - i, t) = gain * s.samples[t];
  }
  const Plane k = m.kernel();
  const Plane padded = pad_plane(stack, h, PadMode::replicate);
  Signal out{std::vector<double>(s.size()), s.sample_rate};
  for (std::size_t t = 0; t < s.size(); ++t) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m.n; ++i) {
      for (std::size_t j = 0; j < m.n; ++j) acc += k(i, j) * padded(h + i, t + j);
    }
    out.samples[t] = acc;
  }
  return out;
}

double deblur_fitness(const std::vector<TrainingPair>& pairs, const DeblurMask& m) {
  if (pairs.empty()) throw std::invalid_argument("deblur_fitness: empty training set");
  double total = 0.0;
  for (const auto& [orig, degraded] : pairs) {
    const Plane est = deblur_2d(degraded, m);
    double acc = 0.0;
    for (std::size_t i = 0; i < orig.size(); ++i) {
      const double d = est.values()[i] - orig.values()[i];
      acc += d * d;
    }
    total += acc / static_cast<double>(orig.size());
  }
  return total / static_cast<double>(pairs.size());
}

DeblurMask chromosome_to_mask(double alpha, double beta, std::size_t max_n) {
  return deblur_mask_from_beta(nearest_constraint_size(alpha, beta, max_n), beta);
}

GaResult ga_tune_mask(const std::vector<TrainingPair>& pairs, const GaConfig& cfg) {
  if (pairs.empty()) throw std::invalid_argument("ga_tune_mask: empty training set");
  if (cfg.population < 2 || cfg.survivors < 1 || cfg.survivors > cfg.population) {
    throw std::invalid_argument("ga_tune_mask: need population >= 2 and 1 <= survivors <= population");
  }
  if (!(cfg.alpha_lo < cfg.alpha_hi) || !(cfg.beta_lo < cfg.beta_hi)) {
    throw std::invalid_argument("ga_tune_mask: empty bounds");
  }

  struct Chromosome {
    double alpha;
    double beta;
    double mse;
  };

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> ua(cfg.alpha_lo, cfg.alpha_hi);
  std::uniform_real_distribution<double> ub(cfg.beta_lo, cfg.beta_hi);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double sa = cfg.mutation_sigma * (cfg.alpha_hi - cfg.alpha_lo);
  const double sb = cfg.mutation_sigma * (cfg.beta_hi - cfg.beta_lo);

  // Open lower alpha / beta bounds: keep strictly inside.
  auto clamp_alpha = [&](double a) { return std::clamp(a, std::nextafter(cfg.alpha_lo, 0.0), cfg.alpha_hi); };
  auto clamp_beta = [&](double b) { return std::clamp(b, std::nextafter(cfg.beta_lo, cfg.beta_hi), cfg.beta_hi); };

  auto score = [&](Chromosome& c) { c.mse = deblur_fitness(pairs, chromosome_to_mask(c.alpha, c.beta, cfg.max_n)); };

  std::vector<Chromosome> pop(cfg.population);
  for (auto& c : pop) {
    c.alpha = clamp_alpha(ua(rng));
    c.beta = clamp_beta(ub(rng));
    score(c);
  }
  auto by_mse = [](const Chromosome& a, const Chromosome& b) { return a.mse < b.mse; };

  for (std::size_t g = 0; g < cfg.generations; ++g) {
    // Genocide: drop the worst, keep the survivors as parents.
    std::stable_sort(pop.begin(), pop.end(), by_mse);
    pop.resize(cfg.survivors);
    std::uniform_int_distribution<std::size_t> pick(0, cfg.survivors - 1);
    while (pop.size() < cfg.population) {
      const Chromosome& pa = pop[pick(rng)];
      const Chromosome& pb = pop[pick(rng)];
      // Two genes, so the single cut point sits between alpha and beta.
      Chromosome child{pa.alpha, pb.beta, 0.0};
      if (u01(rng) < cfg.mutation_rate) child.alpha = clamp_alpha(child.alpha + sa * gauss(rng));
      if (u01(rng) < cfg.mutation_rate) child.beta = clamp_beta(child.beta + sb * gauss(rng));
      score(child);
      pop.push_back(child);
    }
  }
  const auto best = *std::min_element(pop.begin(), pop.end(), by_mse);
  return GaResult{chromosome_to_mask(best.alpha, best.beta, cfg.max_n), best.mse};
}

}  // namespace fitkit
