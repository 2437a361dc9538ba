// fitkit command-line front end. Every run prints one JSON line on stdout.
// Exit codes: 0 ok, 1 data error, 2 usage error.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "fitkit/container.hpp"
#include "fitkit/core.hpp"
#include "fitkit/denoise.hpp"
#include "fitkit/edges.hpp"
#include "fitkit/fit1d.hpp"
#include "fitkit/fit2d.hpp"
#include "fitkit/io.hpp"
#include "fitkit/metrics.hpp"
#include "fitkit/multires.hpp"
#include "fitkit/superres.hpp"
#include "fitkit/synth.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace fitkit;

namespace {

bool is_image_path(const std::string& p) {
  auto ext = fs::path(p).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".pgm" || ext == ".ppm" || ext == ".pnm";
}

bool has_ext(const std::string& p, const char* want) { return fs::path(p).extension() == want; }

json number(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

json summary(std::span<const double> v) {
  if (v.empty()) return json{{"n", 0}};
  return json{{"n", v.size()}, {"min", min_value(v)}, {"max", max_value(v)}, {"mean", mean(v)}};
}

void emit(const std::string& cmd, json inputs, json params, json metrics) {
  json rec{{"cmd", cmd}, {"inputs", std::move(inputs)}, {"params", std::move(params)}, {"metrics", std::move(metrics)}};
  std::cout << rec.dump() << '\n';
}

// Real-valued planes go out as concatenated float32 (.f32) or a min-max
// 8-bit rendering (.pgm/.ppm).
void write_planes(const std::string& path, const std::vector<Plane>& planes) {
  if (planes.empty()) return;
  if (has_ext(path, ".f32")) {
    const std::size_t rows = planes.front().rows();
    const std::size_t cols = planes.front().cols();
    std::vector<double> all;
    for (const auto& p : planes) all.insert(all.end(), p.values().begin(), p.values().end());
    io::write_raw_f32(path, Plane(rows * planes.size(), cols, std::move(all)));
    return;
  }
  Image img;
  for (const auto& p : planes) img.channels.push_back(io::to_display8(p));
  if (img.channel_count() == 2) img.channels.resize(1);
  io::write_pnm(path, img);
}

void write_signal_or_image(const std::string& path, const Signal* s, const Image* img) {
  if (s) io::write_signal_csv(path, s->samples);
  else io::write_pnm(path, *img);
}

const std::vector<std::string> kBases = {"haar", "coslet"};
const std::vector<std::string> kPads = {"zero", "cyclic", "mirror", "replicate"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fitkit: frequency-in-time analysis, multiresolution denoising and super-resolution"};
  app.require_subcommand(1);
  std::function<void()> run;

  // synth
  {
    auto* sc = app.add_subcommand("synth", "Generate a synthetic test signal as CSV");
    auto kind = std::make_shared<std::string>("sine");
    auto spec = std::make_shared<SynthSpec>();
    auto out = std::make_shared<std::string>();
    sc->add_option("--kind", *kind, "four_tone | two_tone | sine | ecg_like")
        ->check(CLI::IsMember({"four_tone", "two_tone", "sine", "ecg_like"}));
    sc->add_option("--fs", spec->fs, "Sample rate in Hz (0 = kind default)");
    sc->add_option("--duration", spec->duration, "Seconds (0 = kind default)");
    sc->add_option("--noise", spec->noise_percent, "Gaussian noise, percent of signal RMS")->check(CLI::NonNegativeNumber);
    sc->add_option("--seed", spec->seed, "Noise seed");
    sc->add_option("--freq", spec->frequency, "Sine frequency in Hz");
    sc->add_option("--pulse-rate", spec->pulse_rate, "ecg_like pulses per second");
    sc->add_option("--baseline", spec->ecg_baseline, "ecg_like DC level");
    sc->add_option("-o,--output", *out, "Output CSV")->required();
    sc->callback([=, &run] {
      run = [=] {
        spec->kind = parse_synth_kind(*kind);
        const Signal s = synth(*spec);
        io::write_signal_csv(*out, s.samples);
        emit("synth", json::object(),
             {{"kind", *kind}, {"fs", s.sample_rate}, {"noise_percent", spec->noise_percent}, {"seed", spec->seed},
              {"output", *out}},
             summary(s.samples));
      };
    });
  }

  // fit1d
  {
    auto* sc = app.add_subcommand("fit1d", "Frequency-in-time of a CSV signal");
    auto in = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto variant = std::make_shared<std::string>("equalized");
    auto mode = std::make_shared<std::string>("overlap");
    auto form = std::make_shared<std::string>("abs");
    auto pad = std::make_shared<std::string>("cyclic");
    auto m = std::make_shared<std::size_t>(3);
    auto fs_hz = std::make_shared<double>(1.0);
    sc->add_option("input", *in, "Signal CSV")->required()->check(CLI::ExistingFile);
    sc->add_option("--variant", *variant,
                   "overlap: raw | equalized | averaged | mask_eq | mask_av | diff_eq | diff_av; nonoverlap: raw | eq | av");
    sc->add_option("--mode", *mode, "overlap | nonoverlap")->check(CLI::IsMember({"overlap", "nonoverlap"}));
    sc->add_option("--form", *form, "Non-overlap form")->check(CLI::IsMember({"sqrt_conj", "abs"}));
    sc->add_option("--m-size", *m, "Mask length M (odd)");
    sc->add_option("--pad", *pad, "Padding")->check(CLI::IsMember(kPads));
    sc->add_option("--fs", *fs_hz, "Sample rate of the input");
    sc->add_option("-o,--output", *out, "Output CSV of Hz values");
    sc->callback([=, &run] {
      static const std::vector<std::string> overlap = {"raw",     "equalized", "averaged", "mask_eq",
                                                       "mask_av", "diff_eq",   "diff_av",  "eq", "av"};
      static const std::vector<std::string> nonoverlap = {"raw", "eq", "av", "equalized", "averaged"};
      const auto& allowed = *mode == "overlap" ? overlap : nonoverlap;
      if (std::find(allowed.begin(), allowed.end(), *variant) == allowed.end()) {
        throw CLI::ValidationError("--variant", "'" + *variant + "' is not valid in " + *mode + " mode");
      }
      if (*m < 3 || *m % 2 == 0) throw CLI::ValidationError("--m-size", "must be odd and >= 3");
      run = [=] {
        const Signal s = io::read_signal_csv(*in, *fs_hz);
        FitSeries f;
        if (*mode == "overlap") {
          f = fit_overlap(s, parse_fit1d_variant(*variant), Fit1DOptions{*m, parse_pad_mode(*pad)});
        } else {
          f = fit_nonoverlap(s, parse_nonoverlap_variant(*variant), parse_fit_form(*form));
        }
        if (!out->empty()) io::write_signal_csv(*out, f.hz);
        json metrics = summary(f.hz);
        metrics["abs_mean_fallback"] = f.abs_mean_fallback;
        metrics["degenerate_input"] = f.degenerate_input;
        emit("fit1d", {{"input", *in}},
             {{"variant", f.variant}, {"mode", *mode}, {"m_size", *m}, {"pad", *pad}, {"output", *out}}, metrics);
      };
    });
  }

  // fit2d
  {
    auto* sc = app.add_subcommand("fit2d", "Frequency-in-time of a PGM/PPM image");
    auto in = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto variant = std::make_shared<std::string>("equalized");
    auto mode = std::make_shared<std::string>("overlap");
    auto form = std::make_shared<std::string>("abs");
    auto mask = std::make_shared<std::string>("segmental");
    auto pad = std::make_shared<std::string>("zero");
    auto m = std::make_shared<std::size_t>(3);
    sc->add_option("input", *in, "PGM/PPM image")->required()->check(CLI::ExistingFile);
    sc->add_option("--variant", *variant, "overlap: raw | equalized | averaged | mask; nonoverlap: raw | eq | av");
    sc->add_option("--mode", *mode, "overlap | nonoverlap")->check(CLI::IsMember({"overlap", "nonoverlap"}));
    sc->add_option("--form", *form, "Non-overlap form")->check(CLI::IsMember({"sqrt_conj", "abs"}));
    sc->add_option("--mask", *mask, "segmental | square")->check(CLI::IsMember({"segmental", "square"}));
    sc->add_option("--m-size", *m, "Mask size M (odd)");
    sc->add_option("--pad", *pad, "Padding")->check(CLI::IsMember(kPads));
    sc->add_option("-o,--output", *out,
                   "Output (.f32 raw planes, or .pgm/.ppm rendering); non-overlap writes _h/_v/_d files");
    sc->callback([=, &run] {
      static const std::vector<std::string> overlap = {"raw", "equalized", "averaged", "mask", "eq", "av"};
      static const std::vector<std::string> nonoverlap = {"raw", "eq", "av", "equalized", "averaged"};
      const auto& allowed = *mode == "overlap" ? overlap : nonoverlap;
      if (std::find(allowed.begin(), allowed.end(), *variant) == allowed.end()) {
        throw CLI::ValidationError("--variant", "'" + *variant + "' is not valid in " + *mode + " mode");
      }
      if (*m < 3 || *m % 2 == 0) throw CLI::ValidationError("--m-size", "must be odd and >= 3");
      run = [=] {
        const Image img = io::read_pnm(*in);
        json metrics;
        if (*mode == "overlap") {
          const FitImage f = fit_image_overlap(
              img, parse_fit2d_variant(*variant), Fit2DOptions{parse_mask_kind(*mask), *m, parse_pad_mode(*pad)});
          if (!out->empty()) write_planes(*out, f.channels);
          std::vector<double> all;
          for (const auto& c : f.channels) all.insert(all.end(), c.values().begin(), c.values().end());
          metrics = summary(all);
          metrics["abs_mean_fallback"] = f.abs_mean_fallback;
        } else {
          const FitImage f = fit_image_nonoverlap(img, parse_nonoverlap_variant(*variant), parse_fit_form(*form));
          if (!out->empty()) {
            const fs::path p(*out);
            auto named = [&](const char* tag) {
              return (p.parent_path() / (p.stem().string() + tag + p.extension().string())).string();
            };
            write_planes(named("_h"), f.horizontal);
            write_planes(named("_v"), f.vertical);
            write_planes(named("_d"), f.diagonal);
          }
          auto flat = [](const std::vector<Plane>& v) {
            std::vector<double> all;
            for (const auto& c : v) all.insert(all.end(), c.values().begin(), c.values().end());
            return all;
          };
          metrics = {{"horizontal", summary(flat(f.horizontal))},
                     {"vertical", summary(flat(f.vertical))},
                     {"diagonal", summary(flat(f.diagonal))}};
        }
        emit("fit2d", {{"input", *in}, {"rows", img.rows()}, {"cols", img.cols()}, {"channels", img.channel_count()}},
             {{"variant", *variant}, {"mode", *mode}, {"mask", *mask}, {"m_size", *m}, {"output", *out}}, metrics);
      };
    });
  }

  // witness
  {
    auto* sc = app.add_subcommand("witness", "Witness-bar positions of a CSV signal");
    auto in = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto levels = std::make_shared<std::size_t>(16);
    sc->add_option("input", *in, "Signal CSV")->required()->check(CLI::ExistingFile);
    sc->add_option("--levels", *levels, "Number of horizontal lines (>= 2)")->check(CLI::Range(2, 1 << 20));
    sc->add_option("-o,--output", *out, "Output CSV of positions");
    sc->callback([=, &run] {
      run = [=] {
        const auto bars = witness_bars(io::read_signal_csv(*in), *levels);
        if (!out->empty()) io::write_signal_csv(*out, bars);
        emit("witness", {{"input", *in}}, {{"levels", *levels}, {"output", *out}}, {{"bars", bars.size()}});
      };
    });
  }

  // phase
  {
    auto* sc = app.add_subcommand("phase", "Phase-plane trajectory (x, x') of a CSV signal");
    auto in = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto mode = std::make_shared<std::string>("overlap");
    sc->add_option("input", *in, "Signal CSV")->required()->check(CLI::ExistingFile);
    sc->add_option("--mode", *mode, "overlap | nonoverlap")->check(CLI::IsMember({"overlap", "nonoverlap"}));
    sc->add_option("-o,--output", *out, "Output CSV with x,dx columns");
    sc->callback([=, &run] {
      run = [=] {
        const auto pts = phase_plane(io::read_signal_csv(*in), parse_phase_mode(*mode));
        if (!out->empty()) {
          std::string text = "x,dx\n";
          char buf[96];
          for (const auto& [x, dx] : pts) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", x, dx);
            text += buf;
          }
          io::write_atomic(*out, text);
        }
        emit("phase", {{"input", *in}}, {{"mode", *mode}, {"output", *out}}, {{"points", pts.size()}});
      };
    });
  }

  // haar / coslet
  for (const char* name : {"haar", "coslet"}) {
    const Basis basis = parse_basis(name);
    auto* sc = app.add_subcommand(name, std::string("Multi-level ") + name + " decomposition of a signal or image");
    auto in = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto levels = std::make_shared<int>(1);
    sc->add_option("input", *in, "Signal CSV or PGM/PPM image")->required()->check(CLI::ExistingFile);
    sc->add_option("--levels", *levels, "Decomposition levels")->check(CLI::Range(1, 30));
    sc->add_option("-o,--output", *out,
                   "Signals: CSV [approx | coarsest .. finest details]; images: tiled layout (.f32 or .pgm/.ppm)");
    sc->callback([=, &run] {
      run = [=] {
        json metrics;
        json inputs{{"input", *in}};
        if (is_image_path(*in)) {
          const Image img = io::read_pnm(*in);
          std::vector<Plane> tiled;
          double err = 0.0;
          for (const auto& ch : img.channels) {
            const Pyramid2D pyr = split_levels(ch, basis, *levels);
            const Plane back = merge_levels(pyr);
            for (std::size_t i = 0; i < ch.size(); ++i) err = std::max(err, std::abs(back.values()[i] - ch.values()[i]));
            // Mallat layout: approximation top-left, details around it.
            Plane t(ch.rows(), ch.cols());
            auto blit = [&t](const Plane& p, std::size_t r0, std::size_t c0) {
              for (std::size_t r = 0; r < p.rows(); ++r)
                for (std::size_t c = 0; c < p.cols(); ++c) t(r0 + r, c0 + c) = p(r, c);
            };
            blit(pyr.approx, 0, 0);
            for (int l = 0; l < pyr.levels(); ++l) {
              const auto& d = pyr.details[static_cast<std::size_t>(l)];
              const std::size_t h = d[0].rows();
              const std::size_t w = d[0].cols();
              blit(d[0], 0, w);
              blit(d[1], h, 0);
              blit(d[2], h, w);
            }
            tiled.push_back(std::move(t));
          }
          if (!out->empty()) write_planes(*out, tiled);
          inputs["rows"] = img.rows();
          inputs["cols"] = img.cols();
          metrics = {{"roundtrip_max_abs_error", err}};
        } else {
          const Signal s = io::read_signal_csv(*in);
          const Pyramid1D pyr = split_levels(s.samples, basis, *levels);
          const auto back = merge_levels(pyr);
          double err = 0.0;
          for (std::size_t i = 0; i < back.size(); ++i) err = std::max(err, std::abs(back[i] - s.samples[i]));
          std::vector<double> flat = pyr.approx;
          for (auto it = pyr.details.rbegin(); it != pyr.details.rend(); ++it) flat.insert(flat.end(), it->begin(), it->end());
          if (!out->empty()) io::write_signal_csv(*out, flat);
          inputs["samples"] = s.size();
          metrics = {{"roundtrip_max_abs_error", err}};
        }
        emit(name, inputs, {{"levels", *levels}, {"output", *out}}, metrics);
      };
    });
  }

  // denoise
  {
    auto* sc = app.add_subcommand("denoise", "Denoise a signal or image");
    auto in = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto ref = std::make_shared<std::string>();
    auto method = std::make_shared<std::string>("shrink");
    auto basis = std::make_shared<std::string>("haar");
    auto levels = std::make_shared<int>(3);
    auto passes = std::make_shared<int>(1);
    auto frame = std::make_shared<std::size_t>(41);
    auto degree = std::make_shared<int>(3);
    auto m = std::make_shared<std::size_t>(3);
    sc->add_option("input", *in, "Signal CSV or PGM/PPM image")->required()->check(CLI::ExistingFile);
    sc->add_option("--method", *method,
                   "sg | mf | ds (direct); keep | shrink | wmf | wds (transform domain); sr1 | sr2 | sr3 (detail resynthesis)")
        ->check(CLI::IsMember({"sg", "mf", "ds", "keep", "shrink", "wmf", "wds", "sr1", "sr2", "sr3"}));
    sc->add_option("--basis", *basis, "haar | coslet")->check(CLI::IsMember(kBases));
    sc->add_option("--levels", *levels, "Transform levels")->check(CLI::Range(1, 30));
    sc->add_option("--passes", *passes, "Smoother passes")->check(CLI::Range(1, 10000));
    sc->add_option("--frame", *frame, "Savitzky-Golay frame length (odd)");
    sc->add_option("--degree", *degree, "Savitzky-Golay degree");
    sc->add_option("--m-size", *m, "Mean-filter size for images (odd)");
    sc->add_option("--ref", *ref, "Clean reference for MAE/MSE/PSNR")->check(CLI::ExistingFile);
    sc->add_option("-o,--output", *out, "Output path (same format as input)");
    sc->callback([=, &run] {
      if (*frame < 3 || *frame % 2 == 0) throw CLI::ValidationError("--frame", "must be odd and >= 3");
      if (*m < 3 || *m % 2 == 0) throw CLI::ValidationError("--m-size", "must be odd and >= 3");
      run = [=] {
        const Basis b = parse_basis(*basis);
        WaveletDenoiseOptions wopt{b, *levels, WaveletMethod::shrink, *passes};
        if (*method == "keep") wopt.method = WaveletMethod::keep;
        if (*method == "wmf") wopt.method = WaveletMethod::mf;
        if (*method == "wds") wopt.method = WaveletMethod::ds;
        const int sr_version = method->size() == 3 && method->rfind("sr", 0) == 0 ? (*method)[2] - '0' : 0;
        json metrics;
        if (is_image_path(*in)) {
          const Image img = io::read_pnm(*in);
          Image res;
          if (*method == "sg") {
            const Plane k = savgol_filters_2d(*frame, *degree).front();
            for (const auto& ch : img.channels) res.channels.push_back(correlate2d(ch, k, PadMode::mirror));
          } else if (*method == "mf") {
            res = mf2d(img, *m, *passes);
          } else if (*method == "ds") {
            res = ds2d(img, *passes, true);
          } else if (sr_version) {
            res = sr_decode_image(sr_encode(img, b, sr_version));
          } else {
            res = wavelet_denoise(img, wopt);
          }
          if (!out->empty()) io::write_pnm(*out, res);
          if (!ref->empty()) {
            const Image clean = io::read_pnm(*ref);
            const Image q = quantize8(res);
            metrics = {{"mae", mae(clean, q)}, {"mse", mse(clean, q)}, {"psnr", number(psnr(clean, q, 255.0))},
                       {"psnr_input", number(psnr(clean, img, 255.0))}};
          }
        } else {
          const Signal s = io::read_signal_csv(*in);
          Signal res{{}, s.sample_rate};
          if (*method == "sg") {
            const std::size_t h = *frame / 2;
            res.samples = savgol_apply_1d(s.samples, savgol_coeffs_1d(h, h, *degree));
          } else if (*method == "mf") {
            res.samples = mf1d(s.samples, *passes);
          } else if (*method == "ds") {
            res.samples = ds1d(s.samples, *passes);
          } else if (sr_version) {
            res = sr_decode_signal(sr_encode(s, b, sr_version));
          } else {
            res = wavelet_denoise(s, wopt);
          }
          if (!out->empty()) io::write_signal_csv(*out, res.samples);
          if (!ref->empty()) {
            const Signal clean = io::read_signal_csv(*ref);
            const double peak = std::max(std::abs(min_value(clean.samples)), std::abs(max_value(clean.samples)));
            metrics = {{"mae", mae(clean.samples, res.samples)},
                       {"mse", mse(clean.samples, res.samples)},
                       {"psnr", number(psnr(clean.samples, res.samples, peak))},
                       {"psnr_input", number(psnr(clean.samples, s.samples, peak))}};
          }
        }
        emit("denoise", {{"input", *in}, {"ref", *ref}},
             {{"method", *method}, {"basis", *basis}, {"levels", *levels}, {"passes", *passes}, {"frame", *frame},
              {"degree", *degree}, {"output", *out}},
             metrics);
      };
    });
  }

  // sr-encode
  {
    auto* sc = app.add_subcommand("sr-encode", "Drop level-1 details into an SR container");
    auto in = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto basis = std::make_shared<std::string>("haar");
    auto version = std::make_shared<int>(1);
    auto f64 = std::make_shared<bool>(false);
    sc->add_option("input", *in, "Signal CSV or PGM/PPM image")->required()->check(CLI::ExistingFile);
    sc->add_option("--basis", *basis, "haar | coslet")->check(CLI::IsMember(kBases));
    sc->add_option("--version", *version, "Codec version 1 | 2 | 3")->check(CLI::IsMember({1, 2, 3}));
    sc->add_flag("--f64", *f64, "Store the approximation band as float64");
    sc->add_option("-o,--output", *out, "Container path")->required();
    sc->callback([=, &run] {
      run = [=] {
        const Basis b = parse_basis(*basis);
        const SrPayload p = is_image_path(*in) ? sr_encode(io::read_pnm(*in), b, *version)
                                               : sr_encode(io::read_signal_csv(*in), b, *version);
        const auto bytes = io::serialize_payload(p, *f64);
        io::write_atomic(*out, bytes);
        const double cr = p.compression_ratio();
        emit("sr-encode", {{"input", *in}},
             {{"basis", *basis}, {"version", *version}, {"f64", *f64}, {"output", *out}},
             {{"cr", cr}, {"pss", percentage_space_saving(cr)}, {"payload_samples", p.payload_samples()},
              {"original_samples", p.original_samples()}, {"bytes", bytes.size()}, {"scalars", p.scalars}});
      };
    });
  }

  // sr-decode
  {
    auto* sc = app.add_subcommand("sr-decode", "Rebuild a signal or image from an SR container");
    auto in = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto ref = std::make_shared<std::string>();
    auto alt = std::make_shared<std::string>("elementwise");
    auto fs_hz = std::make_shared<double>(1.0);
    auto deblur_beta = std::make_shared<double>(0.0);
    auto deblur_n = std::make_shared<std::size_t>(3);
    sc->add_option("input", *in, "Container path")->required()->check(CLI::ExistingFile);
    sc->add_option("--alt", *alt, "Version-2 detail rule")
        ->check(CLI::IsMember({"elementwise", "scalar_proj", "res_scalar"}));
    sc->add_option("--fs", *fs_hz, "Sample rate to attach to decoded signals");
    sc->add_option("--deblur-beta", *deblur_beta, "Apply a deblurring mask with this centre value (0 = off)");
    sc->add_option("--deblur-n", *deblur_n, "Deblurring mask size (odd)");
    sc->add_option("--ref", *ref, "Original for MAE/MSE/PSNR")->check(CLI::ExistingFile);
    sc->add_option("-o,--output", *out, "Output CSV (signals) or PGM/PPM (images)")->required();
    sc->callback([=, &run] {
      run = [=] {
        SrPayload p = io::read_payload(*in);
        p.sample_rate = *fs_hz;
        const V2Alternative a = parse_v2_alternative(*alt);
        const bool deblur = *deblur_beta != 0.0;
        json metrics;
        json inputs{{"input", *in}, {"version", p.version}, {"basis", to_string(p.basis)}};
        if (p.media == Media::signal) {
          Signal s = sr_decode_signal(p, a);
          if (deblur) s = deblur_1d(s, deblur_mask_from_beta(*deblur_n, *deblur_beta));
          io::write_signal_csv(*out, s.samples);
          if (!ref->empty()) {
            const Signal o = io::read_signal_csv(*ref);
            const double peak = std::max(std::abs(min_value(o.samples)), std::abs(max_value(o.samples)));
            metrics = {{"mae", mae(o.samples, s.samples)}, {"mse", mse(o.samples, s.samples)},
                       {"psnr", number(psnr(o.samples, s.samples, peak))}};
          }
          inputs["samples"] = s.size();
        } else {
          Image img = sr_decode_image(p, a);
          if (deblur) img = deblur_2d(img, deblur_mask_from_beta(*deblur_n, *deblur_beta));
          io::write_pnm(*out, img);
          if (!ref->empty()) {
            const Image o = io::read_pnm(*ref);
            const Image q = quantize8(img);
            metrics = {{"mae", mae(o, q)}, {"mse", mse(o, q)}, {"psnr", number(psnr(o, q, 255.0))}};
          }
          inputs["rows"] = img.rows();
          inputs["cols"] = img.cols();
        }
        metrics["cr"] = p.compression_ratio();
        metrics["pss"] = percentage_space_saving(p.compression_ratio());
        emit("sr-decode", inputs, {{"alt", *alt}, {"deblur_beta", *deblur_beta}, {"deblur_n", *deblur_n}, {"output", *out}},
             metrics);
      };
    });
  }

  // deblur
  {
    auto* sc = app.add_subcommand("deblur", "Apply a deblurring mask to a signal or image");
    auto in = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto n = std::make_shared<std::size_t>(3);
    auto alpha = std::make_shared<double>(std::nan(""));
    auto beta = std::make_shared<double>(1.0);
    auto preset = std::make_shared<std::string>();
    sc->add_option("input", *in, "Signal CSV or PGM/PPM image")->required()->check(CLI::ExistingFile);
    sc->add_option("--n", *n, "Mask size (odd)");
    sc->add_option("--alpha", *alpha, "Off-centre value (derived from beta when omitted)");
    sc->add_option("--beta", *beta, "Centre value");
    sc->add_option("--preset", *preset, "standard: alpha = -0.0129, beta = 1.63 resolved to N = 7")->check(CLI::IsMember({"standard"}));
    sc->add_option("-o,--output", *out, "Output path")->required();
    sc->callback([=, &run] {
      if (*n < 3 || *n % 2 == 0) throw CLI::ValidationError("--n", "must be odd and >= 3");
      run = [=] {
        DeblurMask mask;
        if (!preset->empty()) mask = preset_deblur_mask();
        else if (std::isnan(*alpha)) mask = deblur_mask_from_beta(*n, *beta);
        else mask = make_deblur_mask(*n, *alpha, *beta);
        if (is_image_path(*in)) {
          const Image r = deblur_2d(io::read_pnm(*in), mask);
          write_signal_or_image(*out, nullptr, &r);
        } else {
          const Signal r = deblur_1d(io::read_signal_csv(*in), mask);
          write_signal_or_image(*out, &r, nullptr);
        }
        emit("deblur", {{"input", *in}}, {{"n", mask.n}, {"alpha", mask.alpha}, {"beta", mask.beta}, {"output", *out}},
             json::object());
      };
    });
  }

  // ga-tune
  {
    auto* sc = app.add_subcommand("ga-tune", "Tune a deblurring mask on mean-blurred images");
    auto inputs = std::make_shared<std::vector<std::string>>();
    auto cfg = std::make_shared<GaConfig>();
    auto blur = std::make_shared<std::size_t>(3);
    sc->add_option("images", *inputs, "Training PGM/PPM images (luminance is used)")->required()->check(CLI::ExistingFile);
    sc->add_option("--blur", *blur, "Mean-filter size used to degrade the training set (odd)");
    sc->add_option("--seed", cfg->seed, "RNG seed");
    sc->add_option("--population", cfg->population, "Population size");
    sc->add_option("--survivors", cfg->survivors, "Survivors per generation");
    sc->add_option("--generations", cfg->generations, "Generations");
    sc->add_option("--mutation-rate", cfg->mutation_rate, "Per-gene mutation probability");
    sc->callback([=, &run] {
      if (*blur < 3 || *blur % 2 == 0) throw CLI::ValidationError("--blur", "must be odd and >= 3");
      run = [=] {
        std::vector<TrainingPair> pairs;
        for (const auto& path : *inputs) {
          const Plane g = to_gray(io::read_pnm(path));
          pairs.emplace_back(g, mf2d(g, *blur, 1));
        }
        const GaResult r = ga_tune_mask(pairs, *cfg);
        emit("ga-tune", {{"images", *inputs}},
             {{"blur", *blur}, {"seed", cfg->seed}, {"population", cfg->population}, {"survivors", cfg->survivors},
              {"generations", cfg->generations}},
             {{"alpha", r.mask.alpha}, {"beta", r.mask.beta}, {"n", r.mask.n}, {"mse", r.mse}});
      };
    });
  }

  // edges
  {
    auto* sc = app.add_subcommand("edges", "Edge map of a PGM/PPM image");
    auto in = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto op = std::make_shared<std::string>("sobel");
    auto magnitude = std::make_shared<std::string>("l2");
    auto gray = std::make_shared<std::string>("luminance");
    auto sigma = std::make_shared<double>(1.0);
    auto low = std::make_shared<double>(0.1);
    auto high = std::make_shared<double>(0.2);
    auto mask = std::make_shared<std::string>("segmental");
    auto m = std::make_shared<std::size_t>(3);
    sc->add_option("input", *in, "PGM/PPM image")->required()->check(CLI::ExistingFile);
    sc->add_option("--op", *op, "roberts | sobel | prewitt | canny | fit")
        ->check(CLI::IsMember({"roberts", "sobel", "prewitt", "canny", "fit"}));
    sc->add_option("--magnitude", *magnitude, "l2 | l1 | max")->check(CLI::IsMember({"l2", "l1", "max"}));
    sc->add_option("--gray", *gray, "luminance | max")->check(CLI::IsMember({"luminance", "max"}));
    sc->add_option("--sigma", *sigma, "Canny Gaussian sigma")->check(CLI::PositiveNumber);
    sc->add_option("--low", *low, "Canny low threshold, fraction of the peak gradient");
    sc->add_option("--high", *high, "Canny high threshold, fraction of the peak gradient");
    sc->add_option("--mask", *mask, "FIT mask: segmental | square")->check(CLI::IsMember({"segmental", "square"}));
    sc->add_option("--m-size", *m, "FIT mask size (odd)");
    sc->add_option("-o,--output", *out, "Output (.f32 raw, or .pgm rendering; Canny writes 0/255)");
    sc->callback([=, &run] {
      if (!(*low < *high)) throw CLI::ValidationError("--low", "must be below --high");
      if (*m < 3 || *m % 2 == 0) throw CLI::ValidationError("--m-size", "must be odd and >= 3");
      run = [=] {
        const Plane g = to_gray(io::read_pnm(*in), parse_gray_mode(*gray));
        EdgeMap e;
        if (*op == "canny") {
          // Thresholds are relative to the peak of the same gradient canny computes.
          const EdgeMap probe = canny(g, *sigma, 0.0, std::numeric_limits<double>::max());
          const double peak = max_value(probe.magnitude.values());
          e = canny(g, *sigma, *low * peak, *high * peak);
        } else if (*op == "fit") {
          e = fit_edges(g, parse_mask_kind(*mask), *m);
        } else {
          e = gradient_edges(g, parse_gradient_operator(*op), parse_magnitude_mode(*magnitude));
        }
        json metrics = summary(e.magnitude.values());
        if (!e.binary.empty()) {
          std::size_t on = 0;
          for (double v : e.binary.values()) on += v != 0.0;
          metrics["edge_pixels"] = on;
        }
        if (!out->empty()) {
          if (!e.binary.empty() && !has_ext(*out, ".f32")) {
            Plane b = e.binary;
            for (auto& v : b.values()) v *= 255.0;
            io::write_pnm(*out, Image(std::vector<Plane>{b}));
          } else {
            write_planes(*out, {e.magnitude});
          }
        }
        emit("edges", {{"input", *in}, {"rows", g.rows()}, {"cols", g.cols()}},
             {{"op", *op}, {"magnitude", *magnitude}, {"sigma", *sigma}, {"low", *low}, {"high", *high},
              {"mask", *mask}, {"m_size", *m}, {"output", *out}},
             metrics);
      };
    });
  }

  // metrics
  {
    auto* sc = app.add_subcommand("metrics", "MAE / MSE / PSNR between two signals or two images");
    auto a = std::make_shared<std::string>();
    auto b = std::make_shared<std::string>();
    auto max_val = std::make_shared<double>(0.0);
    sc->add_option("reference", *a, "Reference (CSV or PGM/PPM)")->required()->check(CLI::ExistingFile);
    sc->add_option("test", *b, "Test (same kind)")->required()->check(CLI::ExistingFile);
    sc->add_option("--max", *max_val, "Peak value for PSNR (default 255 for images, max |reference| for signals)");
    sc->callback([=, &run] {
      if (is_image_path(*a) != is_image_path(*b)) throw CLI::ValidationError("test", "both inputs must be the same kind");
      run = [=] {
        json m;
        if (is_image_path(*a)) {
          const Image x = io::read_pnm(*a);
          const Image y = io::read_pnm(*b);
          const double peak = *max_val > 0.0 ? *max_val : 255.0;
          m = {{"mae", mae(x, y)}, {"mse", mse(x, y)}, {"psnr", number(psnr(x, y, peak))}, {"max", peak}};
          std::vector<double> fx;
          std::vector<double> fy;
          for (const auto& c : x.channels) fx.insert(fx.end(), c.values().begin(), c.values().end());
          for (const auto& c : y.channels) fy.insert(fy.end(), c.values().begin(), c.values().end());
          m["mi"] = mutual_information(fx, fy);
          m["michelson_reference"] = michelson_contrast(fx);
          m["michelson_test"] = michelson_contrast(fy);
        } else {
          const Signal x = io::read_signal_csv(*a);
          const Signal y = io::read_signal_csv(*b);
          const double peak =
              *max_val > 0.0 ? *max_val : std::max(std::abs(min_value(x.samples)), std::abs(max_value(x.samples)));
          m = {{"mae", mae(x.samples, y.samples)}, {"mse", mse(x.samples, y.samples)},
               {"psnr", number(psnr(x.samples, y.samples, peak))}, {"max", peak},
               {"mi", mutual_information(x.samples, y.samples, Binning::minmax)}};
        }
        emit("metrics", {{"reference", *a}, {"test", *b}}, json::object(), m);
      };
    });
  }

  // psd
  {
    auto* sc = app.add_subcommand("psd", "Power spectral density of a CSV signal by direct DFT");
    auto in = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto nfft = std::make_shared<std::size_t>(0);
    auto fs_hz = std::make_shared<double>(1.0);
    sc->add_option("input", *in, "Signal CSV")->required()->check(CLI::ExistingFile);
    sc->add_option("--nfft", *nfft, "DFT length (default: next power of two >= N)");
    sc->add_option("--fs", *fs_hz, "Sample rate in Hz")->check(CLI::PositiveNumber);
    sc->add_option("-o,--output", *out, "Output CSV with frequency,power columns");
    sc->callback([=, &run] {
      run = [=] {
        const Signal s = io::read_signal_csv(*in, *fs_hz);
        std::size_t n = *nfft;
        if (n == 0) {
          n = 1;
          while (n < s.size()) n <<= 1;
        }
        const Spectrum sp = psd(s, n);
        const auto peak = std::max_element(sp.power.begin(), sp.power.end()) - sp.power.begin();
        if (!out->empty()) {
          std::string text = "frequency,power\n";
          char buf[96];
          for (std::size_t k = 0; k < sp.power.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", sp.frequency[k], sp.power[k]);
            text += buf;
          }
          io::write_atomic(*out, text);
        }
        emit("psd", {{"input", *in}, {"samples", s.size()}}, {{"nfft", n}, {"fs", *fs_hz}, {"output", *out}},
             {{"peak_hz", sp.frequency[static_cast<std::size_t>(peak)]}, {"peak_power", sp.power[static_cast<std::size_t>(peak)]}});
      };
    });
  }

  // mi
  {
    auto* sc = app.add_subcommand("mi", "Entropy and mutual information of two signals or images");
    auto a = std::make_shared<std::string>();
    auto b = std::make_shared<std::string>();
    sc->add_option("first", *a, "CSV or PGM/PPM")->required()->check(CLI::ExistingFile);
    sc->add_option("second", *b, "Same kind and size")->required()->check(CLI::ExistingFile);
    sc->callback([=, &run] {
      if (is_image_path(*a) != is_image_path(*b)) throw CLI::ValidationError("second", "both inputs must be the same kind");
      run = [=] {
        std::vector<double> x;
        std::vector<double> y;
        Binning bin = Binning::fixed8;
        if (is_image_path(*a)) {
          for (const auto& c : io::read_pnm(*a).channels) x.insert(x.end(), c.values().begin(), c.values().end());
          for (const auto& c : io::read_pnm(*b).channels) y.insert(y.end(), c.values().begin(), c.values().end());
        } else {
          x = io::read_signal_csv(*a).samples;
          y = io::read_signal_csv(*b).samples;
          bin = Binning::minmax;
        }
        emit("mi", {{"first", *a}, {"second", *b}}, {{"binning", bin == Binning::fixed8 ? "fixed8" : "minmax"}},
             {{"entropy_first", entropy(x, bin)}, {"entropy_second", entropy(y, bin)},
              {"joint_entropy", joint_entropy(x, y, bin)}, {"mi", mutual_information(x, y, bin)}});
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    run();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
