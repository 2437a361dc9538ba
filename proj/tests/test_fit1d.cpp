#include <doctest.h>

#include "fitkit/fit1d.hpp"
#include "fitkit/synth.hpp"
#include "oracles.hpp"

using namespace fitkit;

TEST_SUITE("fit1d") {
  TEST_CASE("overlap variants agree with the cyclic oracle") {
    std::mt19937_64 rng(21);
    const char* names[] = {"raw", "equalized", "averaged", "mask_eq", "mask_av", "diff_eq", "diff_av"};
    for (const char* name : names) {
      for (std::size_t m : {3u, 5u, 7u}) {
        const Signal s{oracle::random_vector(rng, 40, 0.5, 3.0), 1.0};
        const auto got = fit_overlap(s, parse_fit1d_variant(name), {m, PadMode::cyclic});
        CAPTURE(name);
        CAPTURE(m);
        CHECK(oracle::max_abs_diff(got.hz, oracle::fit_overlap(s.samples, name, m)) < 1e-10);
      }
    }
  }

  TEST_CASE("output is scaled to hertz by the sample rate") {
    std::mt19937_64 rng(22);
    const auto x = oracle::random_vector(rng, 32, 1.0, 2.0);
    const auto a = fit_overlap(Signal{x, 1.0}, Fit1DVariant::raw);
    const auto b = fit_overlap(Signal{x, 250.0}, Fit1DVariant::raw);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(b.hz[i] == doctest::Approx(250.0 * a.hz[i]));
  }

  TEST_CASE("sine frequency is recovered by the raw variant at peaks of the derivative ratio") {
    // For s = 2 + sin(wt) the instantaneous ratio is bounded by w/(2*pi) * 1/(2-1).
    const double fs = 1000.0;
    const double f = 5.0;
    Signal s{{}, fs};
    for (int n = 0; n < 1000; ++n) s.samples.push_back(2.0 + std::sin(oracle::kTwoPi * f * n / fs));
    const auto fit = fit_overlap(s, Fit1DVariant::raw);
    double peak = 0.0;
    for (double v : fit.hz) peak = std::max(peak, v);
    CHECK(peak == doctest::Approx(f / std::sqrt(3.0)).epsilon(1e-3));
  }

  TEST_CASE("raw variant reports the zero sample") {
    const Signal s{{1.0, 0.0, 2.0, 3.0}, 1.0};
    try {
      fit_overlap(s, Fit1DVariant::raw);
      FAIL("expected DivisionByZero");
    } catch (const DivisionByZero& e) {
      CHECK(e.index() == 1);
    }
  }

  TEST_CASE("averaged variant falls back to mean absolute value") {
    const Signal s{{-1.0, 1.0, -1.0, 1.0}, 1.0};
    const auto r = fit_overlap(s, Fit1DVariant::averaged);
    CHECK(r.abs_mean_fallback);
    bool used = false;
    CHECK(averaged_denominator(s.samples, &used) == 1.0);
    CHECK(used);
  }

  TEST_CASE("equalized variants flag constant input") {
    const Signal s{std::vector<double>(8, 4.0), 1.0};
    const auto r = fit_overlap(s, Fit1DVariant::equalized);
    CHECK(r.degenerate_input);
    for (double v : r.hz) CHECK(v == 0.0);
  }

  TEST_CASE("non-overlap worked example") {
    // [1,2] equalization of {1, 2, 3, 4}: {1, 4/3, 5/3, 2}
    // L = {7/6, 11/6}, H = {1/6, 1/6}
    const Signal s{{1, 2, 3, 4}, 1.0};
    const auto r = fit_nonoverlap(s, NonOverlapVariant::eq);
    REQUIRE(r.hz.size() == 2);
    CHECK(r.hz[0] == doctest::Approx(1.0 / 7.0 / oracle::kTwoPi));
    CHECK(r.hz[1] == doctest::Approx(1.0 / 11.0 / oracle::kTwoPi));
  }

  TEST_CASE("non-overlap variants match the pair oracle and both forms agree") {
    std::mt19937_64 rng(23);
    for (const char* name : {"raw", "eq", "av"}) {
      const Signal s{oracle::random_vector(rng, 64, 0.2, 5.0), 1.0};
      const auto v = parse_nonoverlap_variant(name);
      const auto a = fit_nonoverlap(s, v, FitForm::abs);
      const auto b = fit_nonoverlap(s, v, FitForm::sqrt_conj);
      CHECK(oracle::max_abs_diff(a.hz, oracle::fit_nonoverlap(s.samples, name)) < 1e-10);
      CHECK(oracle::max_abs_diff(a.hz, b.hz) < 1e-12);
    }
    CHECK_THROWS(fit_nonoverlap(Signal{{1, 2, 3}, 1.0}, NonOverlapVariant::raw));
  }

  TEST_CASE("masks") {
    CHECK(wavelet_mask(5) == std::vector<double>{-0.25, -0.25, 0.0, 0.25, 0.25});
    CHECK(scaling_mask(3)[1] == doctest::Approx(1.0 / 3.0));
    CHECK_THROWS(wavelet_mask(4));
  }

  TEST_CASE("witness bars") {
    const Signal tri{{0, 1, 2, 3, 2, 1, 0}, 1.0};
    const auto bars = witness_bars(tri, 3);  // levels 0, 1.5, 3
    REQUIRE(bars.size() == 5);
    CHECK(bars[0] == doctest::Approx(0.0));
    CHECK(bars[1] == doctest::Approx(1.5));
    CHECK(bars[2] == doctest::Approx(3.0));
    CHECK(bars[3] == doctest::Approx(4.5));
    CHECK(bars[4] == doctest::Approx(6.0));
    for (std::size_t i = 1; i < bars.size(); ++i) CHECK(bars[i] > bars[i - 1]);
    CHECK(witness_bars(Signal{{2, 2, 2}, 1.0}, 4).empty());
  }

  TEST_CASE("phase plane") {
    const Signal s{{1, 2, 4, 8}, 1.0};
    const auto ov = phase_plane(s, PhaseMode::overlap);
    REQUIRE(ov.size() == 4);
    CHECK(ov[0].second == doctest::Approx((2.0 - 8.0) / 2.0));
    const auto no = phase_plane(s, PhaseMode::nonoverlap);
    REQUIRE(no.size() == 2);
    CHECK(no[1].first == 6.0);
    CHECK(no[1].second == 2.0);
  }

  TEST_CASE("synthetic signals") {
    const auto four = synth({SynthKind::four_tone});
    CHECK(four.sample_rate == 400.0);
    CHECK(four.size() == 8000);
    const auto ecg = synth({SynthKind::ecg_like});
    CHECK(ecg.size() == 8192);
    const auto a = add_gaussian_noise(ecg, 5.0, 7);
    const auto b = add_gaussian_noise(ecg, 5.0, 7);
    CHECK(a.samples == b.samples);
    CHECK(a.samples != ecg.samples);
  }
}
