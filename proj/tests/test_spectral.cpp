#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "tmsc/error.hpp"
#include "tmsc/spectral.hpp"

using namespace tmsc;

namespace {

TimeSeries series(std::vector<double> v, double dt = 1.0) {
  return TimeSeries(0.0, dt, std::move(v), Unit::volts);
}

TimeSeries sinusoid(double f, std::size_t n, double dt = 1.0) {
  std::vector<double> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    v[k] = std::sin(2.0 * std::numbers::pi * f * static_cast<double>(k) * dt);
  }
  return series(v, dt);
}

double max_abs(const Matrix<cplx>& m) {
  double out = 0.0;
  for (const auto& v : m.flat()) out = std::max(out, std::abs(v));
  return out;
}

double interior_rel_frobenius(const Scalogram& a, const Scalogram& b, std::size_t margin) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t r = 0; r < a.data.rows(); ++r) {
    for (std::size_t c = margin; c + margin < a.data.cols(); ++c) {
      num += std::norm(a.data(r, c) - b.data(r, c));
      den += std::norm(b.data(r, c));
    }
  }
  return std::sqrt(num / den);
}

std::size_t argmax_row_mean(const Scalogram& s, std::size_t margin) {
  std::size_t best = 0;
  double best_mean = -1.0;
  for (std::size_t r = 0; r < s.data.rows(); ++r) {
    double mean = 0.0;
    for (std::size_t c = margin; c + margin < s.data.cols(); ++c) mean += std::abs(s.data(r, c));
    if (mean > best_mean) {
      best_mean = mean;
      best = r;
    }
  }
  return best;
}

std::size_t nearest_row(const ScaleGrid& grid, double f) {
  std::size_t best = 0;
  for (std::size_t r = 0; r < grid.size(); ++r) {
    if (std::abs(std::log(grid.frequencies[r] / f)) <
        std::abs(std::log(grid.frequencies[best] / f))) {
      best = r;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("morlet_hat values") {
  const MorletParams p;
  const double peak = std::pow(std::numbers::pi, -0.25);
  CHECK(morlet_hat(6.0, p) == doctest::Approx(0.7511255).epsilon(1e-7));
  CHECK(morlet_hat(6.0, p) == doctest::Approx(peak).epsilon(1e-15));
  CHECK(morlet_hat(-1.0, p) == 0.0);
  CHECK(morlet_hat(0.0, p) == 0.0);
  CHECK(morlet_hat(9.0, p) == doctest::Approx(peak * std::exp(-4.5)).epsilon(1e-14));
  CHECK(morlet_hat(3.0, p) == doctest::Approx(peak * std::exp(-4.5)).epsilon(1e-14));
}

TEST_CASE("morlet params validation") {
  CHECK_NOTHROW(MorletParams{5.0}.validate());
  CHECK_THROWS_AS(MorletParams{4.9}.validate(), Error);
}

TEST_CASE("scale grid examples") {
  const MorletParams p;
  const auto g = build_scale_grid(0.0024, 0.5, 12, p);
  CHECK(g.size() == 93);
  CHECK(g.frequencies.front() == 0.5);
  CHECK(g.frequencies.back() >= 0.0024);
  CHECK(std::log2(0.5 / 0.0024) == doctest::Approx(7.70).epsilon(1e-3));
  std::size_t band = 0;
  for (double f : g.frequencies) band += f >= 0.1 ? 1 : 0;
  CHECK(band >= 27);

  const auto octave = build_scale_grid(0.25, 0.5, 1, p);
  REQUIRE(octave.size() == 2);
  CHECK(octave.frequencies[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(octave.frequencies[1] == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("scale grid invariants") {
  for (double omega0 : {5.0, 6.0, 8.0}) {
    const MorletParams p{omega0};
    for (int v : {1, 4, 12, 24}) {
      const auto g = build_scale_grid(0.003, 0.45, v, p);
      for (std::size_t k = 0; k < g.size(); ++k) {
        const double f = omega0 / (2.0 * std::numbers::pi * g.scales[k]);
        CHECK(std::abs(f - g.frequencies[k]) <= 1e-12 * g.frequencies[k]);
        if (k > 0) {
          CHECK(g.scales[k] > g.scales[k - 1]);
          CHECK(g.frequencies[k] < g.frequencies[k - 1]);
        }
      }
    }
  }
}

TEST_CASE("scale grid errors") {
  const MorletParams p;
  CHECK_THROWS_AS(build_scale_grid(0.0, 0.5, 12, p), Error);
  CHECK_THROWS_AS(build_scale_grid(0.5, 0.5, 12, p), Error);
  CHECK_THROWS_AS(build_scale_grid(0.1, 0.5, 0, p), Error);
}

TEST_CASE("cwt rejects grids above Nyquist") {
  const MorletParams p;
  const auto g = build_scale_grid(0.01, 0.5, 4, p);
  try {
    cwt(series(std::vector<double>(100, 1.0), 2.0), g, p);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::frequency_above_nyquist);
  }
}

TEST_CASE("zero signal gives a zero scalogram on both paths") {
  const MorletParams p;
  const auto g = build_scale_grid(0.05, 0.4, 4, p);
  const auto zero = series(std::vector<double>(200, 0.0));
  for (const auto& s : {cwt(zero, g, p), cwt_direct(zero, g, p)}) {
    CHECK(s.data.rows() == g.size());
    CHECK(s.data.cols() == 200);
    CHECK(max_abs(s.data) == 0.0);
  }
}

TEST_CASE("0.26 Hz sinusoid peaks at the nearest grid row") {
  const MorletParams p;
  const auto g = build_scale_grid(0.0024, 0.5, 12, p);
  const auto s = cwt(sinusoid(0.26, 1370), g, p);
  CHECK(argmax_row_mean(s, 200) == nearest_row(g, 0.26));
  // Column-wise the maximum agrees away from the edges.
  for (std::size_t c : {300u, 685u, 1000u}) {
    std::size_t best = 0;
    for (std::size_t r = 0; r < g.size(); ++r) {
      if (std::abs(s.data(r, c)) > std::abs(s.data(best, c))) best = r;
    }
    CHECK(best == nearest_row(g, 0.26));
  }
}

TEST_CASE("l1 normalization gives unit-independent sinusoid amplitude") {
  const MorletParams p;
  const auto g = build_scale_grid(0.02, 0.3, 1, p);
  for (std::size_t r = 0; r < g.size(); ++r) {
    const auto s = cwt(sinusoid(g.frequencies[r], 2048), g, p);
    // |W| at the matching scale is the Morlet peak over two (one-sided).
    CHECK(std::abs(s.data(r, 1024)) ==
          doctest::Approx(std::pow(std::numbers::pi, -0.25) / 2.0).epsilon(1e-3));
  }
}

TEST_CASE("linearity") {
  std::mt19937_64 rng(21);
  const MorletParams p;
  const auto g = build_scale_grid(0.0024, 0.5, 12, p);
  const auto x = oracle::uniform_noise(rng, 1370);
  const auto y = oracle::uniform_noise(rng, 1370);
  for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{-2.0, 0.3}, std::pair{1e3, 7.0}}) {
    std::vector<double> mix(x.size());
    for (std::size_t k = 0; k < mix.size(); ++k) mix[k] = a * x[k] + b * y[k];
    const auto wm = cwt(series(mix), g, p);
    const auto wx = cwt(series(x), g, p);
    const auto wy = cwt(series(y), g, p);
    double err = 0.0;
    for (std::size_t k = 0; k < wm.data.flat().size(); ++k) {
      err = std::max(err, std::abs(wm.data.flat()[k] -
                                   (a * wx.data.flat()[k] + b * wy.data.flat()[k])));
    }
    CHECK(err <= 1e-10 * max_abs(wm.data));
  }
}

TEST_CASE("shift covariance on periodic signals") {
  const std::size_t n = 1024;
  const MorletParams p;
  const auto g = build_scale_grid(0.05, 0.2, 4, p);
  const auto margin = static_cast<std::size_t>(std::ceil(8.0 * g.scales.back()));
  for (std::size_t shift : {1u, 13u, 64u}) {
    std::vector<double> x(n);
    std::vector<double> y(n);
    const double w = 2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
      const auto periodic = [&](std::size_t t) {
        return std::sin(w * 90.0 * static_cast<double>(t)) +
               0.4 * std::cos(w * 160.0 * static_cast<double>(t) + 1.0);
      };
      x[k] = periodic(k);
      y[k] = periodic((k + n - shift) % n);
    }
    const auto wx = cwt(series(x), g, p);
    const auto wy = cwt(series(y), g, p);
    double err = 0.0;
    for (std::size_t r = 0; r < g.size(); ++r) {
      for (std::size_t c = margin + shift; c + margin < n; ++c) {
        err = std::max(err, std::abs(wy.data(r, c) - wx.data(r, c - shift)));
      }
    }
    CAPTURE(shift);
    CHECK(err <= 1e-8 * max_abs(wx.data));
  }
}

TEST_CASE("scale-frequency consistency") {
  const MorletParams p;
  const auto g = build_scale_grid(0.0024, 0.5, 12, p);
  // Skip one octave at each end of the grid.
  for (std::size_t k = 12; k + 12 < g.size(); k += 3) {
    const auto s = cwt(sinusoid(g.frequencies[k], 2048), g, p);
    const auto best = argmax_row_mean(s, 0);
    CAPTURE(k);
    CHECK(best + 1 >= k);
    CHECK(best <= k + 1);
  }
}

TEST_CASE("oracle equivalence under both normalizations") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> len(256, 512);
  for (auto norm : {CwtNormalization::l1, CwtNormalization::l2}) {
    const MorletParams p{6.0, norm};
    const auto g = build_scale_grid(0.05, 0.2, 1, p);
    REQUIRE(g.size() == 3);
    const auto margin = static_cast<std::size_t>(std::ceil(morlet_half_support() * g.scales.back()));
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = len(rng);
      const auto ts = series(oracle::uniform_noise(rng, n));
      const auto fast = cwt(ts, g, p);
      const auto slow = cwt_direct(ts, g, p);
      CHECK(interior_rel_frobenius(fast, slow, margin) < 1e-6);
    }
  }
}

TEST_CASE("random 256-sample signal agrees away from the outer 10%") {
  std::mt19937_64 rng(256);
  const MorletParams p;
  const auto g = build_scale_grid(0.05, 0.2, 1, p);
  REQUIRE(g.size() == 3);
  const auto ts = series(oracle::uniform_noise(rng, 256));
  CHECK(interior_rel_frobenius(cwt(ts, g, p), cwt_direct(ts, g, p), 26) < 1e-6);
}

TEST_CASE("l2 differs from l1 by sqrt(scale)") {
  std::mt19937_64 rng(4);
  const auto ts = series(oracle::uniform_noise(rng, 300));
  const MorletParams l1{6.0, CwtNormalization::l1};
  const MorletParams l2{6.0, CwtNormalization::l2};
  const auto g = build_scale_grid(0.05, 0.4, 2, l1);
  const auto a = cwt(ts, g, l1);
  const auto b = cwt(ts, g, l2);
  for (std::size_t r = 0; r < g.size(); ++r) {
    for (std::size_t c = 0; c < 300; c += 37) {
      CHECK(std::abs(b.data(r, c) - std::sqrt(g.scales[r]) * a.data(r, c)) <=
            1e-12 * std::abs(b.data(r, c)) + 1e-15);
    }
  }
}

TEST_CASE("impulse reproduces the wavelet envelope") {
  const std::size_t n = 401;
  std::vector<double> x(n, 0.0);
  x[200] = 1.0;
  const MorletParams p;
  const auto g = build_scale_grid(0.1, 0.4, 2, p);
  const auto s = cwt_direct(series(x), g, p);
  for (std::size_t r = 0; r < g.size(); ++r) {
    std::size_t best = 0;
    for (std::size_t c = 0; c < n; ++c) {
      if (std::abs(s.data(r, c)) > std::abs(s.data(r, best))) best = c;
    }
    CHECK(best == 200);
    const double lambda = g.scales[r];
    const double peak = std::abs(s.data(r, 200));
    for (int d : {1, 3, 5}) {
      const double envelope = std::exp(-0.5 * (d / lambda) * (d / lambda));
      CHECK(std::abs(s.data(r, 200 + d)) / peak == doctest::Approx(envelope).epsilon(1e-12));
      CHECK(std::abs(s.data(r, 200 - d)) / peak == doctest::Approx(envelope).epsilon(1e-12));
    }
  }
}

TEST_CASE("pad length is clamped to the input") {
  const MorletParams p;
  const auto g = build_scale_grid(0.0024, 0.5, 12, p);
  const auto short_ts = series(std::vector<double>(100, 1.0));
  CHECK(cwt_pad_length(short_ts, g) == 99);
  const auto g2 = build_scale_grid(0.1, 0.5, 4, p);
  const auto long_ts = series(std::vector<double>(1000, 1.0));
  CHECK(cwt_pad_length(long_ts, g2) ==
        static_cast<std::size_t>(std::ceil(morlet_half_support() * g2.scales.back())));
}
