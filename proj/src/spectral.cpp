#include "tmsc/spectral.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tmsc/error.hpp"

namespace tmsc {

namespace {

const double kQuarticRootPi = std::pow(std::numbers::pi, -0.25);

double normalization_factor(double scale, CwtNormalization norm) {
  return norm == CwtNormalization::l2 ? std::sqrt(scale) : 1.0;
}

void check_nyquist(const TimeSeries& ts, const ScaleGrid& grid) {
  if (grid.size() == 0) throw Error(Errc::invalid_range, "empty scale grid");
  const double nyquist = 0.5 / ts.dt();
  if (grid.frequencies.front() > nyquist * (1.0 + 1e-12)) {
    throw Error(Errc::frequency_above_nyquist,
                std::to_string(grid.frequencies.front()) + " Hz > " +
                    std::to_string(nyquist) + " Hz");
  }
}

}  // namespace

void MorletParams::validate() const {
  if (!(omega0 >= 5.0) || !std::isfinite(omega0)) {
    throw Error(Errc::invalid_config, "Morlet omega0 must be >= 5");
  }
}

double morlet_hat(double omega, const MorletParams& params) {
  if (!(omega > 0.0)) return 0.0;
  const double d = omega - params.omega0;
  return kQuarticRootPi * std::exp(-0.5 * d * d);
}

std::complex<double> morlet_time(double t, const MorletParams& params) {
  const double envelope = kQuarticRootPi / std::sqrt(2.0 * std::numbers::pi) *
                          std::exp(-0.5 * t * t);
  return std::polar(envelope, params.omega0 * t);
}

double morlet_half_support() { return std::sqrt(2.0 * std::log(1e8)); }

ScaleGrid build_scale_grid(double f_min, double f_max, int voices_per_octave,
                           const MorletParams& params) {
  params.validate();
  if (!(f_min > 0.0) || !(f_max > f_min) || !std::isfinite(f_max)) {
    throw Error(Errc::invalid_range, "need 0 < f_min < f_max");
  }
  if (voices_per_octave < 1) {
    throw Error(Errc::invalid_range, "voices_per_octave must be >= 1");
  }
  const double octaves = std::log2(f_max / f_min);
  const auto last = static_cast<std::size_t>(
      std::floor(octaves * voices_per_octave + 1e-9));

  ScaleGrid grid;
  grid.voices_per_octave = voices_per_octave;
  grid.frequencies.reserve(last + 1);
  grid.scales.reserve(last + 1);
  for (std::size_t k = 0; k <= last; ++k) {
    const double f = f_max * std::exp2(-static_cast<double>(k) / voices_per_octave);
    grid.frequencies.push_back(f);
    grid.scales.push_back(params.omega0 / (2.0 * std::numbers::pi * f));
  }
  return grid;
}

std::size_t cwt_pad_length(const TimeSeries& ts, const ScaleGrid& grid) {
  const double half = morlet_half_support() * grid.scales.back() / ts.dt();
  const auto wanted = static_cast<std::size_t>(std::ceil(half));
  return std::min(wanted, ts.size() - 1);
}

Scalogram cwt(const TimeSeries& ts, const ScaleGrid& grid,
              const MorletParams& params) {
  params.validate();
  check_nyquist(ts, grid);

  const std::size_t n = ts.size();
  const std::size_t pad = cwt_pad_length(ts, grid);
  const TimeSeries padded = pad_reflect(ts, pad);
  const std::size_t m = padded.size();

  FftPlan plan(m);
  std::vector<cplx> spectrum(padded.values().begin(), padded.values().end());
  plan.forward(spectrum);

  // Angular frequency of each DFT bin; the upper half (including the even
  // length Nyquist bin) maps to negative frequencies.
  std::vector<double> omega(m);
  const double bin = 2.0 * std::numbers::pi / (static_cast<double>(m) * ts.dt());
  for (std::size_t k = 0; k < m; ++k) {
    const auto signed_k = 2 * k < m ? static_cast<double>(k)
                                    : static_cast<double>(k) - static_cast<double>(m);
    omega[k] = bin * signed_k;
  }

  Scalogram out{Matrix<cplx>(grid.size(), n), grid, ts.t0(), ts.dt(), ts.unit()};
  std::vector<cplx> work(m);
  for (std::size_t r = 0; r < grid.size(); ++r) {
    const double scale = grid.scales[r];
    const double factor = normalization_factor(scale, params.normalization);
    for (std::size_t k = 0; k < m; ++k) {
      // morlet_hat is real, so the conjugate is the value itself.
      work[k] = spectrum[k] * (factor * morlet_hat(scale * omega[k], params));
    }
    plan.inverse(work);
    auto row = out.data.row(r);
    for (std::size_t c = 0; c < n; ++c) row[c] = work[pad + c];
  }
  return out;
}

Scalogram cwt_direct(const TimeSeries& ts, const ScaleGrid& grid,
                     const MorletParams& params) {
  params.validate();
  check_nyquist(ts, grid);

  const std::size_t n = ts.size();
  const std::size_t pad = cwt_pad_length(ts, grid);
  const TimeSeries padded = pad_reflect(ts, pad);
  const auto x = padded.values();
  const auto m = static_cast<std::ptrdiff_t>(x.size());
  const double dt = ts.dt();

  Scalogram out{Matrix<cplx>(grid.size(), n), grid, ts.t0(), dt, ts.unit()};
  for (std::size_t r = 0; r < grid.size(); ++r) {
    const double scale = grid.scales[r];
    const double weight =
        dt / scale * normalization_factor(scale, params.normalization);
    const auto reach =
        static_cast<std::ptrdiff_t>(std::floor(morlet_half_support() * scale / dt));

    // Kernel taps conj(psi(j dt / scale)) for j in [-reach, reach].
    std::vector<cplx> taps(static_cast<std::size_t>(2 * reach + 1));
    for (std::ptrdiff_t j = -reach; j <= reach; ++j) {
      taps[static_cast<std::size_t>(j + reach)] =
          std::conj(morlet_time(static_cast<double>(j) * dt / scale, params)) * weight;
    }

    auto row = out.data.row(r);
    for (std::size_t c = 0; c < n; ++c) {
      const auto centre = static_cast<std::ptrdiff_t>(pad + c);
      const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, centre - reach);
      const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(m - 1, centre + reach);
      cplx acc{};
      for (std::ptrdiff_t idx = lo; idx <= hi; ++idx) {
        acc += x[static_cast<std::size_t>(idx)] *
               taps[static_cast<std::size_t>(idx - centre + reach)];
      }
      row[c] = acc;
    }
  }
  return out;
}

}  // namespace tmsc
