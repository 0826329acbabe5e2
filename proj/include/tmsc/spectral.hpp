#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "tmsc/fft.hpp"
#include "tmsc/matrix.hpp"
#include "tmsc/signal.hpp"

namespace tmsc {

/// Scale normalization of the transform. l1 is Ψ*(λω) in frequency and
/// (1/λ)ψ*(·/λ) in time, so a sinusoid's peak magnitude does not depend on
/// its scale. l2 multiplies both paths by √λ (unit-energy daughters).
enum class CwtNormalization { l1, l2 };

struct MorletParams {
  double omega0 = 6.0;
  CwtNormalization normalization = CwtNormalization::l1;

  /// Requires omega0 >= 5.
  void validate() const;
};

/// Analytic Morlet frequency response, π^(-1/4) exp(-(ω-ω0)²/2) for ω > 0.
double morlet_hat(double omega, const MorletParams& params);

/// Time-domain analytic Morlet, π^(-1/4) (2π)^(-1/2) e^{jω0 t} e^{-t²/2};
/// the inverse Fourier transform of morlet_hat up to the e^{-ω0²/2} tail
/// that the one-sided spectrum discards.
std::complex<double> morlet_time(double t, const MorletParams& params);

/// Half-width (in units of scale) beyond which the Gaussian envelope is
/// below 1e-8 of its peak: sqrt(2 ln 1e8).
double morlet_half_support();

struct ScaleGrid {
  std::vector<double> scales;       // seconds, increasing
  std::vector<double> frequencies;  // Hz, decreasing, ω0 / (2π λ)
  int voices_per_octave = 12;

  std::size_t size() const noexcept { return scales.size(); }
  bool operator==(const ScaleGrid&) const = default;
};

/// Log-spaced grid from f_max down to f_min with `voices_per_octave`
/// frequencies per octave: f_k = f_max 2^(-k/v), k = 0..floor(v log2(f_max/f_min)).
ScaleGrid build_scale_grid(double f_min, double f_max, int voices_per_octave,
                           const MorletParams& params);

struct Scalogram {
  Matrix<cplx> data;  // rows = scales, cols = time samples
  ScaleGrid grid;
  double t0 = 0.0;
  double dt = 1.0;
  Unit source_unit = Unit::dimensionless;
};

/// Reflection pad (samples per side) used by both transform paths.
std::size_t cwt_pad_length(const TimeSeries& ts, const ScaleGrid& grid);

/// Frequency-domain CWT: per scale, inverse DFT of X(ω) Ψ*(λω) on the
/// reflection-padded signal, with the padding stripped from the output.
Scalogram cwt(const TimeSeries& ts, const ScaleGrid& grid,
              const MorletParams& params);

/// Direct time-domain summation of the CWT integral. O(N·support) per
/// scale; meant as an oracle for short inputs.
Scalogram cwt_direct(const TimeSeries& ts, const ScaleGrid& grid,
                     const MorletParams& params);

}  // namespace tmsc
