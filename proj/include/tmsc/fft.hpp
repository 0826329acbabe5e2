#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace tmsc {

using cplx = std::complex<double>;

/// Precomputed discrete Fourier transform of a fixed length.
///
/// Power-of-two lengths run an iterative radix-2 kernel; any other length
/// goes through Bluestein's chirp-z reduction onto a power-of-two kernel.
/// Forward uses the e^{-j w t} sign; inverse includes the 1/n factor.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  void forward(std::span<cplx> data) const;
  void inverse(std::span<cplx> data) const;

 private:
  void transform(std::span<cplx> data, bool inverse) const;
  void radix2(std::span<cplx> data, bool inverse) const;
  void bluestein(std::span<cplx> data, bool inverse) const;

  std::size_t n_;
  std::size_t m_;                 // radix-2 kernel length (n_ or Bluestein size)
  std::vector<std::size_t> bitrev_;
  std::vector<cplx> twiddle_;     // e^{-2 pi j k / m_}, k < m_/2
  std::vector<cplx> chirp_;       // e^{-pi j k^2 / n_}, k < n_
  std::vector<cplx> chirp_fft_;   // FFT of the conjugate chirp filter
};

/// Forward DFT, X_k = sum_t x_t e^{-2 pi j k t / n}.
std::vector<cplx> dft(std::span<const cplx> x);

/// Inverse of dft(); dft followed by inverse_dft is the identity.
std::vector<cplx> inverse_dft(std::span<const cplx> x);

}  // namespace tmsc
