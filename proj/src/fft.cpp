#include "tmsc/fft.hpp"

#include <bit>
#include <numbers>

#include "tmsc/error.hpp"

namespace tmsc {

namespace {

// Complex product without Annex G infinity recovery.
inline cplx mul(cplx a, cplx b) {
  return {a.real() * b.real() - a.imag() * b.imag(),
          a.real() * b.imag() + a.imag() * b.real()};
}

// e^{-2 pi j num / den} with the angle reduced before the trig call.
cplx unit_root(std::size_t num, std::size_t den) {
  const double angle = -2.0 * std::numbers::pi * static_cast<double>(num % den) /
                       static_cast<double>(den);
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

FftPlan::FftPlan(std::size_t n) : n_(n) {
  if (n == 0) throw Error(Errc::empty_input, "FFT length must be positive");
  m_ = std::has_single_bit(n) ? n : std::bit_ceil(2 * n - 1);

  const int bits = std::countr_zero(m_);
  bitrev_.resize(m_);
  for (std::size_t k = 0; k < m_; ++k) {
    std::size_t r = 0;
    for (int b = 0; b < bits; ++b) r |= ((k >> b) & 1U) << (bits - 1 - b);
    bitrev_[k] = r;
  }
  twiddle_.resize(m_ / 2);
  for (std::size_t k = 0; k < m_ / 2; ++k) twiddle_[k] = unit_root(k, m_);

  if (m_ != n_) {
    // Chirp angle from k^2 mod 2n.
    chirp_.resize(n_);
    for (std::size_t k = 0; k < n_; ++k) {
      const std::size_t k2 = (k * k) % (2 * n_);
      chirp_[k] = unit_root(k2, 2 * n_);
    }
    chirp_fft_.assign(m_, cplx{});
    chirp_fft_[0] = std::conj(chirp_[0]);
    for (std::size_t k = 1; k < n_; ++k) {
      chirp_fft_[k] = std::conj(chirp_[k]);
      chirp_fft_[m_ - k] = std::conj(chirp_[k]);
    }
    radix2(chirp_fft_, false);
  }
}

void FftPlan::forward(std::span<cplx> data) const { transform(data, false); }

void FftPlan::inverse(std::span<cplx> data) const {
  transform(data, true);
  const double scale = 1.0 / static_cast<double>(n_);
  for (auto& v : data) v *= scale;
}

void FftPlan::transform(std::span<cplx> data, bool inverse) const {
  if (data.size() != n_) {
    throw Error(Errc::shape_mismatch, "FFT plan length mismatch");
  }
  if (m_ == n_) {
    radix2(data, inverse);
  } else {
    bluestein(data, inverse);
  }
}

void FftPlan::radix2(std::span<cplx> data, bool inverse) const {
  const std::size_t m = data.size();
  for (std::size_t k = 0; k < m; ++k) {
    if (k < bitrev_[k]) std::swap(data[k], data[bitrev_[k]]);
  }
  for (std::size_t len = 2; len <= m; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = m / len;
    for (std::size_t start = 0; start < m; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        cplx w = twiddle_[k * stride];
        if (inverse) w = std::conj(w);
        const cplx a = data[start + k];
        const cplx b = mul(data[start + k + half], w);
        data[start + k] = a + b;
        data[start + k + half] = a - b;
      }
    }
  }
}

void FftPlan::bluestein(std::span<cplx> data, bool inverse) const {
  // The inverse transform is the conjugate of the forward transform of the
  // conjugated input (without the 1/n, which inverse() applies).
  std::vector<cplx> work(m_, cplx{});
  for (std::size_t k = 0; k < n_; ++k) {
    const cplx x = inverse ? std::conj(data[k]) : data[k];
    work[k] = mul(x, chirp_[k]);
  }
  radix2(work, false);
  for (std::size_t k = 0; k < m_; ++k) work[k] = mul(work[k], chirp_fft_[k]);
  radix2(work, true);
  const double scale = 1.0 / static_cast<double>(m_);
  for (std::size_t k = 0; k < n_; ++k) {
    const cplx y = mul(work[k] * scale, chirp_[k]);
    data[k] = inverse ? std::conj(y) : y;
  }
}

std::vector<cplx> dft(std::span<const cplx> x) {
  if (x.empty()) throw Error(Errc::empty_input, "dft of empty sequence");
  std::vector<cplx> out(x.begin(), x.end());
  FftPlan(out.size()).forward(out);
  return out;
}

std::vector<cplx> inverse_dft(std::span<const cplx> x) {
  if (x.empty()) throw Error(Errc::empty_input, "inverse dft of empty sequence");
  std::vector<cplx> out(x.begin(), x.end());
  FftPlan(out.size()).inverse(out);
  return out;
}

}  // namespace tmsc
