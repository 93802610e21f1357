#pragma once

// Complex discrete Fourier transform for arbitrary lengths.
//
// Powers of two use an iterative radix-2 decimation-in-time kernel. Any other
// length is reduced to a power-of-two circular convolution with Bluestein's
// chirp-z identity  jk = (j^2 + k^2 - (k - j)^2) / 2.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <unordered_map>
#include <vector>

#include "fastbin/core/types.hpp"

namespace fastbin {

using Complex = std::complex<double>;

class FftPlan;
std::shared_ptr<const FftPlan> fft_plan(std::size_t n);

/// Plain complex product. operator* on std::complex goes through the
/// Annex G NaN recovery path unless -ffast-math is on, which is several
/// times slower inside butterflies.
inline Complex cmul(Complex a, Complex b) noexcept {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

class FftPlan {
 public:
  explicit FftPlan(std::size_t n) : n_(n) {
    if (n == 0) throw DimensionError("FftPlan: length 0");
    if (std::has_single_bit(n)) {
      init_radix2();
    } else {
      init_bluestein();
    }
  }

  std::size_t size() const noexcept { return n_; }

  /// In place: X_k = sum_j x_j exp(-2 pi i jk / n).
  void forward(std::span<Complex> data) const {
    require_same_size(data.size(), n_, "FftPlan::forward");
    if (inner_) {
      bluestein(data);
    } else {
      radix2(data);
    }
  }

  /// In place inverse including the 1/n factor.
  void inverse(std::span<Complex> data) const {
    for (auto& v : data) v = std::conj(v);
    forward(data);
    const double scale = 1.0 / static_cast<double>(n_);
    for (auto& v : data) v = std::conj(v) * scale;
  }

 private:
  void init_radix2() {
    // Twiddles stored stage by stage so every butterfly pass reads them in order:
    // the stage of length len starts at offset len/2 - 1.
    twiddles_.resize(n_ > 1 ? n_ - 1 : 0);
    for (std::size_t len = 2; len <= n_; len <<= 1) {
      Complex* w = twiddles_.data() + len / 2 - 1;
      for (std::size_t k = 0; k < len / 2; ++k) {
        const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(len);
        w[k] = {std::cos(angle), std::sin(angle)};
      }
    }
    if (n_ > (std::size_t{1} << 32)) throw DimensionError("FftPlan: length above 2^32");
    const int bits = std::countr_zero(n_);
    bitrev_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      std::size_t r = 0;
      for (int b = 0; b < bits; ++b) {
        if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
      }
      bitrev_[i] = static_cast<std::uint32_t>(r);
    }
  }

  void init_bluestein() {
    conv_len_ = std::bit_ceil(2 * n_ - 1);
    chirp_.resize(n_);
    const std::size_t two_n = 2 * n_;
    for (std::size_t j = 0; j < n_; ++j) {
      // j^2 mod 2n keeps the angle argument small for large n.
      const std::size_t j2 = static_cast<std::size_t>((static_cast<unsigned __int128>(j) * j) % two_n);
      const double angle = -std::numbers::pi * static_cast<double>(j2) / static_cast<double>(n_);
      chirp_[j] = {std::cos(angle), std::sin(angle)};
    }
    inner_ = fft_plan(conv_len_);
    kernel_spectrum_.assign(conv_len_, Complex{0.0, 0.0});
    kernel_spectrum_[0] = std::conj(chirp_[0]);
    for (std::size_t j = 1; j < n_; ++j) {
      kernel_spectrum_[j] = std::conj(chirp_[j]);
      kernel_spectrum_[conv_len_ - j] = std::conj(chirp_[j]);
    }
    inner_->forward(kernel_spectrum_);
  }

  void radix2(std::span<Complex> a) const {
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t r = bitrev_[i];
      if (i < r) std::swap(a[i], a[r]);
    }
    // Short stages run block by block while the block is still in cache; the
    // long stages then sweep the whole array.
    const std::size_t block = std::min(n_, kCacheBlock);
    for (std::size_t base = 0; base < n_; base += block) {
      for (std::size_t len = 2; len <= block; len <<= 1) butterflies(a.data() + base, block, len);
    }
    for (std::size_t len = 2 * block; len <= n_; len <<= 1) butterflies(a.data(), n_, len);
  }

  void butterflies(Complex* a, std::size_t count, std::size_t len) const {
    const std::size_t half = len / 2;
    const Complex* w = twiddles_.data() + half - 1;
    for (std::size_t start = 0; start < count; start += len) {
      Complex* lo = a + start;
      Complex* hi = lo + half;
      for (std::size_t k = 0; k < half; ++k) {
        const Complex u = lo[k];
        const Complex v = cmul(hi[k], w[k]);
        lo[k] = u + v;
        hi[k] = u - v;
      }
    }
  }

  void bluestein(std::span<Complex> a) const {
    std::vector<Complex> work(conv_len_, Complex{0.0, 0.0});
    for (std::size_t j = 0; j < n_; ++j) work[j] = cmul(a[j], chirp_[j]);
    inner_->forward(work);
    for (std::size_t k = 0; k < conv_len_; ++k) work[k] = cmul(work[k], kernel_spectrum_[k]);
    inner_->inverse(work);
    for (std::size_t k = 0; k < n_; ++k) a[k] = cmul(work[k], chirp_[k]);
  }

  static constexpr std::size_t kCacheBlock = std::size_t{1} << 12;

  std::size_t n_;
  std::vector<Complex> twiddles_;
  std::vector<std::uint32_t> bitrev_;
  // Bluestein state
  std::size_t conv_len_ = 0;
  std::vector<Complex> chirp_;
  std::vector<Complex> kernel_spectrum_;
  std::shared_ptr<const FftPlan> inner_;
};

/// Plans are immutable once built and shared across callers by length.
inline std::shared_ptr<const FftPlan> fft_plan(std::size_t n) {
  static std::mutex mutex;
  static std::unordered_map<std::size_t, std::shared_ptr<const FftPlan>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
  }
  // Built outside the lock: Bluestein plans request their inner plan recursively.
  auto plan = std::make_shared<const FftPlan>(n);
  std::lock_guard lock(mutex);
  return cache.emplace(n, std::move(plan)).first->second;
}

}  // namespace fastbin
