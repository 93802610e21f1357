#pragma once

// Deterministic structured linear maps: cyclic shift, circulant and Toeplitz
// products (direct and FFT), the orthonormal Walsh-Hadamard transform,
// coordinate restriction and diagonal sign flips.
//
// Circulant convention. For a generator x of length n the circulant C_x has
// 1-based row i equal to T^{n-i} x, where (T x)_l = x_{l+1} (indices mod n).
// In 0-based storage that is
//
//     C_x[i][l] = x[(l - i - 1) mod n],
//
// so the first row reads (x_n, x_1, ..., x_{n-1}) and the diagonal is x_n.
// Equivalently C_x y is the circular convolution of reverse(x) with y, which
// is what the FFT path evaluates.
//
// Toeplitz convention. For a generator t of length 2n-1,
//
//     T_t[i][l] = t[(l - i - 1) mod (2n - 1)],
//
// i.e. diagonal t_{2n-1}, first row (t_{2n-1}, t_1, ..., t_{n-1}) and first
// column (t_{2n-1}, t_{2n-2}, ..., t_n). T_t is the upper-left n x n block of
// a 2n x 2n circulant whose generator is t with a zero inserted at position n.

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "fastbin/core/fft.hpp"
#include "fastbin/core/types.hpp"

namespace fastbin {

enum class StructureMode { Circulant, Toeplitz };

/// Generator of a structured square operator of size dim().
struct CirculantSpec {
  RealVector generator;
  StructureMode mode = StructureMode::Circulant;

  /// Side length of the operator.
  std::size_t dim() const {
    return mode == StructureMode::Circulant ? generator.size() : (generator.size() + 1) / 2;
  }
};

inline std::size_t mod_index(std::int64_t v, std::size_t n) {
  const auto nn = static_cast<std::int64_t>(n);
  std::int64_t r = v % nn;
  if (r < 0) r += nn;
  return static_cast<std::size_t>(r);
}

/// (T^k x)_i = x_{i+k}, indices modulo n.
inline RealVector shift_apply(std::span<const double> x, std::int64_t k) {
  require_nonempty(x, "shift_apply");
  const std::size_t n = x.size();
  const std::size_t offset = mod_index(k, n);
  RealVector out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = x[(i + offset) % n];
  return out;
}

namespace detail {

inline void check_circulant(const CirculantSpec& spec, std::size_t ylen, const char* what) {
  if (spec.mode != StructureMode::Circulant) throw DomainError(std::string(what) + ": expects circulant mode");
  require_nonempty(spec.generator, what);
  require_same_size(spec.generator.size(), ylen, what);
}

inline void check_toeplitz(const CirculantSpec& spec, std::size_t ylen, const char* what) {
  if (spec.mode != StructureMode::Toeplitz) throw DomainError(std::string(what) + ": expects toeplitz mode");
  const std::size_t len = spec.generator.size();
  if (len == 0 || len % 2 == 0) {
    throw DimensionError(std::string(what) + ": Toeplitz generator length must be odd (2n-1)");
  }
  require_same_size((len + 1) / 2, ylen, what);
}

}  // namespace detail

/// Exact O(n^2) evaluation of C_x y straight from the row formula.
inline RealVector circulant_matvec_direct(const CirculantSpec& spec, std::span<const double> y) {
  detail::check_circulant(spec, y.size(), "circulant_matvec_direct");
  const std::size_t n = y.size();
  const auto& x = spec.generator;
  RealVector out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
      acc += x[(l + 2 * n - i - 1) % n] * y[l];
    }
    out[i] = acc;
  }
  return out;
}

/// Exact O(n^2) evaluation of T_t y.
inline RealVector toeplitz_matvec_direct(const CirculantSpec& spec, std::span<const double> y) {
  detail::check_toeplitz(spec, y.size(), "toeplitz_matvec_direct");
  const std::size_t n = y.size();
  const std::size_t len = 2 * n - 1;
  const auto& t = spec.generator;
  RealVector out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
      acc += t[(l + len - i - 1) % len] * y[l];
    }
    out[i] = acc;
  }
  return out;
}

/// C_x with the spectrum of reverse(x) cached; products cost two FFTs.
class CirculantOperator {
 public:
  CirculantOperator() = default;

  explicit CirculantOperator(std::span<const double> generator) : n_(generator.size()) {
    require_nonempty(generator, "CirculantOperator");
    plan_ = fft_plan(n_);
    spectrum_.resize(n_);
    for (std::size_t k = 0; k < n_; ++k) spectrum_[k] = {generator[n_ - 1 - k], 0.0};
    plan_->forward(spectrum_);
  }

  std::size_t dim() const noexcept { return n_; }

  RealVector apply(std::span<const double> y) const {
    require_same_size(y.size(), n_, "CirculantOperator::apply");
    std::vector<Complex> work(n_);
    for (std::size_t k = 0; k < n_; ++k) work[k] = {y[k], 0.0};
    convolve(work);
    RealVector out(n_);
    for (std::size_t k = 0; k < n_; ++k) out[k] = work[k].real();
    return out;
  }

  /// Both products from one complex transform: C(y1 + i y2) = C y1 + i C y2.
  std::pair<RealVector, RealVector> apply_pair(std::span<const double> y1, std::span<const double> y2) const {
    require_same_size(y1.size(), n_, "CirculantOperator::apply_pair");
    require_same_size(y2.size(), n_, "CirculantOperator::apply_pair");
    std::vector<Complex> work(n_);
    for (std::size_t k = 0; k < n_; ++k) work[k] = {y1[k], y2[k]};
    convolve(work);
    std::pair<RealVector, RealVector> out{RealVector(n_), RealVector(n_)};
    for (std::size_t k = 0; k < n_; ++k) {
      out.first[k] = work[k].real();
      out.second[k] = work[k].imag();
    }
    return out;
  }

 private:
  void convolve(std::vector<Complex>& work) const {
    plan_->forward(work);
    for (std::size_t k = 0; k < n_; ++k) work[k] = cmul(work[k], spectrum_[k]);
    plan_->inverse(work);
  }

  std::size_t n_ = 0;
  std::shared_ptr<const FftPlan> plan_;
  std::vector<Complex> spectrum_;
};

/// Generator of the 2n x 2n circulant whose upper-left block is T_t.
inline RealVector toeplitz_embedding_generator(std::span<const double> t) {
  const std::size_t n = (t.size() + 1) / 2;
  RealVector z(2 * n, 0.0);
  for (std::size_t j = 0; j + 1 < n; ++j) z[j] = t[j];
  for (std::size_t j = n; j < 2 * n; ++j) z[j] = t[j - 1];
  return z;
}

/// T_t evaluated through the zero-padded 2n circulant.
class ToeplitzOperator {
 public:
  ToeplitzOperator() = default;

  explicit ToeplitzOperator(std::span<const double> generator) {
    if (generator.empty() || generator.size() % 2 == 0) {
      throw DimensionError("ToeplitzOperator: generator length must be odd (2n-1)");
    }
    n_ = (generator.size() + 1) / 2;
    const RealVector z = toeplitz_embedding_generator(generator);
    circ_ = CirculantOperator(z);
  }

  std::size_t dim() const noexcept { return n_; }

  RealVector apply(std::span<const double> y) const {
    require_same_size(y.size(), n_, "ToeplitzOperator::apply");
    RealVector padded(2 * n_, 0.0);
    std::copy(y.begin(), y.end(), padded.begin());
    RealVector full = circ_.apply(padded);
    full.resize(n_);
    return full;
  }

  std::pair<RealVector, RealVector> apply_pair(std::span<const double> y1, std::span<const double> y2) const {
    require_same_size(y1.size(), n_, "ToeplitzOperator::apply_pair");
    require_same_size(y2.size(), n_, "ToeplitzOperator::apply_pair");
    RealVector p1(2 * n_, 0.0), p2(2 * n_, 0.0);
    std::copy(y1.begin(), y1.end(), p1.begin());
    std::copy(y2.begin(), y2.end(), p2.begin());
    auto out = circ_.apply_pair(p1, p2);
    out.first.resize(n_);
    out.second.resize(n_);
    return out;
  }

 private:
  std::size_t n_ = 0;
  CirculantOperator circ_;
};

/// C_x y in O(n log n) for any n >= 1.
inline RealVector circulant_matvec_fft(const CirculantSpec& spec, std::span<const double> y) {
  detail::check_circulant(spec, y.size(), "circulant_matvec_fft");
  return CirculantOperator(spec.generator).apply(y);
}

/// T_t y in O(n log n); generator length must be 2n - 1.
inline RealVector toeplitz_matvec(const CirculantSpec& spec, std::span<const double> y) {
  detail::check_toeplitz(spec, y.size(), "toeplitz_matvec");
  return ToeplitzOperator(spec.generator).apply(y);
}

/// Orthonormal Walsh-Hadamard transform in place (entries of H are +-1/sqrt(n)).
inline void fwht_inplace(std::span<double> x) {
  const std::size_t n = x.size();
  if (n == 0 || !std::has_single_bit(n)) {
    throw DimensionError("fwht: length " + std::to_string(n) + " is not a power of two");
  }
  for (std::size_t len = 1; len < n; len <<= 1) {
    for (std::size_t start = 0; start < n; start += 2 * len) {
      for (std::size_t k = start; k < start + len; ++k) {
        const double u = x[k];
        const double v = x[k + len];
        x[k] = u + v;
        x[k + len] = u - v;
      }
    }
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (double& v : x) v *= scale;
}

inline RealVector fwht(std::span<const double> x) {
  RealVector out(x.begin(), x.end());
  fwht_inplace(out);
  return out;
}

/// R_I x = (x_i)_{i in I}, in increasing index order.
inline RealVector restrict(std::span<const double> x, const IndexSet& rows) {
  if (rows.ambient_dim() != x.size()) {
    throw DomainError("restrict: index set ambient dimension " + std::to_string(rows.ambient_dim()) +
                      " does not match vector length " + std::to_string(x.size()));
  }
  RealVector out;
  out.reserve(rows.size());
  for (std::size_t i : rows.indices()) out.push_back(x[i]);
  return out;
}

/// D_eps x for a sign vector eps in {-1, +1}^n.
inline RealVector sign_flip(std::span<const double> x, std::span<const double> eps) {
  require_same_size(x.size(), eps.size(), "sign_flip");
  RealVector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (eps[i] != 1.0 && eps[i] != -1.0) throw DomainError("sign_flip: entry is not a sign");
    out[i] = eps[i] * x[i];
  }
  return out;
}

}  // namespace fastbin
