#pragma once

// Reproducible sampling of every random object used by the embeddings:
// Gaussian and Rademacher vectors, uniform and dyadic index sets, and sparse
// JL sparsity patterns.
//
// A SeedSpec (master seed, stream id) fully determines a stream. Samplers are
// pure functions of (SeedSpec, shape); there is no global generator.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fastbin/core/types.hpp"

namespace fastbin {

/// SplitMix64 finalizer; also used to expand seeds into generator state.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct SeedSpec {
  std::uint64_t master = 0;
  std::uint64_t stream = 0;

  /// Child stream for a named sub-component (generator, signs, rows, ...).
  SeedSpec fork(std::uint64_t tag) const noexcept {
    return {master, splitmix64_mix(stream ^ splitmix64_mix(tag + 0x632be59bd9b4e019ULL))};
  }

  bool operator==(const SeedSpec&) const = default;
};

/// Trial t of experiment e gets stream (e << 40) | t: injective for t < 2^40,
/// so results do not depend on execution order.
inline SeedSpec trial_seed(std::uint64_t master, std::uint64_t experiment_id, std::uint64_t trial) {
  if (trial >= (std::uint64_t{1} << 40) || experiment_id >= (std::uint64_t{1} << 24)) {
    throw DomainError("trial_seed: experiment or trial id out of range");
  }
  return {master, (experiment_id << 40) | trial};
}

/// Parses a seed given as decimal or 0x-prefixed hexadecimal.
inline std::uint64_t parse_seed(const std::string& text) {
  std::size_t pos = 0;
  std::uint64_t value = 0;
  try {
    if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
      value = std::stoull(text.substr(2), &pos, 16);
      pos += 2;
    } else {
      value = std::stoull(text, &pos, 10);
    }
  } catch (const std::exception&) {
    throw DomainError("invalid seed '" + text + "'");
  }
  if (pos != text.size() || text.front() == '-' || text.front() == '+') {
    throw DomainError("invalid seed '" + text + "'");
  }
  return value;
}

/// xoshiro256** seeded through SplitMix64 from a SeedSpec.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(SeedSpec seed) {
    std::uint64_t z = splitmix64_mix(seed.master ^ 0x9e3779b97f4a7c15ULL) ^ splitmix64_mix(seed.stream + 0xd1b54a32d192ed03ULL);
    for (auto& s : state_) {
      z += 0x9e3779b97f4a7c15ULL;
      s = splitmix64_mix(z);
    }
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() noexcept {
    const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = std::rotl(state_[3], 45);
    return result;
  }

  double normal() { return normal_(*this); }

  double sign() { return ((*this)() >> 63) ? 1.0 : -1.0; }

  /// Uniform integer in [0, bound).
  std::size_t below(std::size_t bound) {
    return std::uniform_int_distribution<std::size_t>(0, bound - 1)(*this);
  }

  double uniform01() { return std::uniform_real_distribution<double>(0.0, 1.0)(*this); }

 private:
  std::uint64_t state_[4];
  std::normal_distribution<double> normal_{0.0, 1.0};
};

inline RealVector gaussian_vector(Rng& rng, std::size_t n) {
  if (n == 0) throw DimensionError("gaussian_vector: n must be >= 1");
  RealVector out(n);
  for (auto& v : out) v = rng.normal();
  return out;
}

inline RealVector gaussian_vector(SeedSpec seed, std::size_t n) {
  Rng rng(seed);
  return gaussian_vector(rng, n);
}

inline RealVector rademacher_vector(Rng& rng, std::size_t n) {
  if (n == 0) throw DimensionError("rademacher_vector: n must be >= 1");
  RealVector out(n);
  std::size_t k = 0;
  while (k < n) {
    std::uint64_t bits = rng();
    for (int b = 0; b < 64 && k < n; ++b, bits >>= 1) out[k++] = (bits & 1U) ? 1.0 : -1.0;
  }
  return out;
}

inline RealVector rademacher_vector(SeedSpec seed, std::size_t n) {
  Rng rng(seed);
  return rademacher_vector(rng, n);
}

/// Uniform size-m subset of [n] by partial Fisher-Yates, returned sorted.
inline IndexSet uniform_subset(Rng& rng, std::size_t n, std::size_t m) {
  if (m == 0 || m > n) {
    throw DomainError("uniform_subset: need 1 <= m <= n (m=" + std::to_string(m) + ", n=" + std::to_string(n) + ")");
  }
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + rng.below(n - i);
    std::swap(perm[i], perm[j]);
  }
  perm.resize(m);
  std::sort(perm.begin(), perm.end());
  return IndexSet::from_zero_based(std::move(perm), n);
}

inline IndexSet uniform_subset(SeedSpec seed, std::size_t n, std::size_t m) {
  Rng rng(seed);
  return uniform_subset(rng, n, m);
}

/// The first m dyadic integers {1, 2, 4, ..., 2^{m-1}} (1-based) as a subset of [n].
inline IndexSet dyadic_set(std::size_t n, std::size_t m) {
  if (m == 0) throw DomainError("dyadic_set: m must be >= 1");
  if (m > 64 || (std::uint64_t{1} << (m - 1)) > n) {
    throw DomainError("dyadic_set: 2^(m-1) exceeds n (m=" + std::to_string(m) + ", n=" + std::to_string(n) + ")");
  }
  std::vector<std::size_t> idx(m);
  for (std::size_t i = 0; i < m; ++i) idx[i] = (std::size_t{1} << i) - 1;
  return IndexSet::from_zero_based(std::move(idx), n);
}

/// Column-wise sparsity pattern of a sparse JL transform: column j has exactly
/// s distinct rows rows(j)[0..s) with signs signs(j)[0..s); the scale 1/sqrt(s)
/// is applied by the transform.
class SjltPattern {
 public:
  SjltPattern() = default;
  SjltPattern(std::size_t rows, std::size_t cols, std::size_t s, std::vector<std::uint32_t> row_index,
              std::vector<std::int8_t> sign)
      : rows_(rows), cols_(cols), s_(s), row_index_(std::move(row_index)), sign_(std::move(sign)) {
    require_same_size(row_index_.size(), cols_ * s_, "SjltPattern rows");
    require_same_size(sign_.size(), cols_ * s_, "SjltPattern signs");
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t sparsity() const noexcept { return s_; }
  double scale() const { return 1.0 / std::sqrt(static_cast<double>(s_)); }

  std::span<const std::uint32_t> column_rows(std::size_t j) const { return {row_index_.data() + j * s_, s_}; }
  std::span<const std::int8_t> column_signs(std::size_t j) const { return {sign_.data() + j * s_, s_}; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t s_ = 0;
  std::vector<std::uint32_t> row_index_;
  std::vector<std::int8_t> sign_;
};

/// Independent columns; in each, s rows uniformly without replacement and
/// independent Rademacher signs.
inline SjltPattern sjlt_pattern(SeedSpec seed, std::size_t n, std::size_t nprime, std::size_t s) {
  if (n == 0 || nprime == 0) throw DimensionError("sjlt_pattern: dimensions must be >= 1");
  if (s == 0 || s > nprime) throw DomainError("sjlt_pattern: need 1 <= s <= n'");
  Rng rng(seed);
  std::vector<std::uint32_t> rows(n * s);
  std::vector<std::int8_t> signs(n * s);
  std::vector<std::uint32_t> scratch(nprime);
  for (std::size_t i = 0; i < nprime; ++i) scratch[i] = static_cast<std::uint32_t>(i);
  for (std::size_t j = 0; j < n; ++j) {
    // Partial Fisher-Yates on a persistent permutation: any permutation of
    // the scratch array is a valid starting point, so no reset is needed.
    for (std::size_t k = 0; k < s; ++k) {
      const std::size_t pick = k + rng.below(nprime - k);
      std::swap(scratch[k], scratch[pick]);
      rows[j * s + k] = scratch[k];
      signs[j * s + k] = static_cast<std::int8_t>(rng.sign());
    }
  }
  return SjltPattern(nprime, n, s, std::move(rows), std::move(signs));
}

}  // namespace fastbin
