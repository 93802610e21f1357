#pragma once

// Distances on the sphere and on the Hamming cube.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "fastbin/bitcode.hpp"
#include "fastbin/core/types.hpp"

namespace fastbin {

/// Normalized geodesic distance (1/pi) arccos(<x,y> / (|x| |y|)) in [0, 1].
inline double geodesic(std::span<const double> x, std::span<const double> y) {
  require_same_size(x.size(), y.size(), "geodesic");
  const double nx = norm2(x);
  const double ny = norm2(y);
  if (nx == 0.0 || ny == 0.0) throw DomainError("geodesic: zero vector");
  const double c = std::clamp(dot(x, y) / (nx * ny), -1.0, 1.0);
  return std::acos(c) / std::numbers::pi;
}

/// Fraction of disagreeing signs.
inline double hamming(const BitCode& a, const BitCode& b) {
  require_same_size(a.size(), b.size(), "hamming");
  if (a.size() == 0) throw DimensionError("hamming: empty codes");
  return static_cast<double>(count_mismatches(a, b, 0, a.size())) / static_cast<double>(a.size());
}

/// Hamming distances of the B consecutive blocks of length m / B.
inline std::vector<double> block_hamming(const BitCode& a, const BitCode& b, std::size_t blocks) {
  require_same_size(a.size(), b.size(), "block_hamming");
  if (blocks == 0 || a.size() % blocks != 0) {
    throw DomainError("median_block: code length " + std::to_string(a.size()) + " not divisible by B=" +
                      std::to_string(blocks));
  }
  const std::size_t len = a.size() / blocks;
  std::vector<double> d(blocks);
  for (std::size_t s = 0; s < blocks; ++s) {
    d[s] = static_cast<double>(count_mismatches(a, b, s * len, (s + 1) * len)) / static_cast<double>(len);
  }
  return d;
}

/// Median of block Hamming distances. For even B this is the lower median,
/// the ceil(B/2)-th order statistic.
inline double median_block(const BitCode& a, const BitCode& b, std::size_t blocks) {
  std::vector<double> d = block_hamming(a, b, blocks);
  const std::size_t k = (blocks + 1) / 2 - 1;
  std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
  return d[k];
}

/// Upper bounds on geodesic(x, y) for unit x, y with <x, y> >= 0:
/// first ‖x - y‖ / 2^{3/2}, second sqrt(1 - <x,y>^2) / 2.
inline std::pair<double, double> geo_bounds(std::span<const double> x, std::span<const double> y) {
  require_same_size(x.size(), y.size(), "geo_bounds");
  const double ip = dot(x, y);
  if (ip < 0.0) throw DomainError("geo_bounds: negative inner product");
  double dist2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) dist2 += (x[i] - y[i]) * (x[i] - y[i]);
  const double first = std::sqrt(dist2) / (2.0 * std::numbers::sqrt2);
  const double second = 0.5 * std::sqrt(std::max(0.0, 1.0 - ip * ip));
  return {first, second};
}

}  // namespace fastbin
