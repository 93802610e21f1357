#pragma once

// Dimension-reducing maps applied before the sign stage.
//
//   FJLT:  x -> sqrt(n_pad / n') R_I H D_eps pad(x)     O(n_pad log n_pad)
//   SJLT:  (Phi)_ij = sigma_ij delta_ij / sqrt(s)        O(s nnz(x))
//   Dense: i.i.d. N(0, 1) entries                        O(rows * cols)
//
// H is the orthonormal Hadamard transform and pad() zero-fills x up to the
// next power of two, which leaves all norms unchanged.

#include <algorithm>
#include <bit>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fastbin/core/transforms.hpp"
#include "fastbin/core/types.hpp"
#include "fastbin/random.hpp"

namespace fastbin {

enum class JlVariant { Fjlt, Sjlt, DenseGaussian };

inline const char* to_string(JlVariant v) {
  switch (v) {
    case JlVariant::Fjlt: return "fjlt";
    case JlVariant::Sjlt: return "sjlt";
    case JlVariant::DenseGaussian: return "dense";
  }
  return "?";
}

/// Row-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  DenseMatrix(std::size_t rows, std::size_t cols, RealVector data) : rows_(rows), cols_(cols), data_(std::move(data)) {
    require_same_size(data_.size(), rows * cols, "DenseMatrix");
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  RealVector apply(std::span<const double> x) const {
    require_same_size(x.size(), cols_, "DenseMatrix::apply");
    RealVector out(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      const double* r = data_.data() + i * cols_;
      double acc = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) acc += r[j] * x[j];
      out[i] = acc;
    }
    return out;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  RealVector data_;
};

inline DenseMatrix gaussian_matrix(SeedSpec seed, std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw DimensionError("gaussian_matrix: dimensions must be >= 1");
  Rng rng(seed);
  return DenseMatrix(rows, cols, gaussian_vector(rng, rows * cols));
}

struct FjltPayload {
  std::size_t padded_dim = 0;
  IndexSet rows;      // subset of [padded_dim], size n'
  RealVector signs;   // length padded_dim
  double scale = 1.0; // sqrt(padded_dim / n')
};

struct SjltPayload {
  SjltPattern pattern;
};

struct DenseGaussianPayload {
  DenseMatrix matrix;
};

class JlTransform {
 public:
  using Payload = std::variant<FjltPayload, SjltPayload, DenseGaussianPayload>;

  JlTransform() = default;
  JlTransform(JlVariant variant, std::size_t in_dim, std::size_t out_dim, Payload payload)
      : variant_(variant), in_dim_(in_dim), out_dim_(out_dim), payload_(std::move(payload)) {}

  JlVariant variant() const noexcept { return variant_; }
  std::size_t in_dim() const noexcept { return in_dim_; }
  std::size_t out_dim() const noexcept { return out_dim_; }
  const Payload& payload() const noexcept { return payload_; }

  RealVector apply(std::span<const double> x) const {
    require_same_size(x.size(), in_dim_, "JlTransform::apply");
    return std::visit([&](const auto& p) { return apply_impl(p, x); }, payload_);
  }

 private:
  RealVector apply_impl(const FjltPayload& p, std::span<const double> x) const {
    RealVector work(p.padded_dim, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) work[i] = p.signs[i] * x[i];
    fwht_inplace(work);
    RealVector out = restrict(work, p.rows);
    for (double& v : out) v *= p.scale;
    return out;
  }

  RealVector apply_impl(const SjltPayload& p, std::span<const double> x) const {
    const auto& pat = p.pattern;
    RealVector out(pat.rows(), 0.0);
    const double scale = pat.scale();
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double xj = x[j];
      if (xj == 0.0) continue;
      const auto rows = pat.column_rows(j);
      const auto signs = pat.column_signs(j);
      const double v = scale * xj;
      for (std::size_t k = 0; k < rows.size(); ++k) out[rows[k]] += signs[k] * v;
    }
    return out;
  }

  RealVector apply_impl(const DenseGaussianPayload& p, std::span<const double> x) const {
    return p.matrix.apply(x);
  }

  JlVariant variant_ = JlVariant::DenseGaussian;
  std::size_t in_dim_ = 0;
  std::size_t out_dim_ = 0;
  Payload payload_;
};

inline JlTransform build_fjlt(SeedSpec seed, std::size_t n, std::size_t nprime) {
  if (n == 0) throw DimensionError("build_fjlt: n must be >= 1");
  const std::size_t padded = std::bit_ceil(n);
  if (nprime == 0 || nprime > padded) {
    throw DomainError("build_fjlt: need 1 <= n' <= n_pad (n'=" + std::to_string(nprime) +
                      ", n_pad=" + std::to_string(padded) + ")");
  }
  FjltPayload p;
  p.padded_dim = padded;
  p.rows = uniform_subset(seed.fork(1), padded, nprime);
  p.signs = rademacher_vector(seed.fork(2), padded);
  p.scale = std::sqrt(static_cast<double>(padded) / static_cast<double>(nprime));
  return JlTransform(JlVariant::Fjlt, n, nprime, std::move(p));
}

inline JlTransform build_sjlt(SeedSpec seed, std::size_t n, std::size_t nprime, std::size_t s) {
  if (n == 0 || nprime == 0) throw DimensionError("build_sjlt: dimensions must be >= 1");
  if (s == 0 || s > nprime) throw DomainError("build_sjlt: need 1 <= s <= n'");
  return JlTransform(JlVariant::Sjlt, n, nprime, SjltPayload{sjlt_pattern(seed, n, nprime, s)});
}

inline JlTransform build_dense_gaussian(SeedSpec seed, std::size_t n, std::size_t m) {
  if (n == 0 || m == 0) throw DimensionError("build_dense_gaussian: dimensions must be >= 1");
  return JlTransform(JlVariant::DenseGaussian, n, m, DenseGaussianPayload{gaussian_matrix(seed, m, n)});
}

struct IsometryReport {
  double max_norm_distortion = 0.0;  // over z in D
  double max_pair_distortion = 0.0;  // over nonzero z in D - D
  double delta_target = 0.0;
  bool pass = false;
};

/// max |‖Φz‖/‖z‖ - 1| over D and the nonzero differences D - D.
inline IsometryReport check_isometry(const JlTransform& t, const PointSet& points, double delta) {
  if (points.empty()) throw DomainError("check_isometry: empty point set");
  require_same_size(points.dim(), t.in_dim(), "check_isometry");
  IsometryReport report;
  report.delta_target = delta;
  std::vector<RealVector> images;
  images.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto x = points.row(i);
    images.push_back(t.apply(x));
    const double nx = norm2(x);
    if (nx == 0.0) continue;
    report.max_norm_distortion = std::max(report.max_norm_distortion, std::abs(norm2(images.back()) / nx - 1.0));
  }
  RealVector diff(points.dim()), image_diff(t.out_dim());
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const auto a = points.row(i);
      const auto b = points.row(j);
      for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = a[k] - b[k];
      const double nz = norm2(diff);
      if (nz == 0.0) continue;
      // Linearity: Φ(a - b) = Φa - Φb.
      for (std::size_t k = 0; k < image_diff.size(); ++k) image_diff[k] = images[i][k] - images[j][k];
      report.max_pair_distortion = std::max(report.max_pair_distortion, std::abs(norm2(image_diff) / nz - 1.0));
    }
  }
  report.pass = report.max_norm_distortion <= delta && report.max_pair_distortion <= delta;
  return report;
}

}  // namespace fastbin
