#pragma once

// Shared test helpers: a seeded case generator independent of the library's
// own RNG, and dense-matrix oracles built straight from the definitions.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "fastbin/fastbin.hpp"

namespace fbtest {

using fastbin::RealVector;
using Matrix = std::vector<RealVector>;

/// Property-test case generator: mt19937_64, so failures reproduce from the seed.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  std::size_t size(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(eng_); }
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(eng_);
  }

  RealVector vec(std::size_t n) {
    RealVector v(n);
    for (auto& x : v) x = normal();
    return v;
  }
  RealVector unit(std::size_t n) {
    RealVector v;
    do {
      v = vec(n);
    } while (fastbin::norm2(v) == 0.0);
    return fastbin::normalized(v);
  }

 private:
  std::mt19937_64 eng_;
};

inline Matrix zeros(std::size_t rows, std::size_t cols) { return Matrix(rows, RealVector(cols, 0.0)); }

inline RealVector matvec(const Matrix& a, const RealVector& x) {
  RealVector out(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) out[i] += a[i][j] * x[j];
  }
  return out;
}

inline Matrix matmul(const Matrix& a, const Matrix& b) {
  Matrix out = zeros(a.size(), b.front().size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < b.size(); ++k) {
      for (std::size_t j = 0; j < b[k].size(); ++j) out[i][j] += a[i][k] * b[k][j];
    }
  }
  return out;
}

/// (T x)_i = x_{i+1}, cyclic; k-fold application.
inline RealVector shift_by(const RealVector& x, std::size_t k) {
  const std::size_t n = x.size();
  RealVector out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = x[(i + k) % n];
  return out;
}

/// Dense C_x: row i (1-based) is T^{n-i} x.
inline Matrix dense_circulant(const RealVector& x) {
  const std::size_t n = x.size();
  Matrix c;
  for (std::size_t i = 1; i <= n; ++i) c.push_back(shift_by(x, n - i));
  return c;
}

/// Upper-left n x n block of the (2n - 1) x (2n - 1) circulant of t.
inline Matrix dense_toeplitz(const RealVector& t) {
  const std::size_t n = (t.size() + 1) / 2;
  const Matrix full = dense_circulant(t);
  Matrix out = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i][j] = full[i][j];
  }
  return out;
}

/// Orthonormal Sylvester Hadamard matrix, n a power of two.
inline Matrix dense_hadamard(std::size_t n) {
  Matrix h = zeros(n, n);
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) h[i][j] = (std::popcount(i & j) % 2 == 0) ? s : -s;
  }
  return h;
}

/// Dense matrix of a JL transform, rebuilt from its payload.
inline Matrix dense_jl(const fastbin::JlTransform& t) {
  using namespace fastbin;
  Matrix out = zeros(t.out_dim(), t.in_dim());
  if (const auto* f = std::get_if<FjltPayload>(&t.payload())) {
    const Matrix h = dense_hadamard(f->padded_dim);
    for (std::size_t r = 0; r < f->rows.size(); ++r) {
      for (std::size_t j = 0; j < t.in_dim(); ++j) out[r][j] = f->scale * h[f->rows.indices()[r]][j] * f->signs[j];
    }
  } else if (const auto* s = std::get_if<SjltPayload>(&t.payload())) {
    for (std::size_t j = 0; j < t.in_dim(); ++j) {
      const auto rows = s->pattern.column_rows(j);
      const auto signs = s->pattern.column_signs(j);
      for (std::size_t k = 0; k < rows.size(); ++k) out[rows[k]][j] = signs[k] * s->pattern.scale();
    }
  } else {
    const auto& g = std::get<DenseGaussianPayload>(t.payload()).matrix;
    for (std::size_t i = 0; i < g.rows(); ++i) {
      for (std::size_t j = 0; j < g.cols(); ++j) out[i][j] = g(i, j);
    }
  }
  return out;
}

/// The full m x n matrix A of an embedder, so that f(x) = sgn(A x).
inline Matrix dense_embedder(const fastbin::BinaryEmbedder& e) {
  using namespace fastbin;
  Matrix stage;
  if (e.gaussian_stage()) {
    const auto& g = *e.gaussian_stage();
    stage = zeros(g.rows(), g.cols());
    for (std::size_t i = 0; i < g.rows(); ++i) {
      for (std::size_t j = 0; j < g.cols(); ++j) stage[i][j] = g(i, j);
    }
  } else {
    for (const auto& b : e.sign_blocks()) {
      const Matrix s = b.shape() == StructureMode::Circulant ? dense_circulant(b.generator()) : dense_toeplitz(b.generator());
      for (std::size_t i : b.row_set().indices()) {
        RealVector row = s[i];
        if (b.signs()) {
          for (std::size_t j = 0; j < row.size(); ++j) row[j] *= (*b.signs())[j];
        }
        stage.push_back(row);
      }
    }
  }
  if (!e.preconditioner()) return stage;
  return matmul(stage, dense_jl(*e.preconditioner()));
}

inline fastbin::BitCode oracle_code(const Matrix& a, const RealVector& x, std::size_t blocks = 1) {
  return fastbin::BitCode::from_values(matvec(a, x), blocks);
}

/// A random small recipe of the given kind (n <= 32), covering every row
/// mode, preconditioner and block shape the kind admits.
inline fastbin::EmbedderRecipe random_recipe(Gen& gen, fastbin::EmbedderKind kind, fastbin::SeedSpec seed) {
  using namespace fastbin;
  EmbedderRecipe r;
  r.kind = kind;
  r.seed = seed;
  r.n = gen.size(1, 32);
  const auto pick_variant = [&] {
    r.variant = gen.size(0, 1) == 0 ? JlVariant::Fjlt : JlVariant::Sjlt;
    r.nprime = gen.size(1, r.variant == JlVariant::Fjlt ? std::bit_ceil(r.n) : 40);
    if (r.variant == JlVariant::Sjlt) r.s = gen.size(1, r.nprime);
  };
  const auto pick_shape = [&] {
    r.block_shape = gen.size(0, 1) == 0 ? StructureMode::Circulant : StructureMode::Toeplitz;
  };
  switch (kind) {
    case EmbedderKind::DenseGaussian:
      r.m = gen.size(1, 40);
      break;
    case EmbedderKind::AcceleratedGaussian:
      pick_variant();
      r.m = gen.size(1, 40);
      break;
    case EmbedderKind::SubsampledCirculant: {
      pick_shape();
      const std::size_t mode = gen.size(0, 3);
      r.rows = static_cast<RowMode>(mode);
      if (r.rows == RowMode::Dyadic) {
        r.m = gen.size(1, static_cast<std::size_t>(std::bit_width(r.n)));
      } else {
        r.m = gen.size(1, r.n);
      }
      if (r.rows == RowMode::Explicit) {
        std::vector<std::size_t> all(r.n);
        for (std::size_t i = 0; i < r.n; ++i) all[i] = i + 1;
        for (std::size_t i = 0; i < r.m; ++i) std::swap(all[i], all[i + gen.size(0, r.n - 1 - i)]);
        r.explicit_rows.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(r.m));
        std::sort(r.explicit_rows.begin(), r.explicit_rows.end());
      }
      break;
    }
    case EmbedderKind::SignedCirculant:
      pick_shape();
      r.rows = gen.size(0, 1) == 0 ? RowMode::FirstM : RowMode::Uniform;
      r.m = gen.size(1, r.n);
      break;
    case EmbedderKind::MedianFast:
      pick_shape();
      pick_variant();
      r.rows = RowMode::Uniform;
      r.blocks = gen.size(1, 4);
      r.m = r.blocks * gen.size(1, r.nprime);
      break;
  }
  return r;
}

inline constexpr fastbin::EmbedderKind kAllKinds[] = {
    fastbin::EmbedderKind::DenseGaussian, fastbin::EmbedderKind::AcceleratedGaussian,
    fastbin::EmbedderKind::SubsampledCirculant, fastbin::EmbedderKind::SignedCirculant,
    fastbin::EmbedderKind::MedianFast};

/// Positions where the fast codes of x differ from sgn(A x) with A materialized.
inline std::size_t oracle_mismatches(const fastbin::BinaryEmbedder& e, const RealVector& x) {
  const Matrix a = dense_embedder(e);
  const fastbin::BitCode want = oracle_code(a, x, e.block_count());
  const fastbin::BitCode got = e.embed(x);
  if (got.size() != want.size()) return std::max(got.size(), want.size());
  std::size_t bad = 0;
  for (std::size_t k = 0; k < got.size(); ++k) bad += got.sign(k) != want.sign(k);
  return bad;
}

}  // namespace fbtest
