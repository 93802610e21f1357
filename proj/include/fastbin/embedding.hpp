#pragma once

// Sign embeddings x -> sgn(A x) into the Hamming cube.
//
//   DenseGaussian        A = G                      (m x n Gaussian)
//   AcceleratedGaussian  A = G Phi                  (Phi an FJLT or SJLT, G m x n')
//   SubsampledCirculant  A = R_I C_g
//   SignedCirculant      A = R_I C_g D_eps
//   MedianFast           A = [Psi^(1); ...; Psi^(B)] Phi,
//                        Psi^(s) = R_{I^(s)} C_{g^(s)} D_{eps^(s)}, |I^(s)| = m'
//
// MedianFast codes are compared with the median block distance, all others
// with the normalized Hamming distance. An embedder is fully determined by its
// EmbedderRecipe (parameters plus seed); nothing else needs to be stored.

#include <cmath>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fastbin/bitcode.hpp"
#include "fastbin/core/transforms.hpp"
#include "fastbin/core/types.hpp"
#include "fastbin/jl.hpp"
#include "fastbin/metrics.hpp"
#include "fastbin/random.hpp"

namespace fastbin {

enum class EmbedderKind { DenseGaussian, AcceleratedGaussian, SubsampledCirculant, SignedCirculant, MedianFast };
enum class RowMode { FirstM, Dyadic, Uniform, Explicit };
enum class OutputDistance { Hamming, MedianBlock };

inline const char* to_string(EmbedderKind k) {
  switch (k) {
    case EmbedderKind::DenseGaussian: return "dense";
    case EmbedderKind::AcceleratedGaussian: return "accelerated";
    case EmbedderKind::SubsampledCirculant: return "subsampled";
    case EmbedderKind::SignedCirculant: return "signed";
    case EmbedderKind::MedianFast: return "median";
  }
  return "?";
}

inline const char* to_string(RowMode r) {
  switch (r) {
    case RowMode::FirstM: return "first_m";
    case RowMode::Dyadic: return "dyadic";
    case RowMode::Uniform: return "uniform";
    case RowMode::Explicit: return "explicit";
  }
  return "?";
}

inline const char* to_string(StructureMode s) { return s == StructureMode::Circulant ? "circulant" : "toeplitz"; }

/// One block R_I S D_eps with S circulant (generator length d) or Toeplitz
/// (generator length 2d - 1). Without signs the D_eps factor is omitted.
class SignBlock {
 public:
  SignBlock() = default;
  SignBlock(RealVector generator, std::optional<RealVector> signs, IndexSet rows, StructureMode shape)
      : generator_(std::move(generator)), signs_(std::move(signs)), rows_(std::move(rows)), shape_(shape) {
    if (shape_ == StructureMode::Circulant) {
      op_ = CirculantOperator(generator_);
    } else {
      op_ = ToeplitzOperator(generator_);
    }
    dim_ = std::visit([](const auto& o) { return o.dim(); }, op_);
    if (signs_) require_same_size(signs_->size(), dim_, "SignBlock signs");
    require_same_size(rows_.ambient_dim(), dim_, "SignBlock rows");
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t rows() const noexcept { return rows_.size(); }
  const RealVector& generator() const noexcept { return generator_; }
  const std::optional<RealVector>& signs() const noexcept { return signs_; }
  const IndexSet& row_set() const noexcept { return rows_; }
  StructureMode shape() const noexcept { return shape_; }

  RealVector apply(std::span<const double> x) const {
    const RealVector full = std::visit([&](const auto& o) { return o.apply(signed_input(x)); }, op_);
    return restrict(full, rows_);
  }

  std::pair<RealVector, RealVector> apply_pair(std::span<const double> x, std::span<const double> y) const {
    const RealVector sx = signed_input(x);
    const RealVector sy = signed_input(y);
    auto full = std::visit([&](const auto& o) { return o.apply_pair(sx, sy); }, op_);
    return {restrict(full.first, rows_), restrict(full.second, rows_)};
  }

 private:
  RealVector signed_input(std::span<const double> x) const {
    require_same_size(x.size(), dim_, "SignBlock::apply");
    RealVector v(x.begin(), x.end());
    if (signs_) {
      for (std::size_t i = 0; i < v.size(); ++i) v[i] *= (*signs_)[i];
    }
    return v;
  }

  RealVector generator_;
  std::optional<RealVector> signs_;
  IndexSet rows_;
  StructureMode shape_ = StructureMode::Circulant;
  std::variant<CirculantOperator, ToeplitzOperator> op_;
  std::size_t dim_ = 0;
};

/// Everything needed to rebuild an embedder bit-for-bit.
struct EmbedderRecipe {
  EmbedderKind kind = EmbedderKind::DenseGaussian;
  std::size_t n = 0;        // input dimension
  std::size_t m = 0;        // total code length
  std::size_t nprime = 0;   // reduced dimension (accelerated, median)
  std::size_t blocks = 1;   // B (median)
  std::size_t s = 0;        // SJLT column sparsity
  RowMode rows = RowMode::FirstM;
  std::vector<std::size_t> explicit_rows;  // 1-based, RowMode::Explicit only
  JlVariant variant = JlVariant::Fjlt;
  StructureMode block_shape = StructureMode::Circulant;
  SeedSpec seed;

  std::size_t mprime() const { return blocks == 0 ? 0 : m / blocks; }
  bool operator==(const EmbedderRecipe&) const = default;
};

class BinaryEmbedder;
BinaryEmbedder build_embedder(const EmbedderRecipe& recipe);

class BinaryEmbedder {
 public:
  EmbedderKind kind() const noexcept { return recipe_.kind; }
  const EmbedderRecipe& recipe() const noexcept { return recipe_; }
  std::size_t input_dim() const noexcept { return recipe_.n; }
  std::size_t code_length() const noexcept { return recipe_.m; }
  std::size_t block_count() const noexcept { return recipe_.kind == EmbedderKind::MedianFast ? recipe_.blocks : 1; }
  OutputDistance output_distance() const noexcept {
    return recipe_.kind == EmbedderKind::MedianFast ? OutputDistance::MedianBlock : OutputDistance::Hamming;
  }

  const std::optional<JlTransform>& preconditioner() const noexcept { return pre_; }
  const std::optional<DenseMatrix>& gaussian_stage() const noexcept { return gauss_; }
  const std::vector<SignBlock>& sign_blocks() const noexcept { return blocks_; }

  /// Phi x, or x itself when there is no preconditioner.
  RealVector precondition(std::span<const double> x) const {
    require_same_size(x.size(), recipe_.n, "embed");
    if (pre_) return pre_->apply(x);
    return RealVector(x.begin(), x.end());
  }

  /// Pre-sign values of the sign stage applied to an already preconditioned vector.
  RealVector sign_stage(std::span<const double> y) const {
    if (gauss_) return gauss_->apply(y);
    RealVector out;
    out.reserve(recipe_.m);
    for (const auto& b : blocks_) {
      const RealVector part = b.apply(y);
      out.insert(out.end(), part.begin(), part.end());
    }
    return out;
  }

  RealVector project(std::span<const double> x) const { return sign_stage(precondition(x)); }

  BitCode embed(std::span<const double> x) const { return BitCode::from_values(project(x), block_count()); }

  /// Codes of two inputs; circulant stages share one complex transform.
  std::pair<BitCode, BitCode> embed_pair(std::span<const double> x, std::span<const double> y) const {
    const RealVector px = precondition(x);
    const RealVector py = precondition(y);
    if (gauss_) {
      return {BitCode::from_values(gauss_->apply(px), block_count()),
              BitCode::from_values(gauss_->apply(py), block_count())};
    }
    RealVector vx, vy;
    vx.reserve(recipe_.m);
    vy.reserve(recipe_.m);
    for (const auto& b : blocks_) {
      auto [a, c] = b.apply_pair(px, py);
      vx.insert(vx.end(), a.begin(), a.end());
      vy.insert(vy.end(), c.begin(), c.end());
    }
    return {BitCode::from_values(vx, block_count()), BitCode::from_values(vy, block_count())};
  }

  /// The declared output distance.
  double distance(const BitCode& a, const BitCode& b) const {
    if (output_distance() == OutputDistance::MedianBlock) return median_block(a, b, recipe_.blocks);
    return hamming(a, b);
  }

 private:
  friend BinaryEmbedder build_embedder(const EmbedderRecipe& recipe);

  EmbedderRecipe recipe_;
  std::optional<JlTransform> pre_;
  std::optional<DenseMatrix> gauss_;
  std::vector<SignBlock> blocks_;
};

namespace detail {

inline IndexSet select_rows(const EmbedderRecipe& r, std::size_t dim, std::size_t count, SeedSpec seed) {
  switch (r.rows) {
    case RowMode::FirstM: return IndexSet::first(dim, count);
    case RowMode::Dyadic: return dyadic_set(dim, count);
    case RowMode::Uniform: return uniform_subset(seed, dim, count);
    case RowMode::Explicit: {
      if (r.explicit_rows.size() != count) throw DomainError("explicit row set size does not match m");
      return IndexSet::from_one_based(r.explicit_rows, dim);
    }
  }
  throw DomainError("unknown row mode");
}

inline SignBlock make_block(const EmbedderRecipe& r, std::size_t dim, std::size_t count, bool with_signs,
                            SeedSpec seed) {
  const std::size_t gen_len = r.block_shape == StructureMode::Circulant ? dim : 2 * dim - 1;
  RealVector g = gaussian_vector(seed.fork(1), gen_len);
  std::optional<RealVector> eps;
  if (with_signs) eps = rademacher_vector(seed.fork(2), dim);
  return SignBlock(std::move(g), std::move(eps), select_rows(r, dim, count, seed.fork(3)), r.block_shape);
}

inline JlTransform make_preconditioner(const EmbedderRecipe& r) {
  switch (r.variant) {
    case JlVariant::Fjlt: return build_fjlt(r.seed.fork(1), r.n, r.nprime);
    case JlVariant::Sjlt: return build_sjlt(r.seed.fork(1), r.n, r.nprime, r.s);
    case JlVariant::DenseGaussian: break;
  }
  throw DomainError("preconditioner variant must be fjlt or sjlt");
}

}  // namespace detail

inline BinaryEmbedder build_embedder(const EmbedderRecipe& recipe) {
  const auto& r = recipe;
  if (r.n == 0 || r.m == 0) throw DimensionError("embedder: n and m must be >= 1");
  BinaryEmbedder e;
  e.recipe_ = r;
  switch (r.kind) {
    case EmbedderKind::DenseGaussian:
      e.gauss_ = gaussian_matrix(r.seed.fork(2), r.m, r.n);
      break;
    case EmbedderKind::AcceleratedGaussian:
      e.pre_ = detail::make_preconditioner(r);
      e.gauss_ = gaussian_matrix(r.seed.fork(2), r.m, r.nprime);
      break;
    case EmbedderKind::SubsampledCirculant:
    case EmbedderKind::SignedCirculant: {
      if (r.m > r.n) throw DomainError("circulant embedder: m exceeds n");
      const bool signs = r.kind == EmbedderKind::SignedCirculant;
      if (signs && r.rows == RowMode::Dyadic) throw DomainError("signed circulant embedder: rows must be first_m or uniform");
      e.blocks_.push_back(detail::make_block(r, r.n, r.m, signs, r.seed.fork(100)));
      break;
    }
    case EmbedderKind::MedianFast: {
      if (r.blocks == 0 || r.m % r.blocks != 0) {
        throw DomainError("median embedder: m=" + std::to_string(r.m) + " is not a multiple of B=" + std::to_string(r.blocks));
      }
      const std::size_t mprime = r.m / r.blocks;
      if (mprime > r.nprime) throw DomainError("median embedder: m' exceeds n'");
      e.pre_ = detail::make_preconditioner(r);
      EmbedderRecipe block_recipe = r;
      block_recipe.rows = RowMode::Uniform;
      for (std::size_t s = 0; s < r.blocks; ++s) {
        e.blocks_.push_back(detail::make_block(block_recipe, r.nprime, mprime, true, r.seed.fork(100 + s)));
      }
      break;
    }
  }
  return e;
}

inline BinaryEmbedder build_dense_embedder(SeedSpec seed, std::size_t n, std::size_t m) {
  EmbedderRecipe r;
  r.kind = EmbedderKind::DenseGaussian;
  r.n = n;
  r.m = m;
  r.seed = seed;
  return build_embedder(r);
}

/// A = G Phi; s is ignored for the FJLT variant.
inline BinaryEmbedder build_accelerated_embedder(SeedSpec seed, std::size_t n, std::size_t m, JlVariant variant,
                                                 std::size_t nprime, std::size_t s = 0) {
  EmbedderRecipe r;
  r.kind = EmbedderKind::AcceleratedGaussian;
  r.n = n;
  r.m = m;
  r.nprime = nprime;
  r.variant = variant;
  r.s = variant == JlVariant::Sjlt ? s : 0;
  r.seed = seed;
  return build_embedder(r);
}

inline BinaryEmbedder build_subsampled_circulant_embedder(SeedSpec seed, std::size_t n, RowMode rows, std::size_t m,
                                                          std::vector<std::size_t> explicit_rows = {}) {
  EmbedderRecipe r;
  r.kind = EmbedderKind::SubsampledCirculant;
  r.n = n;
  r.m = m;
  r.rows = rows;
  r.explicit_rows = std::move(explicit_rows);
  r.seed = seed;
  return build_embedder(r);
}

inline BinaryEmbedder build_signed_circulant_embedder(SeedSpec seed, std::size_t n, RowMode rows, std::size_t m,
                                                      StructureMode shape = StructureMode::Circulant) {
  EmbedderRecipe r;
  r.kind = EmbedderKind::SignedCirculant;
  r.n = n;
  r.m = m;
  r.rows = rows;
  r.block_shape = shape;
  r.seed = seed;
  return build_embedder(r);
}

inline BinaryEmbedder build_median_fast_embedder(SeedSpec seed, std::size_t n, std::size_t nprime, std::size_t blocks,
                                                 std::size_t mprime, JlVariant variant, std::size_t s = 0,
                                                 StructureMode shape = StructureMode::Circulant) {
  EmbedderRecipe r;
  r.kind = EmbedderKind::MedianFast;
  r.n = n;
  r.m = blocks * mprime;
  r.nprime = nprime;
  r.blocks = blocks;
  r.variant = variant;
  r.s = variant == JlVariant::Sjlt ? s : 0;
  r.rows = RowMode::Uniform;
  r.block_shape = shape;
  r.seed = seed;
  return build_embedder(r);
}

}  // namespace fastbin
