#pragma once

// Executable versions of the ≳ conditions on (m, n', s, B, m'). Every
// condition gets an explicit multiplier; L = log(N / eta) throughout.
//
//   c1:  m  = c1 δ^-2 L                (accelerated)   m' = c1 δ^-2 (median)
//   c2:  n' = c2 δ^-2 L (log^3(log L) log n + log 1/η)  (FJLT)
//        n' = c2 δ^-2 L                                  (SJLT)
//        n' >= c2 δ^-4                                   (median, both)
//   c3:  s  = c3 δ^-1 L
//   c4:  B  = c4 L

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <string>

#include "fastbin/core/types.hpp"
#include "fastbin/embedding.hpp"
#include "fastbin/jl.hpp"

namespace fastbin {

struct ConstantMultipliers {
  double c1 = 1.0;
  double c2 = 1.0;
  double c3 = 1.0;
  double c4 = 1.0;
};

struct ProblemSize {
  std::size_t n = 0;    // ambient dimension
  std::size_t N = 0;    // number of points
  double delta = 0.0;
  double eta = 0.0;
};

struct ResolvedParams {
  std::size_t m = 0;
  std::size_t nprime = 0;
  std::size_t blocks = 1;
  std::size_t mprime = 0;
  std::size_t s = 0;
};

namespace detail {

inline std::size_t ceil_size(double v) { return static_cast<std::size_t>(std::max(1.0, std::ceil(v - 1e-9))); }

inline void check_problem(const ProblemSize& p) {
  if (p.n == 0) throw DimensionError("parameters: n must be >= 1");
  if (p.N < 1) throw DomainError("parameters: N must be >= 1");
  if (!(p.delta > 0.0 && p.delta < 1.0)) throw DomainError("parameters: delta must lie in (0, 1)");
  if (!(p.eta > 0.0 && p.eta < 1.0)) throw DomainError("parameters: eta must lie in (0, 1)");
}

inline double log_term(const ProblemSize& p) { return std::log(static_cast<double>(p.N) / p.eta); }

/// JL target dimension; the FJLT value is capped at the padded dimension.
inline std::size_t jl_dimension(JlVariant v, const ProblemSize& p, const ConstantMultipliers& c) {
  const double L = log_term(p);
  const double d2 = 1.0 / (p.delta * p.delta);
  if (v == JlVariant::Fjlt) {
    const double ll = std::log(std::max(L, std::exp(1.0)));
    const double raw = c.c2 * d2 * L * (ll * ll * ll * std::log(static_cast<double>(std::max<std::size_t>(p.n, 2))) +
                                        std::log(1.0 / p.eta));
    return std::min(ceil_size(raw), std::bit_ceil(p.n));
  }
  return ceil_size(c.c2 * d2 * L);
}

inline std::size_t sjlt_sparsity(const ProblemSize& p, const ConstantMultipliers& c, std::size_t nprime) {
  return std::min(ceil_size(c.c3 * log_term(p) / p.delta), nprime);
}

}  // namespace detail

/// Bits for the dense Gaussian embedding (and the accelerated one).
inline std::size_t dense_bits(const ProblemSize& p, const ConstantMultipliers& c) {
  detail::check_problem(p);
  return detail::ceil_size(c.c1 * detail::log_term(p) / (p.delta * p.delta));
}

inline ResolvedParams resolve_accelerated(JlVariant v, const ProblemSize& p, const ConstantMultipliers& c) {
  detail::check_problem(p);
  if (v == JlVariant::DenseGaussian) throw DomainError("accelerated embedding needs an fjlt or sjlt preconditioner");
  ResolvedParams r;
  r.m = dense_bits(p, c);
  r.nprime = detail::jl_dimension(v, p, c);
  if (v == JlVariant::Sjlt) r.s = detail::sjlt_sparsity(p, c, r.nprime);
  r.mprime = r.m;
  return r;
}

inline ResolvedParams resolve_median(JlVariant v, const ProblemSize& p, const ConstantMultipliers& c) {
  detail::check_problem(p);
  if (v == JlVariant::DenseGaussian) throw DomainError("median embedding needs an fjlt or sjlt preconditioner");
  const double d2 = 1.0 / (p.delta * p.delta);
  ResolvedParams r;
  r.blocks = detail::ceil_size(c.c4 * detail::log_term(p));
  r.mprime = detail::ceil_size(c.c1 * d2);
  std::size_t nprime = std::max({detail::jl_dimension(v, p, c), r.mprime, detail::ceil_size(c.c2 * d2 * d2)});
  if (v == JlVariant::Fjlt) {
    const std::size_t cap = std::bit_ceil(p.n);
    if (r.mprime > cap) throw DomainError("median embedding: m' exceeds the padded dimension");
    nprime = std::min(nprime, cap);
  }
  r.nprime = nprime;
  r.m = r.blocks * r.mprime;
  if (v == JlVariant::Sjlt) r.s = detail::sjlt_sparsity(p, c, r.nprime);
  return r;
}

inline std::ostream& operator<<(std::ostream& os, const ResolvedParams& r) {
  return os << "m=" << r.m << " nprime=" << r.nprime << " B=" << r.blocks << " mprime=" << r.mprime << " s=" << r.s;
}

}  // namespace fastbin
