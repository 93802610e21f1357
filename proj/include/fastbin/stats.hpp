#pragma once

// Monte Carlo and quadrature tools for the distributional properties of sign
// embeddings: moments of the embedded distance, covariances of the per-row
// disagreement indicators X_i = 1{sgn<a_i,p> != sgn<a_i,q>}, the two-flip
// probability f(a, b), variance curves and delta-embedding checks.
//
// Every estimate carries a standard error. Trial t of an experiment seeded
// with SeedSpec{master, e} draws from stream (e << 40) | t, and samples are
// reduced in trial order, so results are reproducible bit for bit.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fastbin/bitcode.hpp"
#include "fastbin/core/transforms.hpp"
#include "fastbin/core/types.hpp"
#include "fastbin/embedding.hpp"
#include "fastbin/metrics.hpp"
#include "fastbin/random.hpp"

namespace fastbin {

struct MomentEstimate {
  double mean = 0.0;
  double variance = 0.0;            // unbiased sample variance
  double std_error_mean = 0.0;
  double std_error_variance = 0.0;  // sqrt((m4 - s^4) / T)
  std::size_t trials = 0;
  SeedSpec seed;
};

struct CovarianceEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
  double bound_rhs = 0.0;
};

namespace detail {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline SeedSpec experiment_trial(SeedSpec seed, std::size_t t) { return trial_seed(seed.master, seed.stream, t); }

inline void require_trials(std::size_t trials, const char* what) {
  if (trials < 2) throw DomainError(std::string(what) + ": need at least 2 trials");
}

}  // namespace detail

inline MomentEstimate summarize(std::span<const double> samples, SeedSpec seed = {}) {
  detail::require_trials(samples.size(), "summarize");
  const double T = static_cast<double>(samples.size());
  detail::CompensatedSum s1;
  for (double v : samples) s1.add(v);
  const double mean = s1.value() / T;
  detail::CompensatedSum s2, s4;
  for (double v : samples) {
    const double d = v - mean;
    s2.add(d * d);
    s4.add(d * d * d * d);
  }
  MomentEstimate est;
  est.mean = mean;
  est.variance = s2.value() / (T - 1.0);
  est.std_error_mean = std::sqrt(est.variance / T);
  const double m4 = s4.value() / T;
  const double s_sq = est.variance;
  est.std_error_variance = std::sqrt(std::max(0.0, m4 - s_sq * s_sq) / T);
  est.trials = samples.size();
  est.seed = seed;
  return est;
}

/// Moments of a Bernoulli sample given its success count.
inline MomentEstimate summarize_bernoulli(std::size_t successes, std::size_t trials, SeedSpec seed = {}) {
  detail::require_trials(trials, "summarize_bernoulli");
  const double T = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / T;
  MomentEstimate est;
  est.mean = p;
  est.variance = p * (1.0 - p) * T / (T - 1.0);
  est.std_error_mean = std::sqrt(est.variance / T);
  const double m4 = p * (1.0 - p) * ((1.0 - p) * (1.0 - p) * (1.0 - p) + p * p * p);
  est.std_error_variance = std::sqrt(std::max(0.0, m4 - est.variance * est.variance) / T);
  est.trials = trials;
  est.seed = seed;
  return est;
}

/// Sample covariance of two indicators from their joint counts, with the
/// standard error of the mean of (X - X̄)(Y - Ȳ).
inline std::pair<double, double> indicator_covariance(std::size_t both, std::size_t first, std::size_t second,
                                                      std::size_t trials) {
  const double T = static_cast<double>(trials);
  const double p1 = static_cast<double>(first) / T;
  const double p2 = static_cast<double>(second) / T;
  const double c11 = static_cast<double>(both);
  const double c10 = static_cast<double>(first - both);
  const double c01 = static_cast<double>(second - both);
  const double c00 = T - c11 - c10 - c01;
  const double u11 = (1 - p1) * (1 - p2), u10 = -(1 - p1) * p2, u01 = -p1 * (1 - p2), u00 = p1 * p2;
  const double total = c11 * u11 + c10 * u10 + c01 * u01 + c00 * u00;
  const double mean_u = total / T;
  const auto sq = [&](double u) { return (u - mean_u) * (u - mean_u); };
  const double var_u = (c11 * sq(u11) + c10 * sq(u10) + c01 * sq(u01) + c00 * sq(u00)) / (T - 1.0);
  return {total / (T - 1.0), std::sqrt(var_u / T)};
}

using EmbedderFactory = std::function<BinaryEmbedder(SeedSpec)>;

/// Per-pair samples of d(f(p), f(q)) over independent embedders. Each
/// trial's embedder is shared by all pairs.
inline std::vector<RealVector> sample_distances(const EmbedderFactory& factory,
                                                std::span<const std::pair<RealVector, RealVector>> pairs,
                                                std::size_t trials, SeedSpec seed) {
  detail::require_trials(trials, "estimate_moments");
  for (const auto& [p, q] : pairs) {
    if (norm2(p) == 0.0 || norm2(q) == 0.0) throw DomainError("estimate_moments: zero input vector");
  }
  std::vector<RealVector> samples(pairs.size(), RealVector(trials));
  for (std::size_t t = 0; t < trials; ++t) {
    const BinaryEmbedder e = factory(detail::experiment_trial(seed, t));
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto [a, b] = e.embed_pair(pairs[k].first, pairs[k].second);
      samples[k][t] = e.distance(a, b);
    }
  }
  return samples;
}

inline std::vector<MomentEstimate> estimate_moments_batch(const EmbedderFactory& factory,
                                                          std::span<const std::pair<RealVector, RealVector>> pairs,
                                                          std::size_t trials, SeedSpec seed) {
  const auto samples = sample_distances(factory, pairs, trials, seed);
  std::vector<MomentEstimate> out;
  out.reserve(pairs.size());
  for (const auto& s : samples) out.push_back(summarize(s, seed));
  return out;
}

inline MomentEstimate estimate_moments(const EmbedderFactory& factory, std::span<const double> p,
                                       std::span<const double> q, std::size_t trials, SeedSpec seed) {
  const std::pair<RealVector, RealVector> pair{RealVector(p.begin(), p.end()), RealVector(q.begin(), q.end())};
  return estimate_moments_batch(factory, std::span(&pair, 1), trials, seed).front();
}

/// Cov(X_k, X_l) for all row pairs of a single-block embedder (m rows).
struct RowCovariance {
  std::size_t rows = 0;
  std::size_t trials = 0;
  std::vector<double> value;      // rows x rows, row-major
  std::vector<double> std_error;  // rows x rows
  std::vector<double> mean;       // E X_k

  double at(std::size_t k, std::size_t l) const { return value[k * rows + l]; }
  double se(std::size_t k, std::size_t l) const { return std_error[k * rows + l]; }
};

inline RowCovariance estimate_row_covariance(const EmbedderFactory& factory, std::span<const double> p,
                                             std::span<const double> q, std::size_t trials, SeedSpec seed) {
  detail::require_trials(trials, "estimate_row_covariance");
  std::size_t m = 0;
  std::vector<std::size_t> single, joint;
  for (std::size_t t = 0; t < trials; ++t) {
    const BinaryEmbedder e = factory(detail::experiment_trial(seed, t));
    if (t == 0) {
      m = e.code_length();
      single.assign(m, 0);
      joint.assign(m * m, 0);
    }
    const auto [a, b] = e.embed_pair(p, q);
    require_same_size(a.size(), m, "estimate_row_covariance");
    std::vector<std::size_t> on;
    for (std::size_t k = 0; k < m; ++k) {
      if (a.sign(k) != b.sign(k)) on.push_back(k);
    }
    for (std::size_t k : on) {
      ++single[k];
      for (std::size_t l : on) ++joint[k * m + l];
    }
  }
  RowCovariance rc;
  rc.rows = m;
  rc.trials = trials;
  rc.value.resize(m * m);
  rc.std_error.resize(m * m);
  rc.mean.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    rc.mean[k] = static_cast<double>(single[k]) / static_cast<double>(trials);
    for (std::size_t l = 0; l < m; ++l) {
      const auto [v, se] = indicator_covariance(joint[k * m + l], single[k], single[l], trials);
      rc.value[k * m + l] = v;
      rc.std_error[k * m + l] = se;
    }
  }
  return rc;
}

/// 8 max{|<x1,y1>|, |<x1,y2>|, |<x2,y1>|, |<x2,y2>|}.
inline double cov_bound_rhs(std::span<const double> x1, std::span<const double> x2, std::span<const double> y1,
                            std::span<const double> y2) {
  const double m = std::max({std::abs(dot(x1, y1)), std::abs(dot(x1, y2)), std::abs(dot(x2, y1)), std::abs(dot(x2, y2))});
  return 8.0 * m;
}

/// Cov(1{Z(x1) != Z(x2)}, 1{Z(y1) != Z(y2)}) with Z(x) = sgn<g, x>, g ~ N(0, I_n).
inline CovarianceEstimate estimate_indicator_covariance(std::span<const double> x1, std::span<const double> x2,
                                                        std::span<const double> y1, std::span<const double> y2,
                                                        std::size_t trials, SeedSpec seed) {
  detail::require_trials(trials, "estimate_indicator_covariance");
  const std::size_t n = x1.size();
  for (auto v : {x2, y1, y2}) require_same_size(v.size(), n, "estimate_indicator_covariance");
  for (auto v : {x1, x2, y1, y2}) {
    if (std::abs(norm2(v) - 1.0) > 1e-9) throw DomainError("estimate_indicator_covariance: inputs must be unit vectors");
  }
  Rng rng(seed);
  RealVector g(n);
  std::size_t both = 0, cx = 0, cy = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    for (auto& v : g) v = rng.normal();
    const bool zx1 = dot(g, x1) >= 0.0, zx2 = dot(g, x2) >= 0.0;
    const bool zy1 = dot(g, y1) >= 0.0, zy2 = dot(g, y2) >= 0.0;
    const bool X = zx1 != zx2;
    const bool Y = zy1 != zy2;
    cx += X;
    cy += Y;
    both += X && Y;
  }
  CovarianceEstimate est;
  std::tie(est.value, est.std_error) = indicator_covariance(both, cx, cy, trials);
  est.trials = trials;
  est.bound_rhs = cov_bound_rhs(x1, x2, y1, y2);
  return est;
}

/// Monte Carlo estimate of f(a, b) = P(sgn g1 != sgn(g1 + a g3), sgn g2 != sgn(g2 + b g3)).
inline MomentEstimate f_ab_montecarlo(double a, double b, std::size_t trials, SeedSpec seed) {
  detail::require_trials(trials, "f_ab_montecarlo");
  Rng rng(seed);
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const double g1 = rng.normal(), g2 = rng.normal(), g3 = rng.normal();
    const bool first = (g1 >= 0.0) != (g1 + a * g3 >= 0.0);
    const bool second = (g2 >= 0.0) != (g2 + b * g3 >= 0.0);
    hits += first && second;
  }
  return summarize_bernoulli(hits, trials, seed);
}

/// f(a, a) as the integral of its derivative (1/pi) t / ((t^2 + 1) sqrt(2t^2 + 1)) over [0, a].
inline double f_aa_quadrature(double a) {
  if (!(a >= 0.0)) throw DomainError("f_aa_quadrature: a must be >= 0");
  if (a == 0.0) return 0.0;
  const auto integrand = [](double t) {
    return t / (std::numbers::pi * (t * t + 1.0) * std::sqrt(2.0 * t * t + 1.0));
  };
  using Quad = boost::math::quadrature::gauss_kronrod<double, 15>;
  // Geometric panels keep each piece smooth on the scale of its own width.
  double total = 0.0;
  double lo = 0.0;
  double hi = std::min(a, 1.0);
  while (lo < a) {
    total += Quad::integrate(integrand, lo, hi, 15, 1e-14);
    lo = hi;
    hi = std::min(a, hi * 2.0);
  }
  return total;
}

/// 8 (‖p ⊙ T^k p‖ + ‖p ⊙ T^k q‖ + ‖q ⊙ T^k p‖ + ‖q ⊙ T^k q‖), valid for
/// k != 0 and k != n/2 modulo n.
inline double radcov_bound_rhs(std::span<const double> p, std::span<const double> q, std::int64_t k) {
  require_same_size(p.size(), q.size(), "radcov_bound_rhs");
  require_nonempty(p, "radcov_bound_rhs");
  const std::size_t n = p.size();
  const std::size_t kk = mod_index(k, n);
  if (kk == 0) throw DomainError("radcov_bound_rhs: shift must be nonzero modulo n");
  if (n % 2 == 0 && kk == n / 2) throw DomainError("radcov_bound_rhs: shift n/2 is excluded");
  const RealVector tp = shift_apply(p, k);
  const RealVector tq = shift_apply(q, k);
  const auto hadamard_norm = [&](std::span<const double> u, std::span<const double> v) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += u[i] * u[i] * v[i] * v[i];
    return std::sqrt(acc);
  };
  return 8.0 * (hadamard_norm(p, tp) + hadamard_norm(p, tq) + hadamard_norm(q, tp) + hadamard_norm(q, tq));
}

/// Least-squares slope of log(y) against log(x).
inline double fit_loglog_slope(std::span<const double> xs, std::span<const double> ys) {
  require_same_size(xs.size(), ys.size(), "fit_loglog_slope");
  if (xs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

/// Fits C on the first point, C = values[0] / shape[0], then checks
/// values[i] <= slack * C * shape[i] on every later point.
struct ConstantFit {
  double constant = 0.0;
  std::vector<bool> holds;
  bool all_hold = true;
};

inline ConstantFit fit_constant_bound(std::span<const double> values, std::span<const double> shape, double slack) {
  require_same_size(values.size(), shape.size(), "fit_constant_bound");
  if (values.empty()) throw DomainError("fit_constant_bound: empty grid");
  ConstantFit fit;
  fit.constant = values[0] / shape[0];
  fit.holds.assign(values.size(), true);
  for (std::size_t i = 1; i < values.size(); ++i) {
    fit.holds[i] = values[i] <= slack * fit.constant * shape[i];
    fit.all_hold = fit.all_hold && fit.holds[i];
  }
  return fit;
}

struct GridPoint {
  std::size_t n = 0;
  std::size_t m = 0;
};

using EmbedderFamily = std::function<BinaryEmbedder(std::size_t n, std::size_t m, SeedSpec)>;
using PairSource = std::function<std::pair<RealVector, RealVector>(std::size_t n)>;

struct VarianceRow {
  GridPoint point;
  MomentEstimate estimate;
};

struct VarianceCurve {
  std::vector<VarianceRow> rows;
  double slope = std::numeric_limits<double>::quiet_NaN();  // over rows with m <= sqrt(n)
};

/// One MomentEstimate per grid point; grid point i uses experiment stream
/// seed.stream + i and the pair pairs(n).
inline VarianceCurve variance_curve(const EmbedderFamily& family, std::span<const GridPoint> grid,
                                    const PairSource& pairs, std::size_t trials, SeedSpec seed) {
  if (grid.empty()) throw DomainError("variance_curve: empty grid");
  VarianceCurve curve;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const GridPoint gp = grid[i];
    const auto [p, q] = pairs(gp.n);
    const EmbedderFactory factory = [&](SeedSpec s) { return family(gp.n, gp.m, s); };
    const SeedSpec point_seed{seed.master, seed.stream + i};
    curve.rows.push_back({gp, estimate_moments(factory, p, q, trials, point_seed)});
    if (static_cast<double>(gp.m) * static_cast<double>(gp.m) <= static_cast<double>(gp.n)) {
      xs.push_back(static_cast<double>(gp.m));
      ys.push_back(curve.rows.back().estimate.variance);
    }
  }
  curve.slope = fit_loglog_slope(xs, ys);
  return curve;
}

struct DeltaCheck {
  double max_deviation = 0.0;
  bool pass = false;
  std::size_t worst_i = 0;
  std::size_t worst_j = 0;
};

/// max over pairs of |d(f(p), f(q)) - d_S(p, q)| using the embedder's declared distance.
inline DeltaCheck check_delta_embedding(const BinaryEmbedder& e, const PointSet& points, double delta) {
  if (points.size() < 2) throw DomainError("check_delta_embedding: need at least two points");
  std::vector<BitCode> codes;
  codes.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) codes.push_back(e.embed(points.row(i)));
  DeltaCheck res;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double dev = std::abs(e.distance(codes[i], codes[j]) - geodesic(points.row(i), points.row(j)));
      if (dev > res.max_deviation) {
        res.max_deviation = dev;
        res.worst_i = i;
        res.worst_j = j;
      }
    }
  }
  res.pass = res.max_deviation <= delta;
  return res;
}

// --- Sparse inputs against huge circulant dimensions -----------------------

/// s-sparse vector of a (possibly enormous) ambient dimension.
struct SparseVector {
  std::uint64_t dim = 0;
  std::vector<std::uint64_t> index;
  RealVector value;
};

/// Uniform random support of size s with Gaussian values, normalized.
inline SparseVector random_sparse_unit(Rng& rng, std::uint64_t dim, std::size_t s) {
  if (s == 0 || s > dim) throw DomainError("random_sparse_unit: need 1 <= s <= dim");
  SparseVector v;
  v.dim = dim;
  while (v.index.size() < s) {
    const std::uint64_t idx = std::uniform_int_distribution<std::uint64_t>(0, dim - 1)(rng);
    if (std::find(v.index.begin(), v.index.end(), idx) == v.index.end()) v.index.push_back(idx);
  }
  std::sort(v.index.begin(), v.index.end());
  v.value = normalized(gaussian_vector(rng, s));
  return v;
}

/// Entries of an i.i.d. N(0, 1) vector drawn on first access. Only the
/// coordinates that are touched are ever materialized.
class LazyGaussianVector {
 public:
  explicit LazyGaussianVector(SeedSpec seed) : rng_(seed) {}
  double operator()(std::uint64_t idx) {
    auto [it, inserted] = cache_.try_emplace(idx, 0.0);
    if (inserted) it->second = rng_.normal();
    return it->second;
  }

 private:
  Rng rng_;
  std::unordered_map<std::uint64_t, double> cache_;
};

/// (C_g x)_i for the requested 0-based rows, touching g only where the row
/// formula C_g[i][l] = g[(l - i - 1) mod n] meets supp(x).
template <class Generator>
RealVector sparse_circulant_rows(const SparseVector& x, std::span<const std::uint64_t> rows, Generator&& g) {
  const std::uint64_t n = x.dim;
  RealVector out(rows.size(), 0.0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::uint64_t i = rows[r];
    double acc = 0.0;
    for (std::size_t k = 0; k < x.index.size(); ++k) {
      const std::uint64_t l = x.index[k];
      // (l - i - 1) mod n without signed overflow.
      const std::uint64_t shift = (i + 1) % n;
      const std::uint64_t idx = l >= shift ? l - shift : l + n - shift;
      acc += g(idx) * x.value[k];
    }
    out[r] = acc;
  }
  return out;
}

/// 0-based dyadic rows {2^i - 1 : i < m}; requires 2^{m-1} <= n.
inline std::vector<std::uint64_t> dyadic_rows(std::uint64_t n, std::size_t m) {
  if (m == 0 || m > 64 || (std::uint64_t{1} << (m - 1)) > n) throw DomainError("dyadic_rows: 2^(m-1) exceeds n");
  std::vector<std::uint64_t> rows(m);
  for (std::size_t i = 0; i < m; ++i) rows[i] = (std::uint64_t{1} << i) - 1;
  return rows;
}

/// Moments of d_H for A = R_I C_g on sparse inputs, I the first m dyadic
/// integers, with g drawn lazily so that n may far exceed memory.
inline MomentEstimate estimate_dyadic_sparse_moments(const SparseVector& p, const SparseVector& q, std::size_t m,
                                                     std::size_t trials, SeedSpec seed) {
  detail::require_trials(trials, "estimate_dyadic_sparse_moments");
  if (p.dim != q.dim) throw DimensionError("estimate_dyadic_sparse_moments: dimension mismatch");
  const auto rows = dyadic_rows(p.dim, m);
  RealVector samples(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    LazyGaussianVector g(detail::experiment_trial(seed, t));
    const BitCode a = BitCode::from_values(sparse_circulant_rows(p, rows, g));
    const BitCode b = BitCode::from_values(sparse_circulant_rows(q, rows, g));
    samples[t] = hamming(a, b);
  }
  return summarize(samples, seed);
}

}  // namespace fastbin
