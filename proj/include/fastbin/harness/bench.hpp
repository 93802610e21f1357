#pragma once

// Wall-clock benchmarks of per-point embedding time. Sequential only: each
// measurement warms up, then reports the median over repetitions, where one
// repetition runs enough calls to last at least min_rep_seconds.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "fastbin/embedding.hpp"
#include "fastbin/harness/csv.hpp"
#include "fastbin/params.hpp"
#include "fastbin/random.hpp"

namespace fastbin::harness {

struct BenchOptions {
  std::size_t reps = 9;
  std::size_t warmup = 2;
  double min_rep_seconds = 0.1;
  std::uint64_t master = 0xbe7c;
  std::vector<std::size_t> grid{std::size_t{1} << 12, std::size_t{1} << 14, std::size_t{1} << 16};
  // Sizes for the circulant stage alone, which is cheap enough to go higher.
  std::vector<std::size_t> stage_grid{std::size_t{1} << 12, std::size_t{1} << 14, std::size_t{1} << 16,
                                      std::size_t{1} << 18};
  ProblemSize problem{0, 100, 0.25, 0.1};  // n is taken from the grid
};

/// Median seconds per call of f.
inline double time_per_call(const std::function<void()>& f, const BenchOptions& o) {
  using clock = std::chrono::steady_clock;
  for (std::size_t i = 0; i < o.warmup; ++i) f();
  std::size_t iters = 1;
  for (;;) {
    const auto t0 = clock::now();
    for (std::size_t i = 0; i < iters; ++i) f();
    const double dt = std::chrono::duration<double>(clock::now() - t0).count();
    if (dt >= o.min_rep_seconds || iters >= (std::size_t{1} << 24)) break;
    iters *= 2;
  }
  std::vector<double> per_call;
  for (std::size_t r = 0; r < std::max<std::size_t>(o.reps, 5); ++r) {
    const auto t0 = clock::now();
    for (std::size_t i = 0; i < iters; ++i) f();
    per_call.push_back(std::chrono::duration<double>(clock::now() - t0).count() / static_cast<double>(iters));
  }
  std::nth_element(per_call.begin(), per_call.begin() + static_cast<std::ptrdiff_t>(per_call.size() / 2),
                   per_call.end());
  return per_call[per_call.size() / 2];
}

struct BenchRow {
  std::string name;
  std::size_t n = 0;
  std::size_t nnz = 0;
  std::size_t m = 0, nprime = 0, B = 0, s = 0;
  double seconds = 0.0;
  double ratio = kNa;          // against the previous grid point, or dense/sparse
  double bound = kNa;
  std::string check;           // empty when the row asserts nothing
  bool pass = true;
};

inline const char* kBenchHeader = "name,n,nnz,m,nprime,B,s,median_us,ratio,bound,check,pass";

inline void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << kBenchHeader << '\n';
  for (const auto& r : rows) {
    out << r.name << ',' << r.n << ',' << r.nnz << ',' << r.m << ',' << r.nprime << ',' << r.B << ',' << r.s << ','
        << format_number(r.seconds * 1e6) << ',' << format_number(r.ratio) << ',' << format_number(r.bound) << ','
        << csv_field(r.check) << ',' << (r.pass ? "true" : "false") << '\n';
  }
}

namespace detail {

inline RealVector bench_input(Rng& rng, std::size_t n, std::size_t nnz) {
  RealVector x(n, 0.0);
  if (nnz >= n) return gaussian_vector(rng, n);
  const IndexSet support = uniform_subset(rng, n, nnz);
  for (std::size_t i : support.indices()) x[i] = rng.normal();
  return x;
}

inline BinaryEmbedder bench_embedder(const std::string& name, std::size_t n, const BenchOptions& o, SeedSpec seed,
                                     ResolvedParams& params) {
  ProblemSize p = o.problem;
  p.n = n;
  const ConstantMultipliers unit{};
  ConstantMultipliers median = unit;
  median.c4 = 1.5;
  if (name == "dense") {
    params = {};
    params.m = dense_bits(p, unit);
    return build_dense_embedder(seed, n, params.m);
  }
  if (name == "accelerated-fjlt" || name == "accelerated-sjlt") {
    const JlVariant v = name == "accelerated-fjlt" ? JlVariant::Fjlt : JlVariant::Sjlt;
    params = resolve_accelerated(v, p, unit);
    return build_accelerated_embedder(seed, n, params.m, v, params.nprime, params.s);
  }
  const JlVariant v = name == "median-fjlt" ? JlVariant::Fjlt : JlVariant::Sjlt;
  params = resolve_median(v, p, median);
  return build_median_fast_embedder(seed, n, params.nprime, params.blocks, params.mprime, v, params.s);
}

}  // namespace detail

/// The benchmark table. Asserted rows:
///   circulant-stage  time(4n)/time(n) <= 8 from n = 2^14 and from n = 2^16
///   accelerated-sjlt dense-input time / sqrt(n)-sparse time >= 2 at n = 2^16
///   dense            time(4n)/time(n) >= 3 on the last step
inline std::vector<BenchRow> run_bench(const BenchOptions& o) {
  std::vector<BenchRow> rows;
  Rng rng(SeedSpec{o.master, 1});

  // Circulant sign stage R_I C_g D_eps with |I| = sqrt(n), timed on its own.
  double prev = 0.0;
  std::size_t prev_n = 0;
  for (std::size_t n : o.stage_grid) {
    const std::size_t m = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
    const BinaryEmbedder e = build_signed_circulant_embedder(SeedSpec{o.master, 2}, n, RowMode::Uniform, m);
    const RealVector x = detail::bench_input(rng, n, n);
    RealVector sink;
    BenchRow r;
    r.name = "circulant-stage";
    r.n = n;
    r.nnz = n;
    r.m = m;
    r.seconds = time_per_call([&] { sink = e.sign_stage(x); }, o);
    if (prev_n != 0 && n == 4 * prev_n) {
      r.ratio = r.seconds / prev;
      if (prev_n == (std::size_t{1} << 14) || prev_n == (std::size_t{1} << 16)) {
        r.bound = 8.0;
        r.check = "time(4n)/time(n)<=8 from n=" + std::to_string(prev_n);
        r.pass = r.ratio <= 8.0;
      }
    }
    prev = r.seconds;
    prev_n = n;
    rows.push_back(r);
  }

  for (const std::string name : {"dense", "accelerated-fjlt", "accelerated-sjlt", "median-fjlt", "median-sjlt"}) {
    prev = 0.0;
    prev_n = 0;
    for (std::size_t n : o.grid) {
      ResolvedParams params;
      const BinaryEmbedder e = detail::bench_embedder(name, n, o, SeedSpec{o.master, 3}, params);
      const RealVector x = detail::bench_input(rng, n, n);
      BitCode sink;
      BenchRow r;
      r.name = name;
      r.n = n;
      r.nnz = n;
      r.m = params.m;
      r.nprime = params.nprime;
      r.B = params.blocks;
      r.s = params.s;
      r.seconds = time_per_call([&] { sink = e.embed(x); }, o);
      if (prev_n != 0 && n == 4 * prev_n) r.ratio = r.seconds / prev;
      if (name == "dense" && n == o.grid.back() && prev_n != 0 && n == 4 * prev_n) {
        r.bound = 3.0;
        r.check = "time(4n)/time(n)>=3";
        r.pass = r.ratio >= 3.0;
      }
      prev = r.seconds;
      prev_n = n;
      rows.push_back(r);
    }
  }

  // Sparse against dense inputs for the SJLT-preconditioned embedding.
  for (const std::string name : {"accelerated-sjlt", "median-sjlt"}) {
    const std::size_t n = o.grid.back();
    const std::size_t nnz = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
    ResolvedParams params;
    const BinaryEmbedder e = detail::bench_embedder(name, n, o, SeedSpec{o.master, 3}, params);
    const RealVector dense_x = detail::bench_input(rng, n, n);
    const RealVector sparse_x = detail::bench_input(rng, n, nnz);
    BitCode sink;
    const double t_dense = time_per_call([&] { sink = e.embed(dense_x); }, o);
    BenchRow r;
    r.name = name;
    r.n = n;
    r.nnz = nnz;
    r.m = params.m;
    r.nprime = params.nprime;
    r.B = params.blocks;
    r.s = params.s;
    r.seconds = time_per_call([&] { sink = e.embed(sparse_x); }, o);
    r.ratio = t_dense / r.seconds;
    if (name == "accelerated-sjlt") {
      r.bound = 2.0;
      r.check = "time(dense)/time(sqrt(n)-sparse)>=2";
      r.pass = r.ratio >= 2.0;
    }
    rows.push_back(r);
  }
  return rows;
}

}  // namespace fastbin::harness
