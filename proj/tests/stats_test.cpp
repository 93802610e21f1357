#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "fastbin/harness/suites.hpp"
#include "test_util.hpp"

namespace {

using namespace fastbin;
using fbtest::Gen;
constexpr double kPi = std::numbers::pi;

// f(a, a) in closed form: (1/pi) (atan(sqrt(2a^2 + 1)) - pi/4).
double f_aa_closed(double a) { return (std::atan(std::sqrt(2 * a * a + 1)) - kPi / 4) / kPi; }

TEST(Summarize, SmallSampleByHand) {
  const RealVector x{1, 2, 3, 4};
  const MomentEstimate e = summarize(x, SeedSpec{1, 2});
  EXPECT_DOUBLE_EQ(e.mean, 2.5);
  EXPECT_DOUBLE_EQ(e.variance, 5.0 / 3.0);
  EXPECT_DOUBLE_EQ(e.std_error_mean, std::sqrt(5.0 / 12.0));
  // m4 = (2 * 1.5^4 + 2 * 0.5^4) / 4 = 2.5625 < s^4, so the plug-in SE clamps to 0.
  EXPECT_EQ(e.std_error_variance, 0.0);
  EXPECT_EQ(e.trials, 4u);
  EXPECT_EQ(e.seed, (SeedSpec{1, 2}));
  EXPECT_THROW(summarize(RealVector{1.0}), DomainError);
}

TEST(Summarize, BernoulliAgreesWithSamples) {
  Gen gen(80);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t T = gen.size(2, 500);
    RealVector x(T);
    std::size_t ones = 0;
    for (auto& v : x) {
      v = gen.normal() > 0.7 ? 1.0 : 0.0;
      ones += v > 0;
    }
    const MomentEstimate a = summarize(x), b = summarize_bernoulli(ones, T);
    EXPECT_NEAR(a.mean, b.mean, 1e-14);
    EXPECT_NEAR(a.variance, b.variance, 1e-14);
    EXPECT_NEAR(a.std_error_mean, b.std_error_mean, 1e-14);
    EXPECT_NEAR(a.std_error_variance, b.std_error_variance, 1e-12);
  }
}

TEST(Summarize, IndicatorCovarianceMatchesDirect) {
  Gen gen(81);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t T = gen.size(3, 400);
    std::vector<int> X(T), Y(T);
    std::size_t both = 0, cx = 0, cy = 0;
    for (std::size_t t = 0; t < T; ++t) {
      const double z = gen.normal();
      X[t] = z > 0.3;
      Y[t] = z + gen.normal() > 0.0;
      cx += X[t];
      cy += Y[t];
      both += X[t] && Y[t];
    }
    const double mx = static_cast<double>(cx) / T, my = static_cast<double>(cy) / T;
    RealVector u(T);
    for (std::size_t t = 0; t < T; ++t) u[t] = (X[t] - mx) * (Y[t] - my);
    const MomentEstimate ue = summarize(u);
    const auto [cov, se] = indicator_covariance(both, cx, cy, T);
    EXPECT_NEAR(cov, ue.mean * T / (T - 1.0), 1e-12);
    EXPECT_NEAR(se, ue.std_error_mean, 1e-12);
  }
}

TEST(Quadrature, MatchesClosedForm) {
  for (double a : {0.0, 1e-4, 0.01, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 7.5, 100.0, 1e4, 1e5}) {
    EXPECT_NEAR(f_aa_quadrature(a), f_aa_closed(a), 1e-10) << a;
  }
  EXPECT_THROW(f_aa_quadrature(-0.1), DomainError);
}

TEST(Quadrature, MonotoneWithDecreasingRatio) {
  double prev = 0.0, prev_ratio = 1.0;
  for (double a = 0.01; a <= 5.0; a *= 1.3) {
    const double f = f_aa_quadrature(a);
    EXPECT_GE(f, prev);
    EXPECT_LT(f / (a * a), prev_ratio);
    EXPECT_LT(f / (a * a), 1.0 / (2 * kPi));
    prev = f;
    prev_ratio = f / (a * a);
  }
  const double ratio = f_aa_quadrature(0.05) / 0.0025 * 2 * kPi;
  EXPECT_GE(ratio, 0.90);
  EXPECT_LE(ratio, 1.00);
  EXPECT_NEAR(f_aa_quadrature(1e4), 0.25, 1e-3);
  EXPECT_NEAR(f_aa_quadrature(1e4), f_aa_quadrature(1e5), 1e-3);
}

TEST(FabMonteCarlo, ZeroAndClosedForm) {
  EXPECT_EQ(f_ab_montecarlo(0.0, 0.7, 1000, SeedSpec{82, 0}).mean, 0.0);
  for (double a : {0.2, 1.0}) {
    const MomentEstimate e = f_ab_montecarlo(a, a, 1000000, SeedSpec{82, 1});
    EXPECT_LE(std::abs(e.mean - f_aa_closed(a)), 3 * e.std_error_mean) << a;
  }
}

TEST(FabMonteCarlo, BoundOnCoarseGrid) {
  std::uint64_t id = 10;
  for (double a : {0.1, 0.5, 1.0}) {
    for (double b : {0.1, 0.5, 1.0}) {
      const MomentEstimate e = f_ab_montecarlo(a, b, 200000, SeedSpec{83, id++});
      EXPECT_LE(e.mean, a * b / (2 * kPi) + 3 * e.std_error_mean) << a << "," << b;
    }
  }
}

TEST(CovBound, Examples) {
  const RealVector e1{1, 0, 0}, e2{0, 1, 0}, e3{0, 0, 1};
  EXPECT_DOUBLE_EQ(cov_bound_rhs(e1, e1, e2, e3), 0.0);
  EXPECT_DOUBLE_EQ(cov_bound_rhs(e1, e2, e1, e3), 8.0);
  const double al = 0.2;
  const RealVector x2{std::cos(al), std::sin(al), 0};
  EXPECT_NEAR(cov_bound_rhs(e1, x2, e2, e3), 8 * std::sin(0.2), 1e-15);
  EXPECT_NEAR(8 * std::sin(0.2), 1.5894, 1e-4);
}

TEST(IndicatorCovariance, DegenerateAndIndependent) {
  const RealVector e1{1, 0, 0, 0}, e2{0, 1, 0, 0}, e3{0, 0, 1, 0}, e4{0, 0, 0, 1};
  const CovarianceEstimate same = estimate_indicator_covariance(e1, e1, e3, e4, 1000, SeedSpec{84, 0});
  EXPECT_EQ(same.value, 0.0);
  const CovarianceEstimate indep = estimate_indicator_covariance(e1, e2, e3, e4, 200000, SeedSpec{84, 1});
  EXPECT_LE(std::abs(indep.value), 3 * indep.std_error);
  EXPECT_EQ(indep.bound_rhs, 0.0);
  EXPECT_THROW(estimate_indicator_covariance(RealVector{2, 0, 0, 0}, e2, e3, e4, 10, SeedSpec{}), DomainError);
}

TEST(IndicatorCovariance, RemarkFamilyExact) {
  const double a = 0.3, s = std::sqrt(1 + a * a);
  const RealVector x1{1, 0, 0}, x2{1 / s, 0, a / s}, y1{0, 1, 0}, y2{0, 1 / s, a / s};
  const CovarianceEstimate e = estimate_indicator_covariance(x1, x2, y1, y2, 1000000, SeedSpec{85, 0});
  // Both indicators flip together exactly when f(a, a) counts; each alone has
  // probability arccos(1/s)/pi.
  const double g = std::acos(1 / s) / kPi;
  const double exact = f_aa_closed(a) - g * g;
  EXPECT_NEAR(harness::remark_covariance(a), exact, 1e-10);
  EXPECT_LE(std::abs(e.value - exact), 3 * e.std_error);
  EXPECT_GT(exact, 0.0);
}

TEST(Radcov, UniformVector) {
  for (std::size_t n : {8u, 16u, 33u}) {
    const RealVector u(n, 1 / std::sqrt(static_cast<double>(n)));
    EXPECT_NEAR(radcov_bound_rhs(u, u, 1), 32 / std::sqrt(static_cast<double>(n)), 1e-12);
  }
}

TEST(Radcov, DisjointTermsVanishAndErrors) {
  // p on even, q on odd coordinates, k = 2: every mixed term is zero.
  const auto [p, q] = harness::alternating_pair(8);
  const double pp = std::sqrt(4 * std::pow(0.5, 4));  // ‖p ⊙ T^2 p‖
  EXPECT_NEAR(radcov_bound_rhs(p, q, 2), 8 * 2 * pp, 1e-12);
  EXPECT_THROW(radcov_bound_rhs(p, q, 0), DomainError);
  EXPECT_THROW(radcov_bound_rhs(p, q, 4), DomainError);
  EXPECT_THROW(radcov_bound_rhs(p, q, -8), DomainError);
  EXPECT_NO_THROW(radcov_bound_rhs(RealVector(5, 0.4), RealVector(5, 0.4), 2));
}

TEST(Radcov, ShiftedProductsSumToOne) {
  Gen gen(86);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = gen.size(2, 40);
    const RealVector p = gen.unit(n), q = gen.unit(n);
    double total = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      const RealVector tq = shift_apply(q, static_cast<std::int64_t>(k));
      for (std::size_t i = 0; i < n; ++i) total += p[i] * p[i] * tq[i] * tq[i];
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(Fits, LogLogSlopeAndConstant) {
  const RealVector xs{4, 16, 64, 256}, ys{2.0 / 4, 2.0 / 16, 2.0 / 64, 2.0 / 256};
  EXPECT_NEAR(fit_loglog_slope(xs, ys), -1.0, 1e-12);
  const RealVector shape{1, 0.5, 0.25}, ok{2, 1.4, 0.74}, bad{2, 1.4, 0.76};
  const ConstantFit f = fit_constant_bound(ok, shape, 1.5);
  EXPECT_DOUBLE_EQ(f.constant, 2.0);
  EXPECT_TRUE(f.all_hold);
  EXPECT_FALSE(fit_constant_bound(bad, shape, 1.5).all_hold);
  EXPECT_THROW(fit_constant_bound(RealVector{}, RealVector{}, 1.5), DomainError);
}

TEST(VarianceCurve, DenseMatchesIndependentRowFormula) {
  const std::vector<GridPoint> grid{{64, 8}, {64, 16}, {64, 32}, {64, 64}};
  Gen gen(87);
  const RealVector p = gen.unit(64), q = gen.unit(64);
  const double d = geodesic(p, q);
  const VarianceCurve c = variance_curve([](std::size_t n, std::size_t m, SeedSpec s) { return build_dense_embedder(s, n, m); },
                                         grid, [&](std::size_t) { return std::make_pair(p, q); }, 6000,
                                         SeedSpec{87, 100});
  ASSERT_EQ(c.rows.size(), 4u);
  for (const auto& r : c.rows) {
    const double want = (d - d * d) / static_cast<double>(r.point.m);
    EXPECT_NEAR(r.estimate.variance, want, 0.15 * want) << r.point.m;
    EXPECT_EQ(r.estimate.seed.stream, 100u + static_cast<std::uint64_t>(&r - c.rows.data()));
  }
  // Only m = 8 qualifies for the slope (m^2 <= n), so no slope is fitted.
  EXPECT_TRUE(std::isnan(c.slope));
  EXPECT_THROW(variance_curve({}, std::span<const GridPoint>{}, {}, 10, SeedSpec{}), DomainError);
}

TEST(VarianceCurve, AlternatingPairIsFlat) {
  const std::vector<GridPoint> grid{{64, 2}, {64, 4}, {64, 8}};
  const VarianceCurve c = variance_curve(
      [](std::size_t n, std::size_t m, SeedSpec s) { return build_subsampled_circulant_embedder(s, n, RowMode::FirstM, m); },
      grid, [](std::size_t n) { return harness::alternating_pair(n); }, 20000, SeedSpec{88, 0});
  for (const auto& r : c.rows) EXPECT_NEAR(r.estimate.variance, 0.25, 0.01);
  EXPECT_NEAR(c.slope, 0.0, 0.05);
}

TEST(DeltaCheck, AntipodalAndRepeated) {
  const RealVector e1{1, 0, 0, 0}, m1{-1, 0, 0, 0};
  for (std::uint64_t t = 0; t < 20; ++t) {
    const BinaryEmbedder e = build_dense_embedder(SeedSpec{89, t}, 4, 512);
    const DeltaCheck c = check_delta_embedding(e, PointSet::from_rows({e1, m1}), 0.01);
    EXPECT_EQ(c.max_deviation, 0.0);
    EXPECT_TRUE(c.pass);
    EXPECT_EQ(check_delta_embedding(e, PointSet::from_rows({e1, e1, e1}), 0.0).max_deviation, 0.0);
  }
  const BinaryEmbedder e = build_dense_embedder(SeedSpec{}, 4, 8);
  EXPECT_THROW(check_delta_embedding(e, PointSet::from_rows({e1}), 0.1), DomainError);
}

TEST(Moments, DenseOrthogonalMeanIsOneHalf) {
  RealVector p(10, 0.0), q(10, 0.0);
  p[3] = 1.0;
  q[7] = 1.0;
  const MomentEstimate e =
      estimate_moments([](SeedSpec s) { return build_dense_embedder(s, 10, 100); }, p, q, 20000, SeedSpec{90, 0});
  EXPECT_LE(std::abs(e.mean - 0.5), 3 * e.std_error_mean);
  EXPECT_THROW(estimate_moments([](SeedSpec s) { return build_dense_embedder(s, 10, 4); }, p, q, 1, SeedSpec{}),
               DomainError);
}

TEST(Moments, Reproducible) {
  Gen gen(91);
  const RealVector p = gen.unit(32), q = gen.unit(32);
  const EmbedderFactory f = [](SeedSpec s) { return build_signed_circulant_embedder(s, 32, RowMode::Uniform, 8); };
  const MomentEstimate a = estimate_moments(f, p, q, 500, SeedSpec{91, 3});
  const MomentEstimate b = estimate_moments(f, p, q, 500, SeedSpec{91, 3});
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.variance, b.variance);
  EXPECT_NE(a.mean, estimate_moments(f, p, q, 500, SeedSpec{91, 4}).mean);

  harness::SuiteOptions o;
  o.scale = 0.01;
  std::ostringstream x, y;
  harness::write_csv(x, harness::suite_radcov(o).rows);
  harness::write_csv(y, harness::suite_radcov(o).rows);
  EXPECT_EQ(x.str(), y.str());
}

// The frozen fixture: p = e1, q = (e1 + e2)/sqrt(2), rows I = [4] of a signed
// circulant. Neighbouring indicators have covariance -1/48 exactly.
TEST(ProofGap, NeighbourCovarianceMatchesAnalyticValue) {
  const auto [p, q] = harness::proofgap_pair(16);
  for (StructureMode shape : {StructureMode::Circulant, StructureMode::Toeplitz}) {
    const RowCovariance rc = estimate_row_covariance(
        [=](SeedSpec s) { return build_signed_circulant_embedder(s, 16, RowMode::FirstM, 4, shape); }, p, q, 100000,
        SeedSpec{92, static_cast<std::uint64_t>(shape)});
    EXPECT_LE(std::abs(rc.at(0, 1) - (-1.0 / 48)), 4 * rc.se(0, 1));
    EXPECT_GT(std::abs(rc.at(0, 1)), 5 * rc.se(0, 1));
    // Each indicator alone is a fair quarter: P(X_i = 1) = geodesic = 1/4.
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(rc.mean[i], 0.25, 0.01);
  }
}

}  // namespace
