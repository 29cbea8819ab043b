#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include <rosenlab/core.hpp>
#include <rosenlab/numerics.hpp>
#include <rosenlab/rng.hpp>

using namespace rosenlab;

TEST(Hurst, RejectsBoundaryAndOutside) {
  for (double h : {0.5, 1.0, 0.3, 1.2, -0.7, std::nan("")}) {
    EXPECT_THROW(Hurst{h}, Error) << h;
  }
  EXPECT_NO_THROW(Hurst{0.51});
  EXPECT_NO_THROW(Hurst{0.99});
}

TEST(Hurst, DerivedExponents) {
  const Hurst h(0.7);
  EXPECT_DOUBLE_EQ(h.alpha(), 0.35);
  EXPECT_NEAR(h.holderSpaceLimit(), 0.3 / 1.4, 1e-15);
  EXPECT_DOUBLE_EQ(h.noiseHurst(), 0.85);
  for (double v : {0.55, 0.7, 0.95}) {
    const Hurst x(v);
    EXPECT_GT(x.alpha(), 0.25);
    EXPECT_LT(x.alpha(), 0.5);
    EXPECT_GT(x.holderSpaceLimit(), 0.0);
  }
}

TEST(Hurst, ErrorCarriesCode) {
  try {
    Hurst h(1.2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
    EXPECT_NE(std::string(e.what()).find("H out of (0.5,1)"), std::string::npos);
  }
}

TEST(StepProfile, LevelsRoundTripExactly) {
  const std::vector<double> xi{0.3, -1.25, 2.0, 1e-300, -7.5};
  const auto levels = StepProfile::levelsFromCoefficients(xi);
  const auto back = StepProfile::coefficientsFromLevels(levels);
  // Levels are partial sums; the round trip is exact when the sums are.
  const std::vector<double> lv{1.0, -0.5, 0.25, 2.0};
  const auto c = StepProfile::coefficientsFromLevels(lv);
  EXPECT_EQ(StepProfile::levelsFromCoefficients(c), lv);
  EXPECT_EQ(back.size(), xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) EXPECT_NEAR(back[i], xi[i], 1e-15 * 8.0);
}

TEST(StepProfile, LevelsMatchDefinition) {
  const StepProfile p({0.2, 0.5, 1.0}, {1.0, 2.0, -0.5});
  EXPECT_EQ(p.levels(), (std::vector<double>{2.5, 1.5, -0.5}));
  EXPECT_DOUBLE_EQ(p.intervalStart(0), 0.0);
  EXPECT_DOUBLE_EQ(p.intervalLength(1), 0.3);
  EXPECT_TRUE(p.changesSign());
  EXPECT_FALSE(p.isZero());
  EXPECT_TRUE(StepProfile({1.0}, {0.0}).isZero());
  const auto q = StepProfile::fromLevels({0.5, 1.0}, {1.0, -1.0});
  EXPECT_EQ(q.xi(), (std::vector<double>{2.0, -1.0}));
}

TEST(StepProfile, RejectsBadTimes) {
  EXPECT_THROW(StepProfile({}, {}), Error);
  EXPECT_THROW(StepProfile({0.5, 0.5}, {1.0, 1.0}), Error);
  EXPECT_THROW(StepProfile({0.0}, {1.0}), Error);
  EXPECT_THROW(StepProfile({0.5, 1.0}, {1.0}), Error);
}

TEST(Spectrum, SortedByMagnitude) {
  const auto s = Spectrum::fromEigenvalues({0.1, -0.5, 0.3, -0.05});
  EXPECT_EQ(s.eigenvalues, (std::vector<double>{-0.5, 0.3, 0.1, -0.05}));
  EXPECT_EQ(s.singularValues, (std::vector<double>{0.5, 0.3, 0.1, 0.05}));
  const auto t = s.truncated(2);
  EXPECT_EQ(t.size(), 2u);
  EXPECT_NEAR(t.tailSumSquares, 0.01 + 0.0025, 1e-15);
  const auto u = s.scaled(-2.0);
  EXPECT_DOUBLE_EQ(u.eigenvalues[0], 1.0);
  EXPECT_DOUBLE_EQ(u.singularValues[0], 1.0);
}

TEST(PathSample, Validates) {
  EXPECT_THROW(PathSample::injected(0.1, {0.0}), Error);
  EXPECT_THROW(PathSample::injected(0.1, {1.0, 2.0}), Error);
  EXPECT_THROW(PathSample::injected(0.0, {0.0, 1.0}), Error);
  const auto p = PathSample::injected(0.25, {0.0, 1.0, 2.0, 3.0, 4.0});
  EXPECT_EQ(p.steps(), 4u);
  EXPECT_DOUBLE_EQ(p.horizon(), 1.0);
}

TEST(Rng, StreamsAreDeterministic) {
  auto a = makeRngStreams(42, 4);
  auto b = makeRngStreams(42, 4);
  ASSERT_EQ(a.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    for (int k = 0; k < 100; ++k) ASSERT_EQ(a[i](), b[i]());
  }
  EXPECT_THROW(makeRngStreams(42, 0), Error);
}

TEST(Rng, SeedSensitivity) {
  auto a = makeRngStreams(42, 1);
  auto b = makeRngStreams(43, 1);
  EXPECT_NE(a[0](), b[0]());
}

TEST(Rng, StreamsUncorrelated) {
  auto s = makeRngStreams(42, 2);
  const int n = 100000;
  std::vector<double> x(n), y(n);
  for (int i = 0; i < n; ++i) {
    x[i] = s[0].normal();
    y[i] = s[1].normal();
  }
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  EXPECT_LT(std::abs(sxy / std::sqrt(sxx * syy)), 0.01);
}

TEST(Rng, UniformInUnitInterval) {
  RngStream r(7, 3);
  double lo = 1.0, hi = 0.0, sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  EXPECT_GE(lo, 0.0);
  EXPECT_LT(hi, 1.0);
  EXPECT_NEAR(sum / 100000.0, 0.5, 0.005);
}

TEST(Numerics, GaussLegendreExactForPolynomials) {
  const auto rule = gaussLegendre(6, 0.0, 2.0);
  EXPECT_NEAR(rule.integrate([](double x) { return std::pow(x, 11); }), std::pow(2.0, 12) / 12.0, 1e-9);
}

TEST(Numerics, LogLogFitRecoversPowerLaw) {
  std::vector<double> k, m;
  for (int i = 1; i <= 50; ++i) {
    k.push_back(i);
    m.push_back(3.0 * std::pow(i, -0.35));
  }
  const auto f = fitLogLog(k, m);
  EXPECT_NEAR(f.slope, -0.35, 1e-12);
  EXPECT_NEAR(f.rSquared, 1.0, 1e-12);
}

TEST(Numerics, KsStatistic) {
  EXPECT_DOUBLE_EQ(ksStatistic({1, 2, 3}, {1, 2, 3}), 0.0);
  EXPECT_DOUBLE_EQ(ksStatistic({0, 0, 0}, {1, 1, 1}), 1.0);
  EXPECT_NEAR(ksCritical(10000, 10000), 1.628 * std::sqrt(2.0 / 10000.0), 1e-3);
}

TEST(Numerics, ParallelForVisitsEachIndexOnce) {
  std::vector<int> hits(1000, 0);
  parallelFor(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
}
