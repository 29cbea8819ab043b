#include <gtest/gtest.h>

#include <rosenlab/charfn.hpp>
#include <rosenlab/simulate.hpp>

#include <cmath>

using namespace rosenlab;

namespace {

const Spectrum& unitRosenblatt() {
  static const Spectrum s = rosenblattSpectrum(Hurst(0.7), StepProfile::singleInterval(1.0), 400);
  return s;
}

// 10^4 coarse paths on [0,1], shared by the distributional checks.
const std::vector<PathSample>& coarsePaths() {
  static const std::vector<PathSample> p = samplePaths(PathSimulator(Hurst(0.7), 64, 1.0, 256), 10000, 11);
  return p;
}

std::vector<double> valuesAt(const std::vector<PathSample>& paths, std::size_t i) {
  std::vector<double> out;
  for (const auto& p : paths) out.push_back(p.values[i]);
  return out;
}

}  // namespace

TEST(Fgn, AutocovarianceMatches) {
  const double hp = Hurst(0.7).noiseHurst();
  const FgnGenerator gen(hp, 4096);
  for (double e : gen.circulantEigenvalues()) EXPECT_GE(e, 0.0);
  const std::size_t reps = 200, maxLag = 20;
  std::vector<std::vector<double>> est(maxLag + 1);
  RngStream rng(5, 0);
  for (std::size_t r = 0; r < reps; ++r) {
    const auto x = gen.sample(rng);
    for (std::size_t k = 0; k <= maxLag; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i + k < x.size(); ++i) s += x[i] * x[i + k];
      est[k].push_back(s / static_cast<double>(x.size() - k));
    }
  }
  for (std::size_t k = 0; k <= maxLag; ++k) {
    const auto st = sampleStats(est[k]);
    const double se = std::sqrt(st.variance / static_cast<double>(reps));
    EXPECT_NEAR(st.mean, fgnCovariance(hp, k), 3.0 * se) << "lag " << k;
  }
}

TEST(Fgn, RejectsBadIndex) { EXPECT_THROW(FgnGenerator(0.4, 16), Error); }

TEST(Paths, SameSeedIsBitIdentical) {
  const PathSimulator sim(Hurst(0.7), 256, 1.0, 16);
  RngStream a(42, 3), b(42, 3), c(43, 3);
  const auto pa = sim.sample(a), pb = sim.sample(b), pc = sim.sample(c);
  EXPECT_EQ(pa.values, pb.values);
  EXPECT_NE(pa.values, pc.values);
  EXPECT_EQ(pa.values.front(), 0.0);
  EXPECT_EQ(pa.steps(), 256u);
}

TEST(Paths, ThreadCountDoesNotChangeOutput) {
  const PathSimulator sim(Hurst(0.7), 128, 1.0, 8);
  const auto a = samplePaths(sim, 6, 9, 1);
  const auto b = samplePaths(sim, 6, 9, 3);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].values, b[i].values);
}

TEST(Paths, BudgetExceeded) {
  try {
    PathSimulator(Hurst(0.7), 1 << 20, 1.0, 16);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BudgetExceeded);
  }
}

TEST(Paths, VarianceAndCovariance) {
  // Fine grid of 2^14 fGn points, as for 2^14 steps with m = 16.
  const auto half = valuesAt(coarsePaths(), 32), one = valuesAt(coarsePaths(), 64);
  std::vector<double> sq, prod;
  for (std::size_t i = 0; i < one.size(); ++i) {
    sq.push_back(one[i] * one[i]);
    prod.push_back(half[i] * one[i]);
  }
  const auto v = sampleStats(sq), c = sampleStats(prod);
  const double n = static_cast<double>(one.size());
  EXPECT_NEAR(v.mean, 1.0, 0.05);
  EXPECT_NEAR(v.mean, 1.0, 3.0 * std::sqrt(v.variance / n));
  EXPECT_NEAR(c.mean, 0.5, 0.05);
  EXPECT_NEAR(c.mean, 0.5, 3.0 * std::sqrt(c.variance / n));
}

TEST(Paths, MarginalMatchesChaosExpansion) {
  const auto fromPaths = valuesAt(coarsePaths(), 64);
  RngStream rng(12, 0);
  const auto fromSpectrum = sampleMarginal(MarginalSampler(unitRosenblatt()), rng, 10000);
  EXPECT_LT(ksStatistic(fromPaths, fromSpectrum), ksCritical(10000, 10000, 0.01));
}

TEST(Paths, StationaryIncrements) {
  std::vector<double> early, late;
  for (const auto& p : coarsePaths()) {
    early.push_back(p.values[16] - p.values[0]);
    late.push_back(p.values[48] - p.values[32]);
  }
  EXPECT_LT(ksStatistic(early, late), ksCritical(early.size(), late.size(), 0.01));
}

TEST(Paths, SelfSimilarVariance) {
  auto var = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s / static_cast<double>(v.size());
  };
  const double v25 = var(valuesAt(coarsePaths(), 16));
  const double v50 = var(valuesAt(coarsePaths(), 32));
  const double v100 = var(valuesAt(coarsePaths(), 64));
  EXPECT_NEAR(v100 / (std::pow(2.0, 1.4) * v50), 1.0, 0.05);
  EXPECT_NEAR(v25 / (std::pow(0.5, 1.4) * v50), 1.0, 0.05);
}

TEST(Marginal, MomentsAndNormalization) {
  const MarginalSampler ms(unitRosenblatt());
  EXPECT_NEAR(ms.variance(), 1.0, 1e-6);
  const std::size_t n = 1000000;
  const auto z = sampleMarginalParallel(ms, 3, n);
  const auto st = sampleStats(z);
  EXPECT_NEAR(st.mean, 0.0, 3.0 / std::sqrt(static_cast<double>(n)));
  EXPECT_NEAR(st.variance, 1.0, 0.01);
  double k3 = 0.0;
  for (double l : unitRosenblatt().eigenvalues) k3 += 8.0 * l * l * l;
  std::vector<double> infl;
  for (double x : z) infl.push_back(x * x * x - 3.0 * x);
  const double se = std::sqrt(sampleStats(infl).variance / static_cast<double>(n));
  EXPECT_NEAR(st.skewness, k3, 3.0 * se);
}

TEST(Marginal, EmpiricalCharFunction) {
  const auto z = sampleMarginalParallel(MarginalSampler(unitRosenblatt()), 4, 200000);
  const auto emp = empiricalCharModulus(z, 1.0);
  EXPECT_NEAR(emp.modulus, charModulus(unitRosenblatt()), 3.0 * emp.standardError);
}

TEST(SupTail, ZeroThresholdAndLogLinearTail) {
  const auto& paths = coarsePaths();
  std::vector<double> u{0.0};
  for (double c = 1.0; c <= 3.0; c += 0.5) u.push_back(c);
  const auto rep = verifySupTail(paths, 1.0, u);
  EXPECT_EQ(rep.probability[0], 1.0);
  EXPECT_GT(rep.rSquared, 0.95);
  EXPECT_LT(rep.slope, 0.0);
}

TEST(SupTail, TooFewExceedances) {
  try {
    verifySupTail(coarsePaths(), 1.0, {1.0, 50.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientTailEvents);
  }
  EXPECT_THROW(verifySupTail(coarsePaths(), 1.0 / 64, {1.0}), Error);
}

TEST(ExpMoment, StableInsideRadiusDivergentOutside) {
  const double l1 = unitRosenblatt().singularValues[0];
  const auto rep = verifyExpMoment(unitRosenblatt(), {0.0, 0.5 / (2 * l1), 1.5 / (2 * l1)}, 1000000, 21);
  EXPECT_EQ(rep.estimate[0], 1.0);
  EXPECT_FALSE(rep.divergent[1]);
  EXPECT_NEAR(rep.estimate[1] / rep.halfEstimate[1], 1.0, 0.02);
  EXPECT_TRUE(rep.divergent[2]);
}
