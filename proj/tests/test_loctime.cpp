#include <gtest/gtest.h>

#include <rosenlab/loctime.hpp>
#include <rosenlab/simulate.hpp>

#include <cmath>

using namespace rosenlab;

namespace {

PathSample linearPath(std::size_t n) {
  std::vector<double> v(n + 1);
  for (std::size_t i = 0; i <= n; ++i) v[i] = static_cast<double>(i) / static_cast<double>(n);
  return PathSample::injected(1.0 / static_cast<double>(n), std::move(v));
}

const std::vector<PathSample>& finePaths() {
  static const std::vector<PathSample> p = samplePaths(PathSimulator(Hurst(0.7), 1 << 15, 1.0, 4), 100, 77);
  return p;
}

std::vector<double> geometric(double start, double ratio, int count) {
  std::vector<double> g;
  for (int i = 0; i < count; ++i) g.push_back(start * std::pow(ratio, i));
  return g;
}

}  // namespace

TEST(Histogram, ConstantPath) {
  const auto p = PathSample::injected(0.01, std::vector<double>(101, 0.0));
  const auto est = localTimeHistogram(p, 0.0, 1.0, 0.05);
  ASSERT_EQ(est.density.size(), 1u);
  EXPECT_NEAR(est.density[0], 1.0 / 0.05, 1e-12);
  EXPECT_NEAR(est.at(0.0), 20.0, 1e-12);
  EXPECT_EQ(est.at(0.3), 0.0);
}

TEST(Histogram, LinearPathHasUnitDensity) {
  const auto est = localTimeHistogram(linearPath(1000), 0.0, 1.0, 0.01);
  // Grid points k/1000 straddle bin edges in floating point, so single bins
  // hold 9 or 11 points.
  double sum = 0.0;
  for (std::size_t i = 0; i < est.density.size(); ++i) {
    if (est.xGrid[i] > 0.0 && est.xGrid[i] < 1.0) EXPECT_NEAR(est.density[i], 1.0, 0.1 + 1e-9);
    sum += est.density[i];
  }
  EXPECT_NEAR(sum / static_cast<double>(est.density.size()), 1.0, 1e-12);
  EXPECT_EQ(est.at(-0.5), 0.0);
  EXPECT_EQ(est.at(1.5), 0.0);
}

TEST(Histogram, MassMonotonicityAdditivity) {
  const auto& p = finePaths().front();
  const double w = 0.02;
  for (auto [a, b] : {std::pair{0.0, 1.0}, {0.25, 0.5}, {0.1, 0.9}}) {
    EXPECT_NEAR(localTimeHistogram(p, a, b, w).totalMass(), b - a, 1e-12);
  }
  const auto first = localTimeHistogram(p, 0.0, 0.5, w);
  const auto second = localTimeHistogram(p, 0.5, 1.0, w);
  const auto whole = localTimeHistogram(p, 0.0, 1.0, w);
  for (double x : whole.xGrid) {
    EXPECT_LE(first.at(x), whole.at(x) + 1e-12);
    EXPECT_NEAR(first.at(x) + second.at(x), whole.at(x), 1e-9);
  }
}

TEST(Histogram, EmptyInterval) {
  const auto p = linearPath(10);
  try {
    localTimeHistogram(p, 0.31, 0.39, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyInterval);
  }
}

TEST(Fourier, LinearPathMatchesHistogram) {
  const auto p = linearPath(1000);
  const auto hist = localTimeHistogram(p, 0.0, 1.0, 0.01);
  FourierOptions opt;
  opt.binAveraged = true;
  const auto four = localTimeFourier(p, 0.0, 1.0, hist.xGrid, 200.0, opt);
  EXPECT_LT(relativeL2(hist, four), 0.05);
}

TEST(Fourier, RosenblattPathMatchesHistogram) {
  const auto& p = finePaths().front();
  const auto hist = localTimeHistogram(p, 0.0, 1.0, 0.02);
  FourierOptions opt;
  opt.binAveraged = true;
  const auto four = localTimeFourier(p, 0.0, 1.0, hist.xGrid, 2000.0, opt);
  EXPECT_LT(relativeL2(hist, four), 0.05);
}

TEST(Fourier, FarLevelsAreEmpty) {
  const auto p = linearPath(500);
  const auto est = localTimeFourier(p, 0.0, 1.0, {10.0, 10.01, 10.02}, 200.0);
  for (double d : est.density) EXPECT_LT(d, 0.01);
}

TEST(Fourier, CutoffTooLow) {
  const auto p = PathSample::injected(0.01, std::vector<double>(101, 0.0));
  std::vector<double> grid;
  for (int i = -200; i <= 200; ++i) grid.push_back(0.01 * i);
  try {
    localTimeFourier(p, 0.0, 1.0, grid, 20.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CutoffTooLow);
  }
}

TEST(Histogram, ResolutionConsistency) {
  // Same fine fGn grid, so the dt/2 paths refine the dt paths.
  const Hurst h(0.7);
  const auto coarse = samplePaths(PathSimulator(h, 1024, 1.0, 16), 100, 5);
  const auto fine = samplePaths(PathSimulator(h, 2048, 1.0, 8), 100, 5);
  const double w = 0.1;
  std::vector<double> xs;
  for (double x = -0.45; x <= 0.45; x += w) xs.push_back(x);
  std::vector<double> a(xs.size(), 0.0), b(xs.size(), 0.0);
  for (std::size_t p = 0; p < coarse.size(); ++p) {
    const auto ec = localTimeHistogram(coarse[p], 0.0, 1.0, w);
    const auto ef = localTimeHistogram(fine[p], 0.0, 1.0, 0.5 * w);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      a[i] += ec.at(xs[i]);
      b[i] += 0.5 * (ef.at(xs[i] - 0.25 * w) + ef.at(xs[i] + 0.25 * w));
    }
  }
  for (std::size_t i = 0; i < xs.size(); ++i) EXPECT_NEAR(b[i] / a[i], 1.0, 0.1) << "x " << xs[i];
}

TEST(MomentScaling, FirstMomentAtSmallSize) {
  const Hurst h(0.7);
  const auto paths = samplePaths(PathSimulator(h, 1 << 14, 1.0, 16), 100, 8);
  const auto rep = verifyMomentScaling(paths, h, 1, geometric(1.0 / 512, 2.0, 8));
  EXPECT_NEAR(rep.slope, 0.3, 0.1);
}

TEST(MomentScaling, Errors) {
  const auto& paths = finePaths();
  MomentScalingOptions opt;
  opt.shift = ShiftMode::None;
  // Level 0 after shifting by -50 is never reached.
  const Hurst h(0.7);
  std::vector<PathSample> shifted;
  for (const auto& p : paths) {
    auto v = p.values;
    for (double& x : v) x -= 50.0;
    v.front() = 0.0;
    shifted.push_back(PathSample::injected(p.dt, v, h));
  }
  try {
    verifyMomentScaling(shifted, h, 1, geometric(1.0 / 512, 2.0, 5), opt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientOccupation);
  }
  EXPECT_THROW(verifyMomentScaling(paths, h, 5, geometric(0.01, 2.0, 5)), Error);
  EXPECT_THROW(verifyMomentScaling(paths, h, 1, {0.01, 0.02}), Error);
}

TEST(SpaceHolder, AdmissibleGamma) {
  const Hurst h(0.7);
  const auto& p = finePaths().front();
  EXPECT_EQ(localTimeAt(p, 0.0, 1.0, 0.0, 0.01) - localTimeAt(p, 0.0, 1.0, 0.0, 0.01), 0.0);
  const auto grid = geometric(0.01, 2.0, 5);
  const auto all = samplePaths(PathSimulator(h, 1 << 14, 1.0, 16), 400, 42);
  const std::vector<PathSample> half(all.begin(), all.begin() + 200);
  const auto a = verifySpaceHolder(half, h, 0.15, grid);
  const auto b = verifySpaceHolder(all, h, 0.15, grid);
  EXPECT_GE(a.slope, 0.05);
  EXPECT_GE(b.slope, 0.05);
  EXPECT_NEAR(a.slope, b.slope, 0.05);
  EXPECT_THROW(verifySpaceHolder(all, h, 0.25, grid), Error);
}

TEST(Limsup, GaugeBehaviour) {
  const Hurst h(0.7);
  const auto rs = geometric(1.0 / 16, 0.5, 7);
  std::size_t bounded = 0;
  for (const auto& p : finePaths()) {
    const auto rep = limsupDiagnostic(h, p, 0.5, rs, 2.0 * h.value());
    bounded += rep.bounded;
    const auto flat = limsupDiagnostic(h, p, 0.5, rs, 0.0);
    for (double r : flat.ratios) EXPECT_TRUE(std::isfinite(r));
    const auto heavy = limsupDiagnostic(h, p, 0.5, rs, 10.0);
    EXPECT_LT(heavy.ratios.back(), 0.1 * heavy.ratios.front());
  }
  EXPECT_GE(bounded, finePaths().size() * 9 / 10);
  EXPECT_THROW(limsupDiagnostic(h, finePaths()[0], 0.5, {1e-5}, 1.4), Error);
}

TEST(Irregularity, LinearPathFailsTheFloor) {
  const auto p = linearPath(1 << 15);
  const std::vector<double> s{0.25, 0.5, 0.75};
  const auto rs = geometric(1.0 / 1024, 2.0, 6);
  const auto rep = irregularityDiagnostic(p, s, rs);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    EXPECT_NEAR(rep.floor[i], (rs[i] - p.dt) / std::pow(rs[i], 0.7), 1e-9);
  }
  EXPECT_FALSE(irregularityFloor({p}, s, rs).floorMaintained);
}

TEST(Irregularity, RosenblattKeepsAFloor) {
  std::vector<double> s;
  for (int i = 1; i < 32; ++i) s.push_back(i / 32.0);
  const auto v = irregularityFloor(finePaths(), s, geometric(1.0 / 1024, 2.0, 6));
  EXPECT_TRUE(v.floorMaintained) << "slope " << v.slope;
  for (double f : v.medianFloor) EXPECT_GT(f, 0.0);
}
