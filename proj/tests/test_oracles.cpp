#include <gtest/gtest.h>

#include <rosenlab/oracles.hpp>

#include <cmath>

using namespace rosenlab;

TEST(AlkuClosedForm, OneDimensionalReductions) {
  EXPECT_NEAR(alkuClosedForm(AlkuParams(1, 0.7)), 20.0 / 3.0, 1e-12);
  EXPECT_NEAR(alkuClosedForm(AlkuParams(1, 0.5)), 4.0, 1e-12);
}

TEST(AlkuClosedForm, TwoDimensions) {
  const double g = 2.0 * std::tgamma(0.3);
  const double value = alkuClosedForm(AlkuParams(2, 0.7));
  EXPECT_NEAR(value, 2.0 * g * g / std::tgamma(1.6), 1e-10 * value);
  // n^{1/2} prefactor variant.
  EXPECT_NEAR(alkuClosedFormPrinted(AlkuParams(2, 0.7)), std::sqrt(2.0) * g * g / std::tgamma(1.6), 1e-10 * value);
}

TEST(AlkuClosedForm, Domain) {
  try {
    alkuClosedForm(AlkuParams(1, 0.7, {0.5}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DomainError);
  }
  EXPECT_THROW(AlkuParams(2, 0.7, {0.0}), Error);
  EXPECT_THROW(AlkuParams(1, 0.7, {-0.1}), Error);
}

TEST(AlkuClosedForm, ContinuousInGamma) {
  const double eps = 1e-6;
  for (double g : {0.0, 0.1, 0.3}) {
    const double a = alkuClosedForm(AlkuParams(2, 0.7, {g, 0.1}));
    const double b = alkuClosedForm(AlkuParams(2, 0.7, {g + eps, 0.1}));
    const double c = alkuClosedForm(AlkuParams(2, 0.7, {g + 2 * eps, 0.1}));
    EXPECT_LT(std::abs(b - a), 1e-4 * a);
    // Second difference of a smooth function is O(eps^2).
    EXPECT_LT(std::abs(c - 2 * b + a), 1e-8 * a);
  }
}

TEST(AlkuClosedForm, DivergesAtTheBoundary) {
  // H(1+gamma) -> 1 with H = 0.7: gamma -> 3/7.
  std::vector<double> v;
  for (int k = 1; k <= 8; ++k) {
    const double g = 3.0 / 7.0 - std::pow(10.0, -k);
    v.push_back(alkuClosedForm(AlkuParams(1, 0.7, {g})));
  }
  for (std::size_t i = v.size() - 5; i < v.size(); ++i) EXPECT_GT(v[i], v[i - 1]);
  EXPECT_GT(v.back(), 1e6);
}

TEST(AlkuBruteForce, OneDimensional) {
  for (double h : {0.55, 0.7, 0.85}) {
    for (double g : {0.0, 0.1}) {
      const AlkuParams p(1, h, {g});
      EXPECT_NEAR(alkuBruteForce(p).value, alkuClosedForm(p), 1e-12 * alkuClosedForm(p));
    }
  }
  EXPECT_NEAR(alkuBruteForce(AlkuParams(1, 0.7)).value, 20.0 / 3.0, 1e-12);
}

TEST(AlkuBruteForce, TwoDimensional) {
  for (double h : {0.55, 0.7, 0.85}) {
    for (auto g : {std::vector<double>{0.0, 0.0}, {0.0, 0.1}, {0.05, 0.05}}) {
      const AlkuParams p(2, h, g);
      const double want = alkuClosedForm(p);
      EXPECT_NEAR(alkuBruteForce(p).value, want, 1e-3 * want) << "H " << h;
    }
  }
}

TEST(AlkuBruteForce, ThreeDimensionalQmc) {
  const AlkuParams p(3, 0.6);
  const auto v = alkuBruteForce(p);
  const double want = alkuClosedForm(p);
  EXPECT_NEAR(v.value, want, 1e-2 * want);
  EXPECT_LT(v.errorEstimate, 1e-2 * want);
}

TEST(AlkuBruteForce, Budget) {
  AlkuBudget b;
  b.maxEvaluations = 1000;
  try {
    alkuBruteForce(AlkuParams(3, 0.7), b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BudgetExceeded);
  }
  EXPECT_THROW(alkuBruteForce(AlkuParams(4, 0.6)), Error);
}

TEST(Helppi, MaxIntegral) {
  EXPECT_NEAR(maxIntegralClosedForm(AlkuParams(1, 0.7)), 2.0, 1e-14);
  EXPECT_NEAR(maxIntegralClosedForm(AlkuParams(2, 0.7)), 8.0, 1e-13);
  EXPECT_NEAR(maxIntegralQuadrature(AlkuParams(1, 0.7)).value, 2.0, 1e-8);
  EXPECT_NEAR(maxIntegralQuadrature(AlkuParams(2, 0.7)).value, 8.0, 1e-8);
  const AlkuParams p(2, 0.7, {0.0, 0.2});
  EXPECT_NEAR(maxIntegralQuadrature(p).value, maxIntegralClosedForm(p), 1e-8 * maxIntegralClosedForm(p));
}

TEST(Helppi, IdentityOneDimensional) {
  for (double g : {0.0, 0.1}) {
    const auto r = helppiIdentityCheck(AlkuParams(1, 0.7, {g}));
    EXPECT_TRUE(r.passed) << r.identityRelError << " " << r.maxRelError << " " << r.factorizedRelError;
    EXPECT_LT(r.identityRelError, 1e-4);
  }
}

TEST(Helppi, IdentityTwoDimensional) {
  const auto r = helppiIdentityCheck(AlkuParams(2, 0.7, {0.0, 0.1}));
  EXPECT_TRUE(r.passed) << r.identityRelError << " " << r.maxRelError << " " << r.factorizedRelError;
  EXPECT_THROW(helppiIdentityCheck(AlkuParams(3, 0.6)), Error);
}
