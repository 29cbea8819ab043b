#pragma once

// Closed-form and quadrature references for the Gamma-function identity over
// the sphere-simplex product, and its exponential-weighted companion.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/random/sobol.hpp>

#include "core.hpp"
#include "numerics.hpp"
#include "rng.hpp"

namespace rosenlab {

struct AlkuParams {
  int n = 1;
  double hurst = 0.7;
  std::vector<double> gammas;

  AlkuParams() = default;
  AlkuParams(int n_, double h, std::vector<double> g = {}) : n(n_), hurst(h), gammas(std::move(g)) {
    if (gammas.empty()) gammas.assign(static_cast<std::size_t>(std::max(n, 0)), 0.0);
    validate();
  }

  double gammaAv() const {
    double s = 0.0;
    for (double g : gammas) s += g;
    return s / n;
  }

  // Exponent -n(1+gamma_av) applied to the max-function.
  double power() const { return n * (1.0 + gammaAv()); }

  void validate() const {
    require(n >= 1, ErrorCode::InvalidArgument, "n must be positive");
    require(static_cast<int>(gammas.size()) == n, ErrorCode::InvalidArgument, "need one gamma per coordinate");
    require(hurst > 0.0 && hurst < 1.0, ErrorCode::InvalidArgument, "H must lie in (0,1)");
    for (double g : gammas) {
      require(g >= 0.0, ErrorCode::DomainError, "gamma_j must be nonnegative");
      require(hurst * (1.0 + g) < 1.0, ErrorCode::DomainError, "H(1+gamma_j) must stay below 1");
    }
  }
};

// n (1+g_av) prod[2/(1+g_j) Gamma(1-H(1+g_j))] / Gamma(n(1-H(1+g_av))+1)
inline double alkuClosedForm(const AlkuParams& p) {
  p.validate();
  using boost::math::lgamma;
  const double h = p.hurst;
  const double gav = p.gammaAv();
  double logv = std::log(static_cast<double>(p.n)) + std::log1p(gav);
  for (double g : p.gammas) logv += std::log(2.0 / (1.0 + g)) + lgamma(1.0 - h * (1.0 + g));
  logv -= lgamma(p.n * (1.0 - h * (1.0 + gav)) + 1.0);
  return std::exp(logv);
}

// Variant with an n^{1/2} prefactor in place of n; sqrt(n) below the brute-force value.
inline double alkuClosedFormPrinted(const AlkuParams& p) {
  return alkuClosedForm(p) / std::sqrt(static_cast<double>(p.n));
}

struct AlkuBudget {
  double tolerance = 1e-10;
  std::size_t qmcPoints = std::size_t{1} << 20;
  int shifts = 16;
  std::uint64_t seed = 20240611;
  unsigned threads = 1;
  std::size_t maxEvaluations = std::size_t{1} << 26;
  double timeExponent = 3.0;
  double spaceExponent = 6.0;
};

struct OracleValue {
  double value = 0.0;
  double errorEstimate = 0.0;
};

namespace detail {

inline OracleValue alkuOne(const AlkuParams& p) {
  // S^0 = {-1, 1}; int_0^1 t^{-a} dt with t = v^{1/(1-a)} becomes a constant integrand.
  const double a = p.hurst * (1.0 + p.gammas[0]);
  auto rule = gaussLegendre(8, 0.0, 1.0);
  const double q = 1.0 / (1.0 - a);
  double s = rule.integrate([&](double v) {
    if (v <= 0.0) return 0.0;
    double t = std::pow(v, q);
    return std::pow(t, -a) * q * std::pow(v, q - 1.0);
  });
  return {2.0 * s, 2.0 * s * 1e-14};
}

inline OracleValue alkuTwo(const AlkuParams& p, const AlkuBudget& b) {
  // t = s(u, 1-u) turns the simplex integral into int_0^1 s^{1-hp} ds times a
  // (u, theta) integral over the first quadrant of the circle. The theta range
  // is split at theta*, where u^H cos = (1-u)^H sin, and theta = atan(x* y)
  // rescales each piece so that tiny x* stays representable.
  const double h = p.hurst;
  const double g1 = p.gammas[0], g2 = p.gammas[1];
  const double pw = p.power();
  const double radial = 1.0 / (2.0 - h * pw);
  boost::math::quadrature::tanh_sinh<double> ts;
  boost::math::quadrature::exp_sinh<double> es;
  const double innerTol = std::max(b.tolerance, 1e-13);
  // cos^{c} sin^{e} dtheta in the y variable, without the x*^{e+1} factor.
  auto piece = [](double logXs, double y, double c, double e) {
    const double ly = std::log(y);
    const double lx = logXs + ly;
    const double l = lx < 0.0 ? std::log1p(std::exp(2.0 * lx)) : 2.0 * lx + std::log1p(std::exp(-2.0 * lx));
    return std::exp(e * ly - 0.5 * (c + e) * l - l);
  };
  auto inner = [&](double u, double um) {
    if (u <= 0.0 || um <= 0.0) return 0.0;
    const double logXs = h * (std::log(u) - std::log(um));
    double left = ts.integrate([&](double y) { return y <= 0.0 ? 0.0 : piece(logXs, y, g1 - pw, g2); }, 0.0, 1.0,
                               innerTol);
    double right = es.integrate([&](double y) { return piece(logXs, 1.0 + y, g1, g2 - pw); }, innerTol);
    const double logL = -h * pw * std::log(u) + (g2 + 1.0) * logXs;
    const double logR = -h * pw * std::log(um) + (g2 - pw + 1.0) * logXs;
    return left * std::exp(logL) + right * std::exp(logR);
  };
  // u = w^{q1}/2 near 0 and 1 - u = w^{q2}/2 near 1 flatten the endpoint singularities.
  const double q1 = 1.0 / (1.0 - h * (1.0 + g1)), q2 = 1.0 / (1.0 - h * (1.0 + g2));
  double err1 = 0.0, err2 = 0.0;
  double v1 = ts.integrate(
      [&](double w) { return w <= 0.0 ? 0.0 : inner(0.5 * std::pow(w, q1), 1.0 - 0.5 * std::pow(w, q1)) * 0.5 * q1 * std::pow(w, q1 - 1.0); },
      0.0, 1.0, std::sqrt(b.tolerance), &err1);
  double v2 = ts.integrate(
      [&](double w) {
        return w <= 0.0 ? 0.0 : inner(1.0 - 0.5 * std::pow(w, q2), 0.5 * std::pow(w, q2)) * 0.5 * q2 * std::pow(w, q2 - 1.0);
      },
      0.0, 1.0, std::sqrt(b.tolerance), &err2);
  const double v = v1 + v2, err = err1 + err2;
  double value = 4.0 * radial * v;
  return {value, 4.0 * radial * err + std::abs(value) * innerTol};
}

// The integrand is homogeneous of degree -3 in y, so the sphere can be traded
// for the surface of the cube [-1,1]^3 (24 congruent quarter faces). On the
// face y_k = 1 the remaining y_j = z_j^r and t_j = v_j^q push the points
// toward the integrable singular set.
inline OracleValue alkuThree(const AlkuParams& p, const AlkuBudget& b) {
  require(b.qmcPoints * static_cast<std::size_t>(b.shifts) <= b.maxEvaluations, ErrorCode::BudgetExceeded,
          "QMC point budget exceeds the evaluation limit");
  require(b.shifts >= 2, ErrorCode::InvalidArgument, "need at least two random shifts");
  const double h = p.hurst;
  const double pw = p.power();
  double q[3], r[3];
  for (int j = 0; j < 3; ++j) {
    q[j] = b.timeExponent / (1.0 - h * (1.0 + p.gammas[j]));
    r[j] = b.spaceExponent / (1.0 + p.gammas[j]);
  }

  std::vector<std::array<double, 5>> pts(b.qmcPoints);
  {
    boost::random::sobol gen(5);
    for (auto& pt : pts)
      for (double& x : pt) x = std::ldexp(static_cast<double>(gen()), -64);
  }
  std::vector<double> estimates(static_cast<std::size_t>(b.shifts));
  parallelFor(static_cast<std::size_t>(b.shifts), b.threads, [&](std::size_t k) {
    RngStream rng(b.seed, k);
    double shift[5];
    for (double& s : shift) s = rng.uniform();
    double sum = 0.0;
    for (const auto& pt : pts) {
      double x[5];
      for (int d = 0; d < 5; ++d) {
        x[d] = pt[d] + shift[d];
        if (x[d] >= 1.0) x[d] -= 1.0;
      }
      if (x[0] <= 0.0 || x[1] <= 0.0 || x[2] <= 0.0 || x[3] <= 0.0 || x[4] <= 0.0) continue;
      double th[3], tjac = 1.0, tsum = 0.0;
      for (int j = 0; j < 3; ++j) {
        const double t = std::pow(x[j], q[j]);
        tjac *= q[j] * t / x[j];
        tsum += t;
        th[j] = std::pow(t, h);
      }
      if (tsum > 1.0) continue;
      for (int face = 0; face < 3; ++face) {
        double y[3], jac = tjac;
        int free = 3;
        for (int j = 0; j < 3; ++j) {
          if (j == face) {
            y[j] = 1.0;
            continue;
          }
          const double z = x[free++];
          y[j] = std::pow(z, r[j]);
          jac *= r[j] * y[j] / z;
        }
        double m = 0.0, weight = 1.0;
        for (int j = 0; j < 3; ++j) {
          m = std::max(m, th[j] * y[j]);
          if (p.gammas[j] != 0.0) weight *= std::pow(y[j], p.gammas[j]);
        }
        sum += jac * weight * std::pow(m, -pw);
      }
    }
    estimates[k] = 8.0 * sum / static_cast<double>(pts.size());
  });
  auto st = sampleStats(estimates);
  return {st.mean, std::sqrt(st.variance / static_cast<double>(estimates.size()))};
}

}  // namespace detail

// Direct quadrature of the sphere-simplex integral; no Gamma identities used.
inline OracleValue alkuBruteForce(const AlkuParams& p, const AlkuBudget& b = {}) {
  p.validate();
  require(p.n <= 3, ErrorCode::InvalidArgument, "brute force is implemented for n <= 3");
  switch (p.n) {
    case 1: return detail::alkuOne(p);
    case 2: return detail::alkuTwo(p, b);
    default: return detail::alkuThree(p, b);
  }
}

// 1 / [Gamma(n(1+g_av)) Gamma(n(1-H(1+g_av))+1)]
inline double helppiConstant(const AlkuParams& p) {
  using boost::math::lgamma;
  const double gav = p.gammaAv();
  return std::exp(-lgamma(p.n * (1.0 + gav)) - lgamma(p.n * (1.0 - p.hurst * (1.0 + gav)) + 1.0));
}

// n(1+g_av) Gamma(n(1+g_av)) prod 2/(1+g_j)
inline double maxIntegralClosedForm(const AlkuParams& p) {
  const double gav = p.gammaAv();
  double v = p.n * (1.0 + gav) * boost::math::tgamma(p.n * (1.0 + gav));
  for (double g : p.gammas) v *= 2.0 / (1.0 + g);
  return v;
}

namespace detail {

// int_0^c y^g dy and int_c^inf e^{-b y} y^g dy
inline double powerHead(double c, double g) { return std::pow(c, g + 1.0) / (g + 1.0); }
inline double expTail(double c, double bRate, double g) {
  return boost::math::tgamma(g + 1.0, bRate * c) / std::pow(bRate, g + 1.0);
}

// int over the positive quadrant of e^{-max(b1 y1, b2 y2)} y1^g1 y2^g2; the y2
// integral is split at b1 y1 / b2 and done in closed form.
inline double quadrantMaxIntegral(double b1, double b2, double g1, double g2, double tol) {
  boost::math::quadrature::exp_sinh<double> es;
  auto f = [&](double y1) {
    if (y1 <= 0.0) return 0.0;
    const double c = b1 * y1 / b2;
    return std::pow(y1, g1) * (std::exp(-b1 * y1) * powerHead(c, g2) + expTail(c, b2, g2));
  };
  return es.integrate(f, tol);
}

}  // namespace detail

// Numerical value of int_{R^n} e^{-max|y_j|} prod |y_j|^{g_j} dy.
inline OracleValue maxIntegralQuadrature(const AlkuParams& p, double tol = 1e-10) {
  p.validate();
  require(p.n <= 2, ErrorCode::InvalidArgument, "max-integral quadrature is implemented for n <= 2");
  boost::math::quadrature::exp_sinh<double> es;
  if (p.n == 1) {
    double err = 0.0;
    const double g = p.gammas[0];
    double v = es.integrate([&](double y) { return std::exp(-y) * std::pow(y, g); }, tol, &err);
    return {2.0 * v, 2.0 * err};
  }
  double v = detail::quadrantMaxIntegral(1.0, 1.0, p.gammas[0], p.gammas[1], tol);
  return {4.0 * v, 4.0 * v * tol};
}

// Numerical value of int e^{-max_j t_j^H |y_j|} e^{-sum t} prod |y_j|^{g_j} dy dt.
inline OracleValue exponentialIntegralQuadrature(const AlkuParams& p, double tol = 1e-9) {
  p.validate();
  require(p.n <= 2, ErrorCode::InvalidArgument, "exponential-weighted quadrature is implemented for n <= 2");
  const double h = p.hurst;
  boost::math::quadrature::exp_sinh<double> es;
  if (p.n == 1) {
    const double g = p.gammas[0];
    auto outer = [&](double t) {
      if (t <= 0.0 || std::exp(-t) == 0.0) return 0.0;
      const double bRate = std::pow(t, h);
      double inner = es.integrate([&](double y) { return std::exp(-bRate * y) * std::pow(y, g); }, tol);
      return std::exp(-t) * inner;
    };
    double err = 0.0;
    double v = es.integrate(outer, tol, &err);
    return {2.0 * v, 2.0 * err};
  }
  const double g1 = p.gammas[0], g2 = p.gammas[1];
  double innerTol = std::max(tol, 1e-10);
  // Below kTiny the t-integrand, of order t^{-H(1+g)}, contributes nothing at double precision.
  constexpr double kTiny = 1e-150;
  auto overT2 = [&](double t1) {
    if (t1 < kTiny || std::exp(-t1) == 0.0) return 0.0;
    const double b1 = std::pow(t1, h);
    boost::math::quadrature::exp_sinh<double> es2;
    double v = es2.integrate(
        [&](double t2) {
          if (t2 < kTiny || std::exp(-t2) == 0.0) return 0.0;
          return std::exp(-t2) * detail::quadrantMaxIntegral(b1, std::pow(t2, h), g1, g2, innerTol);
        },
        std::sqrt(tol));
    return std::exp(-t1) * v;
  };
  double err = 0.0;
  double v = es.integrate(overT2, std::sqrt(tol), &err);
  return {4.0 * v, 4.0 * err};
}

struct HelppiReport {
  int n = 0;
  OracleValue exponentialIntegral;
  OracleValue sphereIntegral;
  double constant = 0.0;
  double identityRelError = 0.0;
  OracleValue maxIntegral;
  double maxClosedForm = 0.0;
  double maxRelError = 0.0;
  double factorizedRelError = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

enum class HelppiChoice { Max };

// Checks int e^{-f}e^{-sum t}|y|^g = C^{-1} I_0 for f = max_j t_j^H|y_j|, and
// the max-integral closed form, each side by its own quadrature.
inline HelppiReport helppiIdentityCheck(const AlkuParams& p, HelppiChoice = HelppiChoice::Max,
                                        const AlkuBudget& b = {}, double relTol = 1e-4) {
  p.validate();
  require(p.n <= 2, ErrorCode::InvalidArgument, "identity check is implemented for n <= 2");
  HelppiReport r;
  r.n = p.n;
  r.tolerance = relTol;
  r.exponentialIntegral = exponentialIntegralQuadrature(p);
  r.sphereIntegral = alkuBruteForce(p, b);
  r.constant = helppiConstant(p);
  const double rhs = r.sphereIntegral.value / r.constant;
  r.identityRelError = std::abs(r.exponentialIntegral.value - rhs) / std::abs(rhs);
  r.maxIntegral = maxIntegralQuadrature(p);
  r.maxClosedForm = maxIntegralClosedForm(p);
  r.maxRelError = std::abs(r.maxIntegral.value - r.maxClosedForm) / r.maxClosedForm;
  double gammaProd = 1.0;
  for (double g : p.gammas) gammaProd *= boost::math::tgamma(1.0 - p.hurst * (1.0 + g));
  const double factorized = r.constant * gammaProd * r.maxIntegral.value;
  r.factorizedRelError = std::abs(factorized - r.sphereIntegral.value) / r.sphereIntegral.value;
  r.passed = r.identityRelError < relTol && r.maxRelError < relTol && r.factorizedRelError < relTol;
  return r;
}

}  // namespace rosenlab
