#pragma once

// Small numerical building blocks used across modules.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <numeric>
#include <span>
#include <thread>
#include <vector>

#include <boost/math/special_functions/legendre.hpp>

#include "rosenlab/core.hpp"

namespace rosenlab {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

/// n-point Gauss-Legendre rule mapped to [a, b].
inline QuadratureRule gaussLegendre(std::size_t n, double a = -1.0, double b = 1.0) {
  require(n >= 1, ErrorCode::InvalidArgument, "Gauss-Legendre needs at least one node");
  const auto zeros = boost::math::legendre_p_zeros<double>(static_cast<int>(n));
  std::vector<double> x, w;
  for (double z : zeros) {
    const double dp = boost::math::legendre_p_prime(static_cast<int>(n), z);
    const double wz = 2.0 / ((1.0 - z * z) * dp * dp);
    x.push_back(z);
    w.push_back(wz);
    if (z != 0.0) {
      x.push_back(-z);
      w.push_back(wz);
    }
  }
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return x[i] < x[j]; });
  QuadratureRule rule;
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (std::size_t i : order) {
    rule.nodes.push_back(mid + half * x[i]);
    rule.weights.push_back(half * w[i]);
  }
  return rule;
}

/// Gauss-Legendre rule for int_0^L f(x) x^{-p} dx (0 <= p < 1) via x = L v^q,
/// q = 1/(1-p), which turns the weight into the constant L^{1-p} q.
inline QuadratureRule singularEndpointRule(std::size_t n, double length, double p) {
  require(p >= 0.0 && p < 1.0, ErrorCode::InvalidArgument, "endpoint exponent must lie in [0,1)");
  const double q = 1.0 / (1.0 - p);
  QuadratureRule base = gaussLegendre(n, 0.0, 1.0);
  QuadratureRule rule;
  for (std::size_t i = 0; i < base.size(); ++i) {
    rule.nodes.push_back(length * std::pow(base.nodes[i], q));
    rule.weights.push_back(base.weights[i] * q * std::pow(length, 1.0 - p));
  }
  return rule;
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slopeStderr = 0.0;
  double rSquared = 0.0;
  std::size_t count = 0;
};

/// Ordinary least squares y = intercept + slope * x.
inline LinearFit fitLine(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 2, ErrorCode::InvalidArgument, "line fit needs >= 2 points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  require(sxx > 0.0, ErrorCode::InvalidArgument, "line fit needs distinct abscissae");
  LinearFit fit;
  fit.count = x.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    sse += r * r;
  }
  fit.slopeStderr = x.size() > 2 ? std::sqrt(sse / (n - 2.0) / sxx) : 0.0;
  fit.rSquared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  return fit;
}

/// Least-squares slope of log y against log x.
inline LinearFit fitLogLog(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(x[i] > 0.0 && y[i] > 0.0, ErrorCode::InvalidArgument, "log-log fit needs positive data");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return fitLine(lx, ly);
}

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
inline double ksStatistic(std::vector<double> a, std::vector<double> b) {
  require(!a.empty() && !b.empty(), ErrorCode::InvalidArgument, "KS needs non-empty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

/// Asymptotic two-sample KS critical value at level `alpha`
/// (c(0.05) = 1.358, c(0.01) = 1.628).
inline double ksCritical(std::size_t na, std::size_t nb, double alpha = 0.01) {
  const double c = std::sqrt(-0.5 * std::log(0.5 * alpha));
  const double n = static_cast<double>(na), m = static_cast<double>(nb);
  return c * std::sqrt((n + m) / (n * m));
}

struct SampleStats {
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  std::size_t count = 0;
};

inline SampleStats sampleStats(std::span<const double> v) {
  SampleStats s;
  s.count = v.size();
  if (v.empty()) return s;
  const double n = static_cast<double>(v.size());
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double m2 = 0.0, m3 = 0.0;
  for (double x : v) {
    const double d = x - s.mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  s.variance = v.size() > 1 ? m2 * n / (n - 1.0) : 0.0;
  s.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  return s;
}

inline unsigned defaultThreads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

/// Runs body(i) for i in [0, count) on up to `threads` workers. Work items
/// are claimed dynamically; the first exception is rethrown after joining.
template <class Body>
void parallelFor(std::size_t count, unsigned threads, Body&& body) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failureMutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failureMutex);
        if (!failure) failure = std::current_exception();
        next = count;
        return;
      }
    }
  };
  std::vector<std::jthread> pool;
  const auto n = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace rosenlab
