#pragma once

// Rosenblatt marginals from the chi-squared expansion and sample paths from
// Hermite-rank-2 partial sums of fractional Gaussian noise.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "rosenlab/charfn.hpp"
#include "rosenlab/core.hpp"
#include "rosenlab/numerics.hpp"
#include "rosenlab/rng.hpp"

namespace rosenlab {

inline constexpr std::size_t kDefaultPathBudget = std::size_t{1} << 22;

/// Autocovariance of unit-variance fractional Gaussian noise with index hp.
inline double fgnCovariance(double hp, std::size_t k) {
  const double x = static_cast<double>(k);
  const double e = 2.0 * hp;
  return 0.5 * (std::pow(x + 1.0, e) - 2.0 * std::pow(x, e) + std::pow(std::abs(x - 1.0), e));
}

namespace detail {

// FFTW planning is not thread-safe; execution on distinct buffers is.
inline std::mutex& fftwPlannerMutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {}
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

struct FftwPlan {
  fftw_plan plan = nullptr;
  ~FftwPlan() {
    std::lock_guard lock(fftwPlannerMutex());
    if (plan) fftw_destroy_plan(plan);
  }
};

}  // namespace detail

/// Exact fGn sampler by circulant embedding of the N x N covariance into a
/// 2N circulant matrix.
class FgnGenerator {
 public:
  FgnGenerator(double hurstPrime, std::size_t n) : hp_(hurstPrime), n_(n), m_(2 * n), plan_(std::make_shared<detail::FftwPlan>()) {
    require(hp_ > 0.5 && hp_ < 1.0, ErrorCode::InvalidArgument, "fGn index must lie in (1/2,1)");
    require(n_ >= 2, ErrorCode::InvalidArgument, "fGn grid needs at least two points");
    detail::FftwBuffer row(m_), spec(m_);
    for (std::size_t k = 0; k < m_; ++k) {
      const std::size_t lag = k <= n_ ? k : m_ - k;
      row.data[k][0] = fgnCovariance(hp_, lag);
      row.data[k][1] = 0.0;
    }
    {
      std::lock_guard lock(detail::fftwPlannerMutex());
      fftw_plan p = fftw_plan_dft_1d(static_cast<int>(m_), row.data, spec.data, FFTW_FORWARD, FFTW_ESTIMATE);
      fftw_execute(p);
      fftw_destroy_plan(p);
      detail::FftwBuffer probe(m_);
      plan_->plan = fftw_plan_dft_1d(static_cast<int>(m_), probe.data, probe.data, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    eig_.resize(m_);
    double maxEig = 0.0, minEig = 0.0;
    for (std::size_t k = 0; k < m_; ++k) {
      eig_[k] = spec.data[k][0];
      maxEig = std::max(maxEig, eig_[k]);
      minEig = std::min(minEig, eig_[k]);
    }
    require(-minEig <= 1e-10 * maxEig, ErrorCode::EmbeddingError,
            "circulant embedding has eigenvalue " + std::to_string(minEig));
    for (double& e : eig_) e = std::max(e, 0.0);
    scale_.resize(m_);
    for (std::size_t k = 0; k < m_; ++k) scale_[k] = std::sqrt(eig_[k] / static_cast<double>(m_));
  }

  double hurstPrime() const noexcept { return hp_; }
  std::size_t size() const noexcept { return n_; }
  const std::vector<double>& circulantEigenvalues() const noexcept { return eig_; }

  /// One fGn sample of length N (the real part of the embedded field).
  std::vector<double> sample(RngStream& rng) const {
    detail::FftwBuffer buf(m_);
    for (std::size_t k = 0; k < m_; ++k) {
      buf.data[k][0] = scale_[k] * rng.normal();
      buf.data[k][1] = scale_[k] * rng.normal();
    }
    fftw_execute_dft(plan_->plan, buf.data, buf.data);
    std::vector<double> out(n_);
    for (std::size_t k = 0; k < n_; ++k) out[k] = buf.data[k][0];
    return out;
  }

 private:
  double hp_;
  std::size_t n_;
  std::size_t m_;
  std::vector<double> eig_;
  std::vector<double> scale_;
  std::shared_ptr<detail::FftwPlan> plan_;
};

/// Variance of sum_{j < n} (X_j^2 - 1) for unit fGn X with index hp:
/// 2 sum_{j,k} gamma(j-k)^2.
inline double hermiteSumVariance(double hp, std::size_t n) {
  double s = static_cast<double>(n);
  for (std::size_t k = 1; k < n; ++k) {
    const double g = fgnCovariance(hp, k);
    s += 2.0 * static_cast<double>(n - k) * g * g;
  }
  return 2.0 * s;
}

/// Generates Z_{t_i} = d_N sum_{j < i m} (X_j^2 - 1) on t_i = i T / nSteps.
class PathSimulator {
 public:
  PathSimulator(const Hurst& h, std::size_t nSteps, double horizon = 1.0, std::size_t internalFactor = 16,
                std::size_t budget = kDefaultPathBudget)
      : hurst_(h), nSteps_(nSteps), horizon_(horizon), factor_(internalFactor) {
    require(nSteps >= 1 && internalFactor >= 1, ErrorCode::InvalidArgument, "steps and internal factor must be positive");
    require(horizon > 0.0, ErrorCode::InvalidArgument, "horizon must be positive");
    require(nSteps * internalFactor <= budget, ErrorCode::BudgetExceeded,
            "fine grid of " + std::to_string(nSteps * internalFactor) + " points exceeds the budget");
    const std::size_t fine = nSteps * internalFactor;
    fgn_ = std::make_shared<FgnGenerator>(h.noiseHurst(), fine);
    // Var Z_T = T^{2H} exactly at this N.
    normalization_ = std::pow(horizon, h.value()) / std::sqrt(hermiteSumVariance(h.noiseHurst(), fine));
  }

  const Hurst& hurst() const noexcept { return hurst_; }
  std::size_t steps() const noexcept { return nSteps_; }
  double dt() const noexcept { return horizon_ / static_cast<double>(nSteps_); }
  double normalization() const noexcept { return normalization_; }
  const FgnGenerator& generator() const noexcept { return *fgn_; }

  PathSample sample(RngStream& rng) const {
    const std::vector<double> x = fgn_->sample(rng);
    std::vector<double> z(nSteps_ + 1, 0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < nSteps_; ++i) {
      for (std::size_t j = i * factor_; j < (i + 1) * factor_; ++j) acc += x[j] * x[j] - 1.0;
      z[i + 1] = normalization_ * acc;
    }
    return PathSample(dt(), std::move(z), hurst_, rng.seed(), PathGenerator::Hermite2Fgn);
  }

 private:
  Hurst hurst_;
  std::size_t nSteps_;
  double horizon_;
  std::size_t factor_;
  double normalization_ = 0.0;
  std::shared_ptr<FgnGenerator> fgn_;
};

inline PathSample samplePath(const Hurst& h, std::size_t nSteps, double horizon, RngStream& rng,
                             std::size_t internalFactor = 16, std::size_t budget = kDefaultPathBudget) {
  return PathSimulator(h, nSteps, horizon, internalFactor, budget).sample(rng);
}

/// nPaths paths, path i drawn from stream i of masterSeed; the result does
/// not depend on the thread count.
inline std::vector<PathSample> samplePaths(const PathSimulator& sim, std::size_t nPaths, std::uint64_t masterSeed,
                                           unsigned threads = 1) {
  auto streams = makeRngStreams(masterSeed, nPaths);
  std::vector<std::vector<double>> values(nPaths);
  parallelFor(nPaths, threads, [&](std::size_t i) { values[i] = sim.sample(streams[i]).values; });
  std::vector<PathSample> out;
  out.reserve(nPaths);
  for (auto& v : values) out.emplace_back(sim.dt(), std::move(v), sim.hurst(), masterSeed, PathGenerator::Hermite2Fgn);
  return out;
}

/// Draws sum_{k <= K} lambda_k (X_k^2 - 1) + sqrt(2 v_tail) N.
class MarginalSampler {
 public:
  explicit MarginalSampler(const Spectrum& spec, std::size_t maxTerms = 200) {
    const std::size_t k = std::min(maxTerms, spec.size());
    lambda_.assign(spec.eigenvalues.begin(), spec.eigenvalues.begin() + static_cast<std::ptrdiff_t>(k));
    tailVariance_ = spec.tailSumSquares;
    for (std::size_t i = k; i < spec.size(); ++i) tailVariance_ += spec.eigenvalues[i] * spec.eigenvalues[i];
  }

  const std::vector<double>& lambda() const noexcept { return lambda_; }
  std::size_t terms() const noexcept { return lambda_.size(); }
  double tailVariance() const noexcept { return tailVariance_; }

  /// 2 (sum_{k <= K} lambda_k^2 + v_tail).
  double variance() const noexcept {
    double s = tailVariance_;
    for (double l : lambda_) s += l * l;
    return 2.0 * s;
  }

  double draw(RngStream& rng) const {
    double z = 0.0;
    for (double l : lambda_) {
      const double x = rng.normal();
      z += l * (x * x - 1.0);
    }
    return z + std::sqrt(2.0 * tailVariance_) * rng.normal();
  }

 private:
  std::vector<double> lambda_;
  double tailVariance_ = 0.0;
};

inline std::vector<double> sampleMarginal(const MarginalSampler& ms, RngStream& rng, std::size_t count) {
  require(count >= 1, ErrorCode::InvalidArgument, "sample count must be positive");
  std::vector<double> out(count);
  for (double& z : out) z = ms.draw(rng);
  return out;
}

/// Splits `count` draws over independent streams of masterSeed, in blocks
/// of fixed size so the output does not depend on the thread count.
inline std::vector<double> sampleMarginalParallel(const MarginalSampler& ms, std::uint64_t masterSeed, std::size_t count,
                                                  unsigned threads = 1, std::size_t block = 1 << 16) {
  require(count >= 1, ErrorCode::InvalidArgument, "sample count must be positive");
  const std::size_t blocks = (count + block - 1) / block;
  std::vector<double> out(count);
  parallelFor(blocks, threads, [&](std::size_t b) {
    RngStream rng(masterSeed, b);
    for (std::size_t i = b * block; i < std::min(count, (b + 1) * block); ++i) out[i] = ms.draw(rng);
  });
  return out;
}

struct EmpiricalCharFn {
  double modulus = 0.0;
  double standardError = 0.0;
};

/// |mean exp(i xi Z)| with the standard error of the projection on its phase.
inline EmpiricalCharFn empiricalCharModulus(std::span<const double> z, double xi) {
  double c = 0.0, s = 0.0;
  for (double v : z) {
    c += std::cos(xi * v);
    s += std::sin(xi * v);
  }
  const double n = static_cast<double>(z.size());
  c /= n;
  s /= n;
  const double mod = std::hypot(c, s);
  const double ux = mod > 0.0 ? c / mod : 1.0, uy = mod > 0.0 ? s / mod : 0.0;
  double var = 0.0;
  for (double v : z) {
    const double p = ux * std::cos(xi * v) + uy * std::sin(xi * v) - mod;
    var += p * p;
  }
  var /= (n - 1.0);
  return {mod, std::sqrt(var / n)};
}

struct SupTailReport {
  double h = 1.0;
  std::vector<double> uGrid;
  std::vector<double> probability;
  std::vector<std::size_t> exceedances;
  std::size_t windows = 0;
  /// Fit of log P against u.
  double slope = 0.0;
  double rSquared = 0.0;
  bool passed = false;
};

/// Window statistics sup_{t in [s, s+h]} |Z_t - Z_s| over disjoint windows
/// [s, s+h] of each path.
inline std::vector<double> supIncrements(const std::vector<PathSample>& paths, double h) {
  std::vector<double> out;
  for (const PathSample& p : paths) {
    const auto w = static_cast<std::size_t>(std::llround(h / p.dt));
    require(w >= 10, ErrorCode::ResolutionError, "window shorter than 10 grid steps");
    for (std::size_t s = 0; s + w <= p.steps(); s += w) {
      double m = 0.0;
      for (std::size_t t = s; t <= s + w; ++t) m = std::max(m, std::abs(p.values[t] - p.values[s]));
      out.push_back(m);
    }
  }
  return out;
}

/// Exponential-tail check for sup increments: log P(sup >= u) linear in u.
inline SupTailReport verifySupTail(const std::vector<PathSample>& paths, double h, const std::vector<double>& uGrid,
                                   std::size_t minExceedances = 50) {
  require(!paths.empty(), ErrorCode::InvalidArgument, "no paths");
  require(h > 0.0 && h <= paths.front().horizon() + 1e-12, ErrorCode::InvalidArgument, "h must lie in (0, horizon]");
  const std::vector<double> sups = supIncrements(paths, h);
  SupTailReport rep;
  rep.h = h;
  rep.uGrid = uGrid;
  rep.windows = sups.size();
  std::vector<double> x, y;
  for (double u : uGrid) {
    std::size_t c = 0;
    for (double v : sups) c += v >= u;
    rep.exceedances.push_back(c);
    rep.probability.push_back(static_cast<double>(c) / static_cast<double>(sups.size()));
    if (u > 0.0 && c > 0) {
      x.push_back(u);
      y.push_back(std::log(rep.probability.back()));
    }
  }
  require(!rep.exceedances.empty() && rep.exceedances.back() >= minExceedances, ErrorCode::InsufficientTailEvents,
          "only " + std::to_string(rep.exceedances.empty() ? 0 : rep.exceedances.back()) +
              " exceedances at the largest u");
  const LinearFit fit = fitLine(x, y);
  rep.slope = fit.slope;
  rep.rSquared = fit.rSquared;
  rep.passed = fit.rSquared > 0.95 && fit.slope < 0.0;
  return rep;
}

struct ExpMomentReport {
  std::vector<double> etas;
  std::vector<double> estimate;        // from all samples
  std::vector<double> halfEstimate;    // from the first half
  std::vector<double> maxTermShare;    // largest single term / sum
  std::vector<bool> divergent;
  double lambda1 = 0.0;
};

/// Monte Carlo E exp(eta |Z_1|) at n/2 and n samples; an estimate is flagged
/// divergent when it moves more than 2% under doubling or one sample carries
/// more than 1% of the sum.
inline ExpMomentReport verifyExpMoment(const Spectrum& unitSpec, const std::vector<double>& etas, std::size_t nSamples,
                                       std::uint64_t seed, unsigned threads = 1) {
  require(nSamples >= 2, ErrorCode::InvalidArgument, "need at least two samples");
  const MarginalSampler ms(unitSpec);
  const std::vector<double> z = sampleMarginalParallel(ms, seed, nSamples, threads);
  ExpMomentReport rep;
  rep.etas = etas;
  rep.lambda1 = unitSpec.size() > 0 ? unitSpec.singularValues[0] : 0.0;
  const std::size_t half = nSamples / 2;
  for (double eta : etas) {
    require(eta >= 0.0, ErrorCode::InvalidArgument, "eta must be nonnegative");
    double sumHalf = 0.0, sum = 0.0, maxTerm = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      const double v = std::exp(eta * std::abs(z[i]));
      sum += v;
      if (i < half) sumHalf += v;
      maxTerm = std::max(maxTerm, v);
    }
    const double est = sum / static_cast<double>(z.size());
    const double estHalf = sumHalf / static_cast<double>(half);
    rep.estimate.push_back(est);
    rep.halfEstimate.push_back(estHalf);
    rep.maxTermShare.push_back(maxTerm / sum);
    rep.divergent.push_back(std::abs(est / estHalf - 1.0) > 0.02 || maxTerm / sum > 0.01);
  }
  return rep;
}

}  // namespace rosenlab
