#pragma once

// The acceptance suite: twelve numbered criteria, each a self-contained run
// returning pass/fail plus the measured numbers behind the verdict.

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "charfn.hpp"
#include "core.hpp"
#include "loctime.hpp"
#include "oracles.hpp"
#include "rng.hpp"
#include "simulate.hpp"
#include "spectrum.hpp"

namespace rosenlab {

enum class Budget { Desk, Thorough };

inline std::string_view toString(Budget b) { return b == Budget::Desk ? "desk" : "thorough"; }

inline Budget parseBudget(std::string_view s) {
  if (s == "desk") return Budget::Desk;
  if (s == "thorough") return Budget::Thorough;
  throw Error(ErrorCode::InvalidArgument, "budget must be desk or thorough");
}

struct SuiteOptions {
  /// Used by the criteria that run at a single Hurst index.
  Hurst hurst{0.7};
  std::uint64_t seed = 42;
  unsigned threads = 1;
  Budget budget = Budget::Desk;
};

struct CriterionResult {
  int id = 0;
  std::string key;
  std::string title;
  bool passed = false;
  std::string summary;
  std::string error;
  nlohmann::json details = nlohmann::json::object();
  double seconds = 0.0;
};

/// Paths shared between criteria within one suite run.
class PathCache {
 public:
  const std::vector<PathSample>& get(const Hurst& h, std::size_t steps, std::size_t nPaths, std::uint64_t seed,
                                     unsigned threads) {
    const auto key = std::make_tuple(h.value(), steps, nPaths, seed);
    std::lock_guard lock(mutex_);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      const PathSimulator sim(h, steps);
      it = cache_.emplace(key, samplePaths(sim, nPaths, seed, threads)).first;
    }
    return it->second;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<double, std::size_t, std::size_t, std::uint64_t>, std::vector<PathSample>> cache_;
};

struct SuiteContext {
  SuiteOptions options;
  PathCache paths;
};

struct CriterionSpec {
  int id;
  std::string key;
  std::string title;
  /// Least budget under which the criterion runs at its stated scale.
  Budget budget;
  std::function<CriterionResult(SuiteContext&)> run;
};

namespace detail {

/// splitmix64 step; derives independent per-criterion seeds from the master seed.
inline std::uint64_t mixSeed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::string fmt(double v, int prec = 4) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

inline std::vector<double> geometricGrid(double lo, double ratio, std::size_t count) {
  std::vector<double> g;
  for (std::size_t i = 0; i < count; ++i) g.push_back(lo * std::pow(ratio, static_cast<double>(i)));
  return g;
}

// 1. Riesz-operator eigenvalue decay over k in [10, 100].
inline CriterionResult dostanic(SuiteContext&) {
  CriterionResult r;
  r.passed = true;
  std::ostringstream os;
  for (double alpha : {0.3, 0.35, 0.45}) {
    for (auto rule : {RieszQuadrature::Galerkin, RieszQuadrature::Midpoint}) {
      const Spectrum s = eigRiesz(RieszKernelOperator::normalized(alpha, -1.0, 1.0, 800, rule));
      const DecayFit f = fitDecayExponent(s, 10, 100);
      const bool ok = std::abs(f.slope + alpha) <= 0.05;
      r.passed = r.passed && ok;
      const std::string name = rule == RieszQuadrature::Galerkin ? "galerkin" : "midpoint";
      r.details[name][fmt(alpha, 3)] = {{"slope", f.slope}, {"stderr", f.stderr_}, {"pass", ok}};
      if (rule == RieszQuadrature::Galerkin) os << "a=" << alpha << ": " << fmt(f.slope) << "  ";
    }
  }
  r.summary = os.str() + "(target -a +/- 0.05, both rules)";
  return r;
}

// 2. mu_k([0,b]) = b^{2 alpha} mu_k([0,1]) for k <= 20.
inline CriterionResult scalingLaw(SuiteContext& ctx) {
  CriterionResult r;
  const double alpha = ctx.options.hurst.alpha();
  const Spectrum unit = eigTimeDomain(StepProfile::singleInterval(1.0), alpha, 800);
  double worst = 0.0;
  for (double b : {0.25, 0.5, 2.0}) {
    const Spectrum s = eigTimeDomain(StepProfile::singleInterval(b), alpha, 800);
    double dev = 0.0;
    for (std::size_t k = 0; k < 20; ++k) {
      dev = std::max(dev, std::abs(s.singularValues[k] / unit.singularValues[k] / std::pow(b, 2.0 * alpha) - 1.0));
    }
    r.details[fmt(b, 3)] = dev;
    worst = std::max(worst, dev);
  }
  r.passed = worst <= 0.01;
  r.summary = "max relative deviation " + fmt(worst, 3) + " (tol 1e-2), alpha " + fmt(alpha, 3);
  return r;
}

// 3. Closed form vs brute force for the sphere-simplex integral.
inline CriterionResult alkuIdentity(SuiteContext& ctx) {
  CriterionResult r;
  r.passed = true;
  AlkuBudget budget;
  budget.threads = ctx.options.threads;
  budget.seed = mixSeed(ctx.options.seed, 3);
  double worst1 = 0.0, worst2 = 0.0, worst3 = 0.0, worstBar3 = 0.0;
  auto record = [&](const AlkuParams& p, const OracleValue& bf, double cf, double rel) {
    nlohmann::json j = {{"n", p.n},         {"H", p.hurst},   {"gammas", p.gammas},
                        {"closed", cf},     {"brute", bf.value}, {"error", bf.errorEstimate},
                        {"relative", rel}};
    r.details["cases"].push_back(j);
  };
  for (double h : {0.55, 0.6, 0.7, 0.85}) {
    for (double g : {0.0, 0.1}) {
      const AlkuParams p(1, h, {g});
      const auto bf = alkuBruteForce(p, budget);
      const double cf = alkuClosedForm(p);
      const double exact = 2.0 / (1.0 - h * (1.0 + g));
      const double rel = std::max(std::abs(bf.value / exact - 1.0), std::abs(cf / exact - 1.0));
      worst1 = std::max(worst1, rel);
      record(p, bf, cf, rel);
    }
  }
  const std::vector<std::vector<double>> gammas2{{0.0, 0.0}, {0.0, 0.1}, {0.05, 0.05}};
  for (double h : {0.55, 0.6, 0.7, 0.85}) {
    for (const auto& g : gammas2) {
      const AlkuParams p(2, h, g);
      const auto bf = alkuBruteForce(p, budget);
      const double cf = alkuClosedForm(p);
      const double rel = std::abs(bf.value / cf - 1.0);
      worst2 = std::max(worst2, rel);
      record(p, bf, cf, rel);
    }
  }
  const std::vector<std::pair<double, std::vector<double>>> cases3{
      {0.55, {0, 0, 0}}, {0.6, {0, 0, 0}}, {0.6, {0, 0.05, 0.1}}, {0.7, {0, 0, 0}}, {0.7, {0, 0.05, 0.1}},
      {0.85, {0, 0, 0}}};
  for (const auto& [h, g] : cases3) {
    const AlkuParams p(3, h, g);
    const auto bf = alkuBruteForce(p, budget);
    const double cf = alkuClosedForm(p);
    const double rel = std::abs(bf.value / cf - 1.0);
    worst3 = std::max(worst3, rel);
    worstBar3 = std::max(worstBar3, bf.errorEstimate / cf);
    record(p, bf, cf, rel);
  }
  r.passed = worst1 <= 1e-12 && worst2 <= 1e-3 && worst3 <= 0.01 && worstBar3 <= 0.01;
  r.summary = "n=1 " + fmt(worst1, 2) + ", n=2 " + fmt(worst2, 2) + " (tol 1e-3), n=3 " + fmt(worst3, 2) +
              " with error bar " + fmt(worstBar3, 2) + " (tol 1e-2)";
  return r;
}

// 4. Product formula against 10^6 marginal samples.
inline CriterionResult productFormula(SuiteContext& ctx) {
  CriterionResult r;
  r.passed = true;
  double worst = 0.0;
  std::uint64_t salt = 40;
  for (double hv : {0.6, 0.7, 0.85}) {
    const Hurst h(hv);
    const Spectrum spec = rosenblattSpectrum(h, StepProfile::singleInterval(1.0), 800);
    const MarginalSampler ms(spec);
    const auto z = sampleMarginalParallel(ms, mixSeed(ctx.options.seed, salt++), 1000000, ctx.options.threads);
    for (double xi : {0.5, 1.0, 2.0}) {
      const double exact = charModulusAt(spec, xi);
      const EmpiricalCharFn emp = empiricalCharModulus(z, xi);
      const double sigmas = std::abs(emp.modulus - exact) / emp.standardError;
      worst = std::max(worst, sigmas);
      r.details["cases"].push_back(
          {{"H", hv}, {"xi", xi}, {"product", exact}, {"empirical", emp.modulus}, {"stderr", emp.standardError},
           {"sigmas", sigmas}});
      r.passed = r.passed && sigmas <= 3.0;
    }
  }
  r.summary = "largest deviation " + fmt(worst, 3) + " standard errors (tol 3)";
  return r;
}

// 5. U-scaling of the Fourier integral, n = 1 and n = 2.
inline CriterionResult fourierScaling(SuiteContext& ctx) {
  CriterionResult r;
  r.passed = true;
  std::ostringstream os;
  for (auto [hv, eta] : std::vector<std::pair<double, double>>{{0.7, 0.0}, {0.7, 0.1}, {0.85, 0.0}}) {
    const auto rep = verifyFourierBound(Hurst(hv), 1, eta);
    r.passed = r.passed && rep.passed;
    r.details["n1"].push_back({{"H", hv}, {"eta", eta}, {"slope", rep.slope}, {"expected", rep.expectedSlope},
                               {"integrals", rep.integrals}, {"finite", rep.finite}, {"pass", rep.passed}});
    os << "n=1 (" << hv << "," << eta << "): " << fmt(rep.slope) << "  ";
  }
  FourierBoundOptions opt;
  opt.nodes = ctx.options.budget == Budget::Thorough ? 400 : 96;
  opt.threads = ctx.options.threads;
  const auto rep = verifyFourierBound(ctx.options.hurst, 2, 0.0, opt);
  r.passed = r.passed && rep.passed;
  r.details["n2"] = {{"H", ctx.options.hurst.value()}, {"nodes", opt.nodes},          {"slope", rep.slope},
                     {"expected", rep.expectedSlope},   {"integrals", rep.integrals}, {"coarse", rep.coarseIntegrals},
                     {"finite", rep.finite},            {"pass", rep.passed}};
  os << "n=2: " << fmt(rep.slope) << " (target " << fmt(rep.expectedSlope) << ", finite " << rep.finite << ")";
  r.summary = os.str();
  return r;
}

/// Random profile with 1 to 3 intervals inside (0,1], intervals at least 0.05
/// long and levels in [-1,1] away from 0.
inline StepProfile randomProfile(RngStream& rng) {
  const int n = 1 + static_cast<int>(rng.uniform() * 3.0);
  for (;;) {
    std::vector<double> t(static_cast<std::size_t>(n));
    for (double& x : t) x = 0.05 + 0.95 * rng.uniform();
    std::sort(t.begin(), t.end());
    bool ok = true;
    double prev = 0.0;
    for (double x : t) {
      ok = ok && x - prev >= 0.05;
      prev = x;
    }
    if (!ok) continue;
    std::vector<double> levels(static_cast<std::size_t>(n));
    for (double& l : levels) {
      const double m = 0.1 + 0.9 * rng.uniform();
      l = rng.uniform() < 0.5 ? -m : m;
    }
    return StepProfile::fromLevels(std::move(t), levels);
  }
}

// 6. Singular-value lower bound over random profiles.
inline CriterionResult lowerBound(SuiteContext& ctx) {
  CriterionResult r;
  RngStream rng(mixSeed(ctx.options.seed, 6), 0);
  const Hurst h = ctx.options.hurst;
  double minCoarse = std::numeric_limits<double>::infinity(), minFine = minCoarse;
  for (int i = 0; i < 50; ++i) {
    const StepProfile p = randomProfile(rng);
    const auto coarse = verifyLowerBound(p, h, 30, 200);
    const auto fine = verifyLowerBound(p, h, 30, 400);
    minCoarse = std::min(minCoarse, coarse.minRatio);
    minFine = std::min(minFine, fine.minRatio);
    r.details["profiles"].push_back(
        {{"times", p.times()}, {"levels", p.levels()}, {"min200", coarse.minRatio}, {"min400", fine.minRatio}});
  }
  const double drift = std::abs(minFine / minCoarse - 1.0);
  r.passed = minFine > 0.0 && minCoarse > 0.0 && drift <= 0.2;
  r.details["min200"] = minCoarse;
  r.details["min400"] = minFine;
  r.summary = "min ratio " + fmt(minFine) + " at 400 nodes, " + fmt(minCoarse) + " at 200 (drift " + fmt(drift, 3) +
              ", tol 0.2)";
  return r;
}

// 7. Gamma-weighted moments of G.
inline CriterionResult gammaBound(SuiteContext& ctx) {
  CriterionResult r;
  const Gfunction g(ctx.options.hurst);
  const auto rep = verifyGammaBound(g, {1.0, 2.0, 4.0, 8.0});
  r.passed = rep.passed;
  r.details = {{"betas", rep.betas}, {"integrals", rep.integrals}, {"c3", rep.c3}, {"spread", rep.spread}};
  r.summary = "c3 spread " + fmt(rep.spread) + " (tol < 2), finite " + (rep.finite ? "yes" : "no");
  return r;
}

inline constexpr std::size_t kMomentPaths = 500;
inline constexpr std::size_t kMomentSteps = std::size_t{1} << 14;

// 8. Local-time moment scaling.
inline CriterionResult momentScaling(SuiteContext& ctx) {
  CriterionResult r;
  r.passed = true;
  const auto hGrid = geometricGrid(std::ldexp(1.0, -9), 2.0, 8);
  std::ostringstream os;
  for (auto [hv, n] : std::vector<std::pair<double, int>>{{0.7, 1}, {0.7, 2}, {0.85, 1}}) {
    const Hurst h(hv);
    const auto& paths = ctx.paths.get(h, kMomentSteps, kMomentPaths, mixSeed(ctx.options.seed, 8), ctx.options.threads);
    MomentScalingOptions opt;
    opt.threads = ctx.options.threads;
    const auto rep = verifyMomentScaling(paths, h, n, hGrid, opt);
    r.passed = r.passed && rep.passed;
    r.details["cases"].push_back({{"H", hv},
                                  {"n", n},
                                  {"slope", rep.slope},
                                  {"stderr", rep.slopeStderr},
                                  {"expected", rep.expectedSlope},
                                  {"moments", rep.moments},
                                  {"pass", rep.passed}});
    os << "(" << hv << "," << n << "): " << fmt(rep.slope, 3) << " vs " << fmt(rep.expectedSlope, 3) << "  ";
  }
  r.summary = os.str() + "(accepted [-0.1, +0.15])";
  return r;
}

// 9. Space-increment scaling at gamma = 0.15.
inline CriterionResult spaceHolder(SuiteContext& ctx) {
  CriterionResult r;
  const Hurst h = ctx.options.hurst;
  const auto& paths = ctx.paths.get(h, kMomentSteps, kMomentPaths, mixSeed(ctx.options.seed, 8), ctx.options.threads);
  SpaceHolderOptions opt;
  opt.threads = ctx.options.threads;
  const double gamma = std::min(0.15, 0.9 * h.holderSpaceLimit());
  const auto rep = verifySpaceHolder(paths, h, gamma, geometricGrid(0.01, 2.0, 5), opt);
  r.passed = rep.passed;
  r.details = {{"gamma", gamma}, {"slope", rep.slope}, {"stderr", rep.slopeStderr}, {"moments", rep.moments}};
  r.summary = "slope " + fmt(rep.slope, 3) + " >= gamma - 0.1 = " + fmt(gamma - 0.1, 3);
  return r;
}

// 10. Exponential tail of sup increments and its h^{-H} scaling.
inline CriterionResult supTail(SuiteContext& ctx) {
  CriterionResult r;
  const Hurst h = ctx.options.hurst;
  const auto& paths = ctx.paths.get(h, kMomentSteps, kMomentPaths, mixSeed(ctx.options.seed, 8), ctx.options.threads);
  const double h1 = 0.125, h2 = 0.0625;
  auto grid = [&](double len) {
    std::vector<double> u;
    for (double c : {1.0, 1.5, 2.0, 2.5, 3.0}) u.push_back(c * std::pow(len, h.value()));
    return u;
  };
  const auto a = verifySupTail(paths, h1, grid(h1));
  const auto b = verifySupTail(paths, h2, grid(h2));
  const double ratio = b.slope / a.slope;
  const double target = std::pow(2.0, h.value());
  const double dev = std::abs(ratio / target - 1.0);
  r.passed = a.passed && b.passed && dev <= 0.15;
  r.details = {{"h", {h1, h2}},
               {"slopes", {a.slope, b.slope}},
               {"rSquared", {a.rSquared, b.rSquared}},
               {"ratio", ratio},
               {"target", target},
               {"exceedances", {a.exceedances, b.exceedances}}};
  r.summary = "R2 " + fmt(a.rSquared, 3) + "/" + fmt(b.rSquared, 3) + ", slope ratio " + fmt(ratio, 4) + " vs 2^H " +
              fmt(target, 4) + " (dev " + fmt(dev, 2) + ", tol 0.15)";
  return r;
}

// 11. Histogram against Fourier inversion, and exact histogram mass.
inline CriterionResult estimatorConsistency(SuiteContext& ctx) {
  CriterionResult r;
  const Hurst h = ctx.options.hurst;
  const auto& paths = ctx.paths.get(h, kMomentSteps, kMomentPaths, mixSeed(ctx.options.seed, 8), ctx.options.threads);
  FourierOptions fo;
  fo.binAveraged = true;
  const double bin = 0.02, cutoff = 2000.0;
  double worstL2 = 0.0, worstMass = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    const auto hist = localTimeHistogram(paths[i], 0.0, 1.0, bin);
    const auto four = localTimeFourier(paths[i], 0.0, 1.0, hist.xGrid, cutoff, fo);
    worstL2 = std::max(worstL2, relativeL2(hist, four));
    worstMass = std::max(worstMass, std::abs(hist.totalMass() - 1.0));
  }
  // Linear path Z_t = t: density 1 on [0,1].
  std::vector<double> lin(1025);
  for (std::size_t i = 0; i < lin.size(); ++i) lin[i] = static_cast<double>(i) / 1024.0;
  const auto linear = PathSample::injected(1.0 / 1024.0, lin, h);
  const auto lh = localTimeHistogram(linear, 0.0, 1.0, bin);
  const auto lf = localTimeFourier(linear, 0.0, 1.0, lh.xGrid, cutoff, fo);
  const double linL2 = relativeL2(lh, lf);
  worstMass = std::max(worstMass, std::abs(lh.totalMass() - 1.0));
  r.passed = worstL2 <= 0.05 && linL2 <= 0.05 && worstMass <= 1e-12;
  r.details = {{"rosenblattL2", worstL2}, {"linearL2", linL2}, {"massError", worstMass}, {"cutoff", cutoff}, {"bin", bin}};
  r.summary = "L2 " + fmt(worstL2, 3) + " (5 paths), " + fmt(linL2, 3) + " (linear), tol 0.05; mass error " +
              fmt(worstMass, 2);
  return r;
}

// 12. Oscillation floor: positive for Rosenblatt paths, vanishing for a line.
inline CriterionResult irregularity(SuiteContext& ctx) {
  CriterionResult r;
  const Hurst h = ctx.options.hurst;
  const std::size_t steps = std::size_t{1} << 15;
  const auto& paths = ctx.paths.get(h, steps, 100, mixSeed(ctx.options.seed, 12), ctx.options.threads);
  const auto rGrid = geometricGrid(std::ldexp(1.0, -10), 2.0, 6);
  std::vector<double> sGrid;
  for (int i = 1; i < 32; ++i) sGrid.push_back(i / 32.0);
  const auto rosen = irregularityFloor(paths, sGrid, rGrid, ctx.options.threads);
  std::vector<double> lin(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) lin[i] = static_cast<double>(i) / static_cast<double>(steps);
  const std::vector<PathSample> line{PathSample::injected(1.0 / static_cast<double>(steps), lin, h)};
  const auto control = irregularityFloor(line, sGrid, rGrid);
  r.passed = rosen.floorMaintained && !control.floorMaintained;
  r.details = {{"rGrid", rGrid},
               {"rosenblattMedianFloor", rosen.medianFloor},
               {"rosenblattSlope", rosen.slope},
               {"linearFloor", control.medianFloor},
               {"linearSlope", control.slope},
               {"maxSlope", rosen.maxSlope}};
  r.summary = "Rosenblatt floor slope " + fmt(rosen.slope, 3) + ", linear " + fmt(control.slope, 3) +
              " (floor kept iff slope < " + fmt(rosen.maxSlope, 3) + ")";
  return r;
}

}  // namespace detail

inline const std::vector<CriterionSpec>& acceptanceCriteria() {
  static const std::vector<CriterionSpec> all{
      {1, "dostanic", "Riesz eigenvalue decay", Budget::Desk, detail::dostanic},
      {2, "scaling", "Interval scaling of singular values", Budget::Desk, detail::scalingLaw},
      {3, "alku", "Sphere-simplex Gamma identity", Budget::Desk, detail::alkuIdentity},
      {4, "product-formula", "Characteristic-function product formula", Budget::Desk, detail::productFormula},
      {5, "fourier-bound", "Fourier integral U-scaling", Budget::Desk, detail::fourierScaling},
      {6, "lower-bound", "Singular-value lower bound", Budget::Desk, detail::lowerBound},
      {7, "gamma-bound", "Gamma moments of G", Budget::Desk, detail::gammaBound},
      {8, "moment-scaling", "Local-time moment scaling", Budget::Desk, detail::momentScaling},
      {9, "space-holder", "Local-time space regularity", Budget::Desk, detail::spaceHolder},
      {10, "sup-tail", "Sup-increment tail", Budget::Desk, detail::supTail},
      {11, "estimator", "Local-time estimator consistency", Budget::Desk, detail::estimatorConsistency},
      {12, "irregularity", "Oscillation floor and linear control", Budget::Desk, detail::irregularity},
  };
  return all;
}

inline CriterionResult runCriterion(const CriterionSpec& spec, SuiteContext& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = spec.run(ctx);
  } catch (const std::exception& e) {
    r = {};
    r.passed = false;
    r.error = e.what();
    r.summary = std::string("error: ") + e.what();
  }
  r.id = spec.id;
  r.key = spec.key;
  r.title = spec.title;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

/// Runs the selected criteria (all when `keys` is empty) in order.
inline std::vector<CriterionResult> runSuite(const SuiteOptions& opt, const std::vector<std::string>& keys = {},
                                             const std::function<void(const CriterionResult&)>& onResult = {}) {
  SuiteContext ctx{opt, {}};
  std::vector<CriterionResult> out;
  for (const auto& spec : acceptanceCriteria()) {
    if (!keys.empty() && std::find(keys.begin(), keys.end(), spec.key) == keys.end() &&
        std::find(keys.begin(), keys.end(), std::to_string(spec.id)) == keys.end()) {
      continue;
    }
    out.push_back(runCriterion(spec, ctx));
    if (onResult) onResult(out.back());
  }
  return out;
}

inline nlohmann::json toJson(const CriterionResult& r) {
  return {{"id", r.id},           {"key", r.key},         {"title", r.title},   {"passed", r.passed},
          {"summary", r.summary}, {"error", r.error},     {"seconds", r.seconds}, {"details", r.details}};
}

}  // namespace rosenlab
