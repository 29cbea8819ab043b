#pragma once

// Occupation densities of sampled paths and the scaling diagnostics built on
// them.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

#include <gsl/gsl_sf_expint.h>

#include "rosenlab/core.hpp"
#include "rosenlab/numerics.hpp"

namespace rosenlab {

namespace detail {

struct Segment {
  std::size_t index;  // value Z_{t_index} held on the segment
  double weight;      // time length
};

// Left-point segments [t_k, t_{k+1}) clipped to [a, b].
inline std::vector<Segment> segmentsIn(const PathSample& path, double a, double b) {
  require(a >= 0.0 && b > a && b <= path.horizon() * (1.0 + 1e-12), ErrorCode::InvalidArgument,
          "interval must lie inside the path horizon");
  const double dt = path.dt;
  const auto first = static_cast<std::size_t>(std::floor(a / dt + 1e-9));
  std::vector<Segment> out;
  for (std::size_t k = first; k < path.steps(); ++k) {
    const double lo = std::max(a, path.time(k));
    const double hi = std::min(b, path.time(k + 1));
    if (hi <= lo) {
      if (path.time(k) >= b) break;
      continue;
    }
    out.push_back({k, hi - lo});
  }
  return out;
}

inline std::size_t gridPointsIn(const PathSample& path, double a, double b) {
  const double lo = std::ceil(a / path.dt - 1e-9), hi = std::floor(b / path.dt + 1e-9);
  return hi >= lo ? static_cast<std::size_t>(hi - lo) + 1 : 0;
}

}  // namespace detail

/// Histogram occupation density: the path is held at Z_{t_k} on
/// [t_k, t_{k+1}), bins are [i w, (i+1) w).
inline LocalTimeEstimate localTimeHistogram(const PathSample& path, double a, double b, double binWidth) {
  require(binWidth > 0.0, ErrorCode::InvalidArgument, "bin width must be positive");
  require(detail::gridPointsIn(path, a, b) >= 2, ErrorCode::EmptyInterval, "fewer than 2 grid points in the interval");
  const auto segs = detail::segmentsIn(path, a, b);
  long long lo = 0, hi = 0;
  bool first = true;
  for (const auto& s : segs) {
    const auto i = static_cast<long long>(std::floor(path.values[s.index] / binWidth));
    lo = first ? i : std::min(lo, i);
    hi = first ? i : std::max(hi, i);
    first = false;
  }
  LocalTimeEstimate est;
  est.a = a;
  est.b = b;
  est.binWidth = binWidth;
  est.method = LocalTimeMethod::Histogram;
  const auto bins = static_cast<std::size_t>(hi - lo + 1);
  est.xGrid.resize(bins);
  for (std::size_t i = 0; i < bins; ++i) est.xGrid[i] = (static_cast<double>(lo + static_cast<long long>(i)) + 0.5) * binWidth;
  std::vector<double> occupation(bins, 0.0);
  for (const auto& s : segs) {
    const auto i = static_cast<long long>(std::floor(path.values[s.index] / binWidth));
    occupation[static_cast<std::size_t>(i - lo)] += s.weight;
  }
  est.density.resize(bins);
  for (std::size_t i = 0; i < bins; ++i) est.density[i] = occupation[i] / binWidth;
  return est;
}

struct FourierOptions {
  /// Average the inverted density over each grid cell instead of sampling it
  /// at the grid point (the comparison matched to a histogram of that width).
  bool binAveraged = false;
  /// Largest tolerated clipped mass relative to |I|.
  double clipTolerance = 0.05;
};

/// (1/2pi) int_{|xi| <= Xi} e^{i xi x} sum_k w_k e^{-i xi Z_k} dxi
///   = sum_k w_k sin(Xi (x - Z_k)) / (pi (x - Z_k)),
/// evaluated directly on the uniform grid; negatives are clipped to 0.
inline LocalTimeEstimate localTimeFourier(const PathSample& path, double a, double b, const std::vector<double>& xGrid,
                                          double cutoff, const FourierOptions& opt = {}) {
  require(cutoff > 0.0, ErrorCode::InvalidArgument, "cutoff must be positive");
  require(xGrid.size() >= 2, ErrorCode::InvalidArgument, "x grid needs at least two points");
  require(detail::gridPointsIn(path, a, b) >= 2, ErrorCode::EmptyInterval, "fewer than 2 grid points in the interval");
  const auto segs = detail::segmentsIn(path, a, b);
  LocalTimeEstimate est;
  est.a = a;
  est.b = b;
  est.binWidth = xGrid[1] - xGrid[0];
  est.xGrid = xGrid;
  est.method = LocalTimeMethod::Fourier;
  est.density.assign(xGrid.size(), 0.0);
  const double w = est.binWidth;
  for (std::size_t i = 0; i < xGrid.size(); ++i) {
    double acc = 0.0;
    for (const auto& s : segs) {
      const double u = xGrid[i] - path.values[s.index];
      if (opt.binAveraged) {
        acc += s.weight * (gsl_sf_Si(cutoff * (u + 0.5 * w)) - gsl_sf_Si(cutoff * (u - 0.5 * w))) / (std::numbers::pi * w);
      } else {
        const double k = std::abs(u) * cutoff < 1e-8 ? cutoff / std::numbers::pi
                                                     : std::sin(cutoff * u) / (std::numbers::pi * u);
        acc += s.weight * k;
      }
    }
    est.density[i] = acc;
  }
  for (double& d : est.density) {
    if (d < 0.0) {
      est.clippedMass += -d * w;
      d = 0.0;
    }
  }
  require(est.clippedMass <= opt.clipTolerance * (b - a), ErrorCode::CutoffTooLow,
          "clipped mass " + std::to_string(est.clippedMass) + " exceeds tolerance");
  return est;
}

/// Relative L2 difference of two estimates on the first one's grid.
inline double relativeL2(const LocalTimeEstimate& ref, const LocalTimeEstimate& other) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ref.xGrid.size(); ++i) {
    const double d = ref.density[i] - other.at(ref.xGrid[i]);
    num += d * d;
    den += ref.density[i] * ref.density[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

/// Occupation density at level x over [a, b]: time spent in
/// [x - w/2, x + w/2) divided by w.
inline double localTimeAt(const PathSample& path, double a, double b, double x, double binWidth) {
  double occ = 0.0;
  for (const auto& s : detail::segmentsIn(path, a, b)) {
    const double z = path.values[s.index];
    if (z >= x - 0.5 * binWidth && z < x + 0.5 * binWidth) occ += s.weight;
  }
  return occ / binWidth;
}

enum class ShiftMode { None, AtLevelZa };

struct ScalingReport {
  std::vector<double> grid;     // h (time) or |y| (space)
  std::vector<double> moments;  // averaged statistic per grid point
  double slope = 0.0;
  double slopeStderr = 0.0;
  double expectedSlope = 0.0;
  double lower = 0.0;  // accepted slope range
  double upper = 0.0;
  bool passed = false;
};

struct MomentScalingOptions {
  ShiftMode shift = ShiftMode::AtLevelZa;
  /// Level window width as a fraction of h^H.
  double binFraction = 0.05;
  /// Windows per path: [s, s+h] for s = 0, h, 2h, ... up to this many.
  std::size_t windowsPerPath = 16;
  unsigned threads = 1;
};

/// Fits log E L(x*, [s, s+h])^n against log h; the bound's exponent is (1-H) n.
inline ScalingReport verifyMomentScaling(const std::vector<PathSample>& paths, const Hurst& h, int nMoment,
                                         const std::vector<double>& hGrid, const MomentScalingOptions& opt = {}) {
  require(nMoment >= 1 && nMoment <= 4, ErrorCode::InvalidArgument, "moment order must lie in [1,4]");
  require(hGrid.size() >= 2, ErrorCode::InvalidArgument, "need at least two window lengths");
  require(!paths.empty(), ErrorCode::InvalidArgument, "no paths");
  const auto [hMin, hMax] = std::minmax_element(hGrid.begin(), hGrid.end());
  require(*hMax >= 10.0 * *hMin * (1.0 - 1e-12), ErrorCode::InvalidArgument, "window lengths must span a decade");
  const double H = h.value();
  ScalingReport rep;
  rep.grid = hGrid;
  rep.expectedSlope = (1.0 - H) * nMoment;
  rep.lower = rep.expectedSlope - 0.1;
  rep.upper = rep.expectedSlope + 0.15;
  for (double len : hGrid) {
    require(len >= 10.0 * paths.front().dt, ErrorCode::ResolutionError, "window shorter than 10 grid steps");
    const double w = opt.binFraction * std::pow(len, H);
    std::vector<double> sum(paths.size(), 0.0);
    std::vector<std::size_t> count(paths.size(), 0), visited(paths.size(), 0);
    parallelFor(paths.size(), opt.threads, [&](std::size_t p) {
      const PathSample& path = paths[p];
      for (std::size_t j = 0; j < opt.windowsPerPath; ++j) {
        const double s = static_cast<double>(j) * len;
        if (s + len > path.horizon() * (1.0 + 1e-12)) break;
        const auto is = static_cast<std::size_t>(std::llround(s / path.dt));
        const double level = opt.shift == ShiftMode::AtLevelZa ? path.values[is] : 0.0;
        const double l = localTimeAt(path, s, s + len, level, w);
        sum[p] += std::pow(l, nMoment);
        ++count[p];
        visited[p] += l > 0.0;
      }
    });
    double total = 0.0, n = 0.0, seen = 0.0;
    for (std::size_t p = 0; p < paths.size(); ++p) {
      total += sum[p];
      n += static_cast<double>(count[p]);
      seen += static_cast<double>(visited[p]);
    }
    require(n > 0.0 && seen >= 0.1 * n, ErrorCode::InsufficientOccupation,
            "level visited in fewer than 10% of windows at h = " + std::to_string(len));
    rep.moments.push_back(total / n);
  }
  const LinearFit fit = fitLogLog(rep.grid, rep.moments);
  rep.slope = fit.slope;
  rep.slopeStderr = fit.slopeStderr;
  rep.passed = rep.slope >= rep.lower && rep.slope <= rep.upper;
  return rep;
}

struct SpaceHolderOptions {
  /// Level window width as a fraction of the smallest |y|.
  double binFraction = 0.25;
  unsigned threads = 1;
};

/// Fits log E |L(y, [0,1]) - L(0, [0,1])| against log |y|; Hölder continuity
/// of order gamma in space needs slope >= gamma (0.1 slack).
inline ScalingReport verifySpaceHolder(const std::vector<PathSample>& paths, const Hurst& h, double gamma,
                                       const std::vector<double>& yGrid, const SpaceHolderOptions& opt = {}) {
  require(gamma > 0.0 && gamma < h.holderSpaceLimit(), ErrorCode::InvalidArgument,
          "gamma must lie in (0, (1-H)/(2H))");
  require(yGrid.size() >= 2, ErrorCode::InvalidArgument, "need at least two levels");
  require(!paths.empty(), ErrorCode::InvalidArgument, "no paths");
  const double yMin = *std::min_element(yGrid.begin(), yGrid.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  require(std::abs(yMin) > 0.0, ErrorCode::InvalidArgument, "levels must be nonzero");
  const double w = opt.binFraction * std::abs(yMin);
  const double T = std::min(1.0, paths.front().horizon());
  ScalingReport rep;
  for (double y : yGrid) rep.grid.push_back(std::abs(y));
  rep.expectedSlope = gamma;
  rep.lower = gamma - 0.1;
  rep.upper = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> diffs(paths.size(), std::vector<double>(yGrid.size(), 0.0));
  parallelFor(paths.size(), opt.threads, [&](std::size_t p) {
    const double l0 = localTimeAt(paths[p], 0.0, T, 0.0, w);
    for (std::size_t i = 0; i < yGrid.size(); ++i) {
      diffs[p][i] = std::abs(localTimeAt(paths[p], 0.0, T, yGrid[i], w) - l0);
    }
  });
  for (std::size_t i = 0; i < yGrid.size(); ++i) {
    double s = 0.0;
    for (const auto& d : diffs) s += d[i];
    rep.moments.push_back(s / static_cast<double>(paths.size()));
  }
  const LinearFit fit = fitLogLog(rep.grid, rep.moments);
  rep.slope = fit.slope;
  rep.slopeStderr = fit.slopeStderr;
  rep.passed = rep.slope >= rep.lower;
  return rep;
}

/// No monotone growth of the ratio as r decreases through the smallest
/// decade of the grid.
inline bool boundedOverLastDecade(const std::vector<double>& rGrid, const std::vector<double>& ratios) {
  std::vector<std::size_t> idx(rGrid.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return rGrid[a] < rGrid[b]; });
  const double rMin = rGrid[idx.front()];
  std::vector<double> tail;
  for (std::size_t i : idx)
    if (rGrid[i] <= 10.0 * rMin * (1.0 + 1e-12)) tail.push_back(ratios[i]);
  if (tail.size() < 3) return std::all_of(ratios.begin(), ratios.end(), [](double v) { return std::isfinite(v); });
  // tail is ordered by increasing r: strictly decreasing means growth as r -> 0.
  bool growing = true;
  for (std::size_t i = 1; i < tail.size(); ++i) growing = growing && tail[i] < tail[i - 1];
  return !growing;
}

struct LimsupReport {
  std::vector<double> rGrid;
  std::vector<double> ratios;
  std::vector<double> runningMax;
  bool bounded = false;
};

/// ratio_r = L*([s-r, s+r]) / (r^{1-H} (log log 1/r)^kappa), L* the largest
/// histogram density with bin width r^H / 50.
inline LimsupReport limsupDiagnostic(const Hurst& h, const PathSample& path, double s, const std::vector<double>& rGrid,
                                     double kappa) {
  require(!rGrid.empty(), ErrorCode::InvalidArgument, "empty r grid");
  const double H = h.value();
  LimsupReport rep;
  rep.rGrid = rGrid;
  double running = 0.0;
  for (double r : rGrid) {
    require(r >= 20.0 * path.dt, ErrorCode::ResolutionError, "r below 20 grid steps");
    require(r < std::exp(-1.0), ErrorCode::InvalidArgument, "r must be below 1/e");
    require(s - r >= 0.0 && s + r <= path.horizon() * (1.0 + 1e-12), ErrorCode::InvalidArgument,
            "[s-r, s+r] must lie in the path horizon");
    const LocalTimeEstimate est = localTimeHistogram(path, s - r, s + r, std::pow(r, H) / 50.0);
    const double gauge = std::pow(r, 1.0 - H) * std::pow(std::log(std::log(1.0 / r)), kappa);
    rep.ratios.push_back(est.maxDensity() / gauge);
    running = std::max(running, rep.ratios.back());
    rep.runningMax.push_back(running);
  }
  rep.bounded = boundedOverLastDecade(rep.rGrid, rep.ratios);
  return rep;
}

struct IrregularityReport {
  std::vector<double> rGrid;
  /// min over s of osc(s, r) / r^H.
  std::vector<double> floor;
};

/// osc(s, r) = sup_{|t-s| < r} |Z_t - Z_s| / r^H, minimized over sGrid.
inline IrregularityReport irregularityDiagnostic(const PathSample& path, const std::vector<double>& sGrid,
                                                 const std::vector<double>& rGrid) {
  require(!sGrid.empty() && !rGrid.empty(), ErrorCode::InvalidArgument, "empty grid");
  const double H = path.hurst.value();
  IrregularityReport rep;
  rep.rGrid = rGrid;
  for (double r : rGrid) {
    require(r >= 20.0 * path.dt, ErrorCode::ResolutionError, "r below 20 grid steps");
    const auto w = static_cast<std::size_t>(std::llround(r / path.dt));
    double best = std::numeric_limits<double>::infinity();
    for (double s : sGrid) {
      const auto is = static_cast<std::size_t>(std::llround(s / path.dt));
      require(is >= w && is + w <= path.steps(), ErrorCode::InvalidArgument, "[s-r, s+r] must lie in the path horizon");
      double osc = 0.0;
      for (std::size_t t = is - w + 1; t < is + w; ++t) osc = std::max(osc, std::abs(path.values[t] - path.values[is]));
      best = std::min(best, osc / std::pow(r, H));
    }
    rep.floor.push_back(best);
  }
  return rep;
}

struct IrregularityVerdict {
  std::vector<double> rGrid;
  std::vector<double> medianFloor;  // median over paths per r
  double slope = 0.0;               // d log(median floor) / d log r
  double maxSlope = 0.0;            // (1-H)/2
  bool floorMaintained = false;
};

/// Across paths: the floor is maintained when the median floor is positive
/// and does not decay with r like a differentiable path (slope 1-H), i.e.
/// its log-log slope stays below (1-H)/2.
inline IrregularityVerdict irregularityFloor(const std::vector<PathSample>& paths, const std::vector<double>& sGrid,
                                             const std::vector<double>& rGrid, unsigned threads = 1) {
  require(!paths.empty(), ErrorCode::InvalidArgument, "no paths");
  std::vector<IrregularityReport> reps(paths.size());
  parallelFor(paths.size(), threads, [&](std::size_t i) { reps[i] = irregularityDiagnostic(paths[i], sGrid, rGrid); });
  IrregularityVerdict v;
  v.rGrid = rGrid;
  for (std::size_t j = 0; j < rGrid.size(); ++j) {
    std::vector<double> col;
    for (const auto& r : reps) col.push_back(r.floor[j]);
    std::nth_element(col.begin(), col.begin() + static_cast<std::ptrdiff_t>(col.size() / 2), col.end());
    v.medianFloor.push_back(col[col.size() / 2]);
  }
  const double H = paths.front().hurst.value();
  v.maxSlope = 0.5 * (1.0 - H);
  const bool positive = std::all_of(v.medianFloor.begin(), v.medianFloor.end(), [](double f) { return f > 0.0; });
  if (positive && rGrid.size() >= 2) v.slope = fitLogLog(rGrid, v.medianFloor).slope;
  v.floorMaintained = positive && v.slope < v.maxSlope;
  return v;
}

}  // namespace rosenlab
