#pragma once

// Domain types shared by every rosenlab module.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rosenlab {

inline constexpr std::string_view kVersion = "0.3.1";

enum class ErrorCode {
  InvalidArgument,
  DomainError,
  TruncationError,
  NonHermitian,
  ResidualImagError,
  InsufficientSpectrum,
  QuadratureError,
  BudgetExceeded,
  EmbeddingError,
  InsufficientTailEvents,
  EmptyInterval,
  CutoffTooLow,
  InsufficientOccupation,
  ResolutionError,
  IoError,
};

inline std::string_view toString(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::TruncationError: return "TruncationError";
    case ErrorCode::NonHermitian: return "NonHermitian";
    case ErrorCode::ResidualImagError: return "ResidualImagError";
    case ErrorCode::InsufficientSpectrum: return "InsufficientSpectrum";
    case ErrorCode::QuadratureError: return "QuadratureError";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::EmbeddingError: return "EmbeddingError";
    case ErrorCode::InsufficientTailEvents: return "InsufficientTailEvents";
    case ErrorCode::EmptyInterval: return "EmptyInterval";
    case ErrorCode::CutoffTooLow: return "CutoffTooLow";
    case ErrorCode::InsufficientOccupation: return "InsufficientOccupation";
    case ErrorCode::ResolutionError: return "ResolutionError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the toolkit carries a machine-readable code so
/// the CLI can record it in the run manifest.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(toString(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

/// Self-similarity index of the process, strictly inside (1/2, 1).
class Hurst {
 public:
  explicit Hurst(double h) : h_(h) {
    require(std::isfinite(h) && h > 0.5 && h < 1.0, ErrorCode::InvalidArgument,
            "H out of (0.5,1): " + std::to_string(h));
  }

  double value() const noexcept { return h_; }
  /// Order of the Riesz factors in the time-domain operator, H/2.
  double alpha() const noexcept { return 0.5 * h_; }
  /// Upper end (1-H)/(2H) of the admissible Hölder/Fourier-weight range.
  double holderSpaceLimit() const noexcept { return (1.0 - h_) / (2.0 * h_); }
  /// Hurst index of the underlying fractional Gaussian noise, (H+1)/2.
  double noiseHurst() const noexcept { return 0.5 * (h_ + 1.0); }

  friend bool operator==(const Hurst&, const Hurst&) = default;

 private:
  double h_;
};

/// Step multiplier g = sum_j xi_j 1_[0,t_j], held together with its level
/// form g = sum_j xi'_j 1_{I_j}, I_j = [t_{j-1}, t_j], t_0 = 0.
class StepProfile {
 public:
  StepProfile(std::vector<double> times, std::vector<double> xi)
      : times_(std::move(times)), xi_(std::move(xi)) {
    require(!times_.empty(), ErrorCode::InvalidArgument, "profile needs at least one time");
    require(times_.size() == xi_.size(), ErrorCode::InvalidArgument,
            "profile times and coefficients differ in length");
    double prev = 0.0;
    for (double t : times_) {
      require(std::isfinite(t) && t > prev, ErrorCode::InvalidArgument,
              "profile times must be positive and strictly increasing");
      prev = t;
    }
    for (double x : xi_) require(std::isfinite(x), ErrorCode::InvalidArgument, "non-finite coefficient");
    levels_ = levelsFromCoefficients(xi_);
  }

  /// Builds a profile from interval levels xi'_j rather than coefficients.
  static StepProfile fromLevels(std::vector<double> times, const std::vector<double>& levels) {
    return StepProfile(std::move(times), coefficientsFromLevels(levels));
  }

  static StepProfile singleInterval(double t, double xi = 1.0) { return StepProfile({t}, {xi}); }

  /// xi'_j = sum_{l >= j} xi_l.
  static std::vector<double> levelsFromCoefficients(std::span<const double> xi) {
    std::vector<double> out(xi.size());
    double acc = 0.0;
    for (std::size_t j = xi.size(); j-- > 0;) {
      acc += xi[j];
      out[j] = acc;
    }
    return out;
  }

  /// xi_j = xi'_j - xi'_{j+1}, xi'_{n+1} = 0.
  static std::vector<double> coefficientsFromLevels(std::span<const double> levels) {
    std::vector<double> out(levels.size());
    for (std::size_t j = 0; j < levels.size(); ++j) {
      out[j] = levels[j] - (j + 1 < levels.size() ? levels[j + 1] : 0.0);
    }
    return out;
  }

  std::size_t size() const noexcept { return times_.size(); }
  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<double>& xi() const noexcept { return xi_; }
  const std::vector<double>& levels() const noexcept { return levels_; }
  double horizon() const noexcept { return times_.back(); }
  double intervalStart(std::size_t j) const noexcept { return j == 0 ? 0.0 : times_[j - 1]; }
  double intervalLength(std::size_t j) const noexcept { return times_[j] - intervalStart(j); }

  bool isZero() const noexcept {
    for (double l : levels_)
      if (l != 0.0) return false;
    return true;
  }

  bool changesSign() const noexcept {
    bool pos = false, neg = false;
    for (double l : levels_) {
      pos |= l > 0.0;
      neg |= l < 0.0;
    }
    return pos && neg;
  }

  /// Profile with every coefficient multiplied by c.
  StepProfile scaled(double c) const {
    std::vector<double> xi = xi_;
    for (double& x : xi) x *= c;
    return StepProfile(times_, std::move(xi));
  }

 private:
  std::vector<double> times_;
  std::vector<double> xi_;
  std::vector<double> levels_;
};

enum class SpectrumSource { TimeDomain, SpectralDomain, Riesz, Synthetic };

inline std::string_view toString(SpectrumSource s) {
  switch (s) {
    case SpectrumSource::TimeDomain: return "time-domain";
    case SpectrumSource::SpectralDomain: return "spectral-domain";
    case SpectrumSource::Riesz: return "riesz";
    case SpectrumSource::Synthetic: return "synthetic";
  }
  return "unknown";
}

/// Signed eigenvalues of a discretized operator, sorted by decreasing
/// magnitude, plus the Hilbert-Schmidt mass the retained values miss.
struct Spectrum {
  std::vector<double> eigenvalues;
  std::vector<double> singularValues;
  std::size_t discretizationSize = 0;
  double truncationRadius = 0.0;
  double residualImag = 0.0;
  /// Sum of lambda_k^2 over the eigenvalues not retained (never negative).
  double tailSumSquares = 0.0;
  SpectrumSource source = SpectrumSource::Synthetic;

  std::size_t size() const noexcept { return eigenvalues.size(); }

  double sumSquares() const noexcept {
    double s = 0.0;
    for (double l : eigenvalues) s += l * l;
    return s;
  }

  /// Builds a spectrum from unsorted signed eigenvalues.
  static Spectrum fromEigenvalues(std::vector<double> eig, SpectrumSource source = SpectrumSource::Synthetic,
                                  double tailSumSquares = 0.0) {
    std::sort(eig.begin(), eig.end(), [](double a, double b) { return std::abs(a) > std::abs(b); });
    Spectrum s;
    s.singularValues.reserve(eig.size());
    for (double l : eig) s.singularValues.push_back(std::abs(l));
    s.eigenvalues = std::move(eig);
    s.discretizationSize = s.eigenvalues.size();
    s.tailSumSquares = std::max(0.0, tailSumSquares);
    s.source = source;
    return s;
  }

  /// Keeps the first k values; the dropped squares move into the tail.
  Spectrum truncated(std::size_t k) const {
    Spectrum s = *this;
    if (k >= size()) return s;
    for (std::size_t i = k; i < size(); ++i) s.tailSumSquares += eigenvalues[i] * eigenvalues[i];
    s.eigenvalues.resize(k);
    s.singularValues.resize(k);
    return s;
  }

  /// Every eigenvalue (and the tail) multiplied by c.
  Spectrum scaled(double c) const {
    Spectrum s = *this;
    for (double& l : s.eigenvalues) l *= c;
    for (double& m : s.singularValues) m *= std::abs(c);
    s.tailSumSquares *= c * c;
    return s;
  }
};

enum class PathGenerator { Hermite2Fgn, Injected };

/// Trajectory on the uniform grid t_i = i*dt, values[0] = 0.
struct PathSample {
  double dt = 0.0;
  std::vector<double> values;
  Hurst hurst{0.7};
  std::uint64_t seed = 0;
  PathGenerator generator = PathGenerator::Injected;

  PathSample(double dt_, std::vector<double> values_, Hurst h, std::uint64_t seed_, PathGenerator gen)
      : dt(dt_), values(std::move(values_)), hurst(h), seed(seed_), generator(gen) {
    require(dt > 0.0 && std::isfinite(dt), ErrorCode::InvalidArgument, "path dt must be positive");
    require(values.size() >= 2, ErrorCode::InvalidArgument, "path needs at least two points");
    require(values.front() == 0.0, ErrorCode::InvalidArgument, "path must start at 0");
  }

  /// Wraps an explicit trajectory (deterministic test paths, external data).
  static PathSample injected(double dt, std::vector<double> values, Hurst h = Hurst(0.7)) {
    return PathSample(dt, std::move(values), h, 0, PathGenerator::Injected);
  }

  std::size_t steps() const noexcept { return values.size() - 1; }
  double horizon() const noexcept { return dt * static_cast<double>(steps()); }
  double time(std::size_t i) const noexcept { return dt * static_cast<double>(i); }
};

enum class LocalTimeMethod { Histogram, Fourier };

/// Occupation density on a fixed time interval. For the histogram method
/// xGrid holds bin centres and density[i] the occupation of
/// [xGrid[i] - binWidth/2, xGrid[i] + binWidth/2) divided by binWidth.
struct LocalTimeEstimate {
  double a = 0.0;
  double b = 0.0;
  double binWidth = 0.0;
  std::vector<double> xGrid;
  std::vector<double> density;
  LocalTimeMethod method = LocalTimeMethod::Histogram;
  /// Fourier method only: occupation mass removed by clipping negatives.
  double clippedMass = 0.0;

  double totalMass() const noexcept {
    double m = 0.0;
    for (double d : density) m += d * binWidth;
    return m;
  }

  double maxDensity() const noexcept {
    double m = 0.0;
    for (double d : density) m = std::max(m, d);
    return m;
  }

  /// Density of the bin containing x, 0 when x is off the grid.
  double at(double x) const noexcept {
    if (xGrid.empty()) return 0.0;
    double pos = (x - (xGrid.front() - 0.5 * binWidth)) / binWidth;
    if (pos < 0.0) return 0.0;
    auto i = static_cast<std::size_t>(std::floor(pos));
    return i < density.size() ? density[i] : 0.0;
  }
};

}  // namespace rosenlab
