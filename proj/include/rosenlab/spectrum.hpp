#pragma once

// Discretized integral operators and their spectra.
//
// Time domain: the composite K_a M_g K_a shares its nonzero spectrum with
// M_g K_{2a}, whose kernel d_{2a} |x-y|^{2a-1} g(y) lives on the support of
// the step multiplier g. Spectral domain: the Hermitian kernel
// |x|^{-H/2} sum_j xi_j (e^{i t_j (x-y)} - 1) / (i (x-y)) |y|^{-H/2} on the
// real line, truncated to [-X, X].

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/gamma.hpp>

#include "rosenlab/core.hpp"
#include "rosenlab/numerics.hpp"

namespace rosenlab {

/// Constant d_a of the Riesz kernel d_a |x|^{a-1}, normalized so that the
/// convolution operator has Fourier symbol |xi|^{-a}.
inline double rieszConstant(double a) {
  require(a > 0.0 && a < 1.0, ErrorCode::InvalidArgument, "Riesz order must lie in (0,1)");
  return boost::math::tgamma(0.5 * (1.0 - a)) /
         (std::pow(2.0, a) * std::sqrt(std::numbers::pi) * boost::math::tgamma(0.5 * a));
}

/// Fourier transform of the control density: int |x|^{-H} e^{ixu} dx = c_H |u|^{H-1}.
inline double spectralDensityConstant(double h) {
  return 2.0 * boost::math::tgamma(1.0 - h) * std::sin(0.5 * std::numbers::pi * h);
}

enum class RieszQuadrature {
  /// Midpoint nodes, diagonal cell integrated in closed form.
  Midpoint,
  /// Piecewise-constant Galerkin: every cell pair integrated in closed form.
  Galerkin,
};

struct Cell {
  double lo;
  double hi;
  double center() const noexcept { return 0.5 * (lo + hi); }
  double width() const noexcept { return hi - lo; }
};

namespace detail {

// F'' = |z|^{b-1}: F(z) = |z|^{b+1} / (b (b+1)).
inline double rieszSecondPrimitive(double z, double b) { return std::pow(std::abs(z), b + 1.0) / (b * (b + 1.0)); }

// int_{c1} int_{c2} |x-y|^{b-1} dy dx.
inline double rieszCellPair(const Cell& c1, const Cell& c2, double b) {
  return rieszSecondPrimitive(c1.hi - c2.lo, b) - rieszSecondPrimitive(c1.lo - c2.lo, b) -
         rieszSecondPrimitive(c1.hi - c2.hi, b) + rieszSecondPrimitive(c1.lo - c2.hi, b);
}

// int_{c} |x_c - y|^{b-1} dy for the cell midpoint x_c.
inline double rieszDiagonal(const Cell& c, double b) { return 2.0 * std::pow(0.5 * c.width(), b) / b; }

}  // namespace detail

/// Uniform cells on each interval, `counts[j]` of them on intervals[j].
inline std::vector<Cell> makeCells(const std::vector<std::pair<double, double>>& intervals,
                                   const std::vector<std::size_t>& counts) {
  std::vector<Cell> cells;
  for (std::size_t j = 0; j < intervals.size(); ++j) {
    const auto [lo, hi] = intervals[j];
    const double h = (hi - lo) / static_cast<double>(counts[j]);
    for (std::size_t i = 0; i < counts[j]; ++i) {
      const double a = lo + h * static_cast<double>(i);
      cells.push_back({a, i + 1 == counts[j] ? hi : a + h});
    }
  }
  return cells;
}

/// Splits `total` nodes over intervals in proportion to their lengths, at
/// least `minimum` per interval.
inline std::vector<std::size_t> allocateNodes(const std::vector<double>& lengths, std::size_t total,
                                              std::size_t minimum = 4) {
  double sum = 0.0;
  for (double l : lengths) sum += l;
  std::vector<std::size_t> counts;
  for (double l : lengths) {
    const auto c = static_cast<std::size_t>(std::llround(static_cast<double>(total) * l / sum));
    counts.push_back(std::max(minimum, c));
  }
  return counts;
}

/// Symmetric discretization S of the Riesz kernel d |x-y|^{b-1} on a cell
/// partition: S = W^{1/2} A W^{-1/2} for the Nyström matrix A (midpoint) or
/// the normalized Gram matrix (Galerkin). Its eigenvalues approximate those
/// of M_J K_b M_J on the union J of the cells.
inline Eigen::MatrixXd rieszMatrix(const std::vector<Cell>& cells, double b, double d,
                                   RieszQuadrature rule = RieszQuadrature::Midpoint) {
  require(b > 0.0 && b < 1.0, ErrorCode::InvalidArgument, "kernel exponent must lie in (0,1)");
  const auto n = static_cast<Eigen::Index>(cells.size());
  Eigen::MatrixXd s(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Cell& ci = cells[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j <= i; ++j) {
      const Cell& cj = cells[static_cast<std::size_t>(j)];
      double v;
      if (rule == RieszQuadrature::Galerkin) {
        v = detail::rieszCellPair(ci, cj, b) / std::sqrt(ci.width() * cj.width());
      } else if (i == j) {
        v = detail::rieszDiagonal(ci, b);
      } else {
        v = std::sqrt(ci.width() * cj.width()) * std::pow(std::abs(ci.center() - cj.center()), b - 1.0);
      }
      s(i, j) = s(j, i) = d * v;
    }
  }
  return s;
}

/// M_J K M_J for the Riesz kernel d |x-y|^{a-1} on a union of intervals J.
struct RieszKernelOperator {
  double alpha = 0.35;
  std::vector<std::pair<double, double>> support{{0.0, 1.0}};
  std::size_t nodes = 400;
  double kernelConstant = 1.0;
  RieszQuadrature quadrature = RieszQuadrature::Midpoint;

  static RieszKernelOperator normalized(double alpha, double lo, double hi, std::size_t nodes,
                                        RieszQuadrature rule = RieszQuadrature::Midpoint) {
    return {alpha, {{lo, hi}}, nodes, rieszConstant(alpha), rule};
  }

  std::vector<Cell> cells() const {
    std::vector<double> lengths;
    for (auto [lo, hi] : support) lengths.push_back(hi - lo);
    return makeCells(support, support.size() == 1 ? std::vector<std::size_t>{nodes} : allocateNodes(lengths, nodes));
  }

  Eigen::MatrixXd matrix() const { return rieszMatrix(cells(), alpha, kernelConstant, quadrature); }
};

/// Eigenvalues of a Riesz operator (positive, decreasing).
inline Spectrum eigRiesz(const RieszKernelOperator& op) {
  require(op.alpha > 0.0 && op.alpha < 1.0, ErrorCode::InvalidArgument, "Riesz order must lie in (0,1)");
  for (auto [lo, hi] : op.support) require(hi > lo, ErrorCode::InvalidArgument, "empty Riesz support interval");
  const Eigen::MatrixXd m = op.matrix();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  require(solver.info() == Eigen::Success, ErrorCode::NonHermitian, "symmetric eigen-solve failed");
  const Eigen::VectorXd ev = solver.eigenvalues();
  Spectrum s = Spectrum::fromEigenvalues(std::vector<double>(ev.data(), ev.data() + ev.size()), SpectrumSource::Riesz);
  s.discretizationSize = static_cast<std::size_t>(m.rows());
  return s;
}

/// Exact int int g(x) g(y) |x-y|^{b-1} dx dy for a step profile (b > 0).
inline double profileRieszEnergy(const StepProfile& p, double b) {
  double e = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Cell ci{p.intervalStart(i), p.times()[i]};
    for (std::size_t j = 0; j < p.size(); ++j) {
      const Cell cj{p.intervalStart(j), p.times()[j]};
      e += p.levels()[i] * p.levels()[j] * detail::rieszCellPair(ci, cj, b);
    }
  }
  return e;
}

struct TimeDomainOptions {
  RieszQuadrature quadrature = RieszQuadrature::Galerkin;
  std::size_t minNodesPerInterval = 4;
  /// Largest accepted max|Im lambda| / max|lambda| for the general solver.
  double imagTolerance = 1e-6;
};

/// Nonzero spectrum of K_a M_g K_a via M_g K_{2a}, the Riesz kernel carrying
/// the constant d_{2a}. Eigenvalues are signed; `tailSumSquares` is set when
/// the operator is Hilbert-Schmidt (4a > 1).
inline Spectrum eigTimeDomain(const StepProfile& profile, double alpha, std::size_t nNodes,
                              const TimeDomainOptions& opt = {}) {
  require(alpha > 0.0 && alpha < 0.5, ErrorCode::InvalidArgument, "alpha must lie in (0,1/2)");
  require(nNodes >= 1, ErrorCode::InvalidArgument, "need at least one node");
  const double b = 2.0 * alpha;

  std::vector<std::pair<double, double>> intervals;
  std::vector<double> lengths, levels;
  for (std::size_t j = 0; j < profile.size(); ++j) {
    if (profile.levels()[j] == 0.0) continue;
    intervals.emplace_back(profile.intervalStart(j), profile.times()[j]);
    lengths.push_back(profile.intervalLength(j));
    levels.push_back(profile.levels()[j]);
  }
  if (intervals.empty()) {
    Spectrum s = Spectrum::fromEigenvalues(std::vector<double>(nNodes, 0.0), SpectrumSource::TimeDomain);
    return s;
  }

  const auto counts = allocateNodes(lengths, nNodes, opt.minNodesPerInterval);
  const auto cells = makeCells(intervals, counts);
  Eigen::VectorXd g(static_cast<Eigen::Index>(cells.size()));
  {
    Eigen::Index k = 0;
    for (std::size_t j = 0; j < counts.size(); ++j)
      for (std::size_t i = 0; i < counts[j]; ++i) g(k++) = levels[j];
  }
  const Eigen::MatrixXd s = rieszMatrix(cells, b, rieszConstant(b), opt.quadrature);

  std::vector<double> eig;
  double residualImag = 0.0;
  if (!profile.changesSign()) {
    const double sign = g(0) > 0.0 ? 1.0 : -1.0;
    const Eigen::VectorXd root = g.cwiseAbs().cwiseSqrt();
    const Eigen::MatrixXd m = root.asDiagonal() * s * root.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    require(solver.info() == Eigen::Success, ErrorCode::NonHermitian, "symmetric eigen-solve failed");
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) eig.push_back(sign * solver.eigenvalues()(i));
  } else {
    // D_g S = D_g L L^T is similar to the symmetric L^T D_g L when S is
    // positive definite; otherwise fall back to the general solver.
    Eigen::LLT<Eigen::MatrixXd> llt(s);
    if (llt.info() == Eigen::Success) {
      const Eigen::MatrixXd l = llt.matrixL();
      const Eigen::MatrixXd m = l.transpose() * g.asDiagonal() * l;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
      require(solver.info() == Eigen::Success, ErrorCode::NonHermitian, "symmetric eigen-solve failed");
      const Eigen::VectorXd ev = solver.eigenvalues();
      eig.assign(ev.data(), ev.data() + ev.size());
    } else {
      const Eigen::MatrixXd m = g.asDiagonal() * s;
      Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
      require(solver.info() == Eigen::Success, ErrorCode::ResidualImagError, "general eigen-solve failed");
      double maxAbs = 0.0, maxImag = 0.0;
      for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        const auto z = solver.eigenvalues()(i);
        maxAbs = std::max(maxAbs, std::abs(z));
        maxImag = std::max(maxImag, std::abs(z.imag()));
        eig.push_back(z.real());
      }
      residualImag = maxAbs > 0.0 ? maxImag / maxAbs : 0.0;
      require(residualImag <= opt.imagTolerance, ErrorCode::ResidualImagError,
              "relative imaginary residual " + std::to_string(residualImag));
    }
  }

  Spectrum out = Spectrum::fromEigenvalues(std::move(eig), SpectrumSource::TimeDomain);
  out.discretizationSize = cells.size();
  out.residualImag = residualImag;
  if (2.0 * b > 1.0) {
    const double d = rieszConstant(b);
    const double exact = d * d * profileRieszEnergy(profile, 2.0 * b - 1.0);
    out.tailSumSquares = std::max(0.0, exact - out.sumSquares());
  }
  return out;
}

/// Scale that maps the raw time-domain spectrum of M_g K_H (kernel d_H) to
/// the normalized convention 2 sum lambda_k^2 = Var Z_1 = 1 at g = 1_[0,1].
inline double timeDomainNormalization(const Hurst& h) {
  const double H = h.value();
  return std::sqrt(0.5 * H * (2.0 * H - 1.0)) / rieszConstant(H);
}

/// Same convention for the spectral-domain kernel (no Riesz constant).
inline double spectralDomainNormalization(const Hurst& h) {
  const double H = h.value();
  return std::sqrt(0.5 * H * (2.0 * H - 1.0)) / spectralDensityConstant(H);
}

/// Exact normalized Hilbert-Schmidt mass sum lambda_k^2 of the profile's
/// operator: H(2H-1)/2 * int int g g |x-y|^{2H-2}.
inline double normalizedHilbertSchmidt(const StepProfile& p, const Hurst& h) {
  const double H = h.value();
  return 0.5 * H * (2.0 * H - 1.0) * profileRieszEnergy(p, 2.0 * H - 1.0);
}

/// Eigenvalues lambda_k of sum_j xi_j Z_{t_j} = sum_k lambda_k (X_k^2 - 1)
/// (Var Z_1 = 1 convention), from the time-domain discretization. The tail
/// carries the exact Hilbert-Schmidt remainder.
inline Spectrum rosenblattSpectrum(const Hurst& h, const StepProfile& profile, std::size_t nNodes,
                                   const TimeDomainOptions& opt = {}) {
  Spectrum raw = eigTimeDomain(profile, h.alpha(), nNodes, opt);
  Spectrum s = raw.scaled(timeDomainNormalization(h));
  s.tailSumSquares = std::max(0.0, normalizedHilbertSchmidt(profile, h) - s.sumSquares());
  return s;
}

struct SpectralDomainOptions {
  /// Truncation radius X in units of 1/max_j t_j.
  double radius = 960.0;
  /// Gauss-Legendre panels of this width (units of 1/max_j t_j).
  double panelWidth = 6.0;
  std::size_t nodesPerPanel = 6;
  /// Nodes in the innermost panel, which absorbs the |x|^{-H} weight.
  std::size_t innerNodes = 16;
};

/// Node set on [-X, X] carrying the weights of the measure |x|^{-H} dx.
inline QuadratureRule spectralDomainRule(const Hurst& h, double scale, const SpectralDomainOptions& opt) {
  const double H = h.value();
  const double width = opt.panelWidth * scale;
  const double radius = opt.radius * scale;
  require(radius > width, ErrorCode::InvalidArgument, "truncation radius must exceed the panel width");
  QuadratureRule half = singularEndpointRule(opt.innerNodes, width, H);
  const auto panels = static_cast<std::size_t>(std::ceil(radius / width)) - 1;
  const QuadratureRule base = gaussLegendre(opt.nodesPerPanel, 0.0, 1.0);
  for (std::size_t p = 1; p <= panels; ++p) {
    const double lo = width * static_cast<double>(p);
    for (std::size_t i = 0; i < base.size(); ++i) {
      const double x = lo + width * base.nodes[i];
      half.nodes.push_back(x);
      half.weights.push_back(width * base.weights[i] * std::pow(x, -H));
    }
  }
  QuadratureRule rule;
  for (std::size_t i = half.size(); i-- > 0;) {
    rule.nodes.push_back(-half.nodes[i]);
    rule.weights.push_back(half.weights[i]);
  }
  for (std::size_t i = 0; i < half.size(); ++i) {
    rule.nodes.push_back(half.nodes[i]);
    rule.weights.push_back(half.weights[i]);
  }
  return rule;
}

/// (e^{itu} - 1) / (iu), with the removable value t at u = 0.
inline std::complex<double> incrementKernel(double t, double u) {
  const double tu = t * u;
  if (std::abs(tu) < 1e-8) return {t, 0.5 * t * tu};
  return {std::sin(tu) / u, (1.0 - std::cos(tu)) / u};
}

/// Hermitian operator of the spectral representation for a step profile.
struct SpectralDomainOperator {
  Hurst hurst{0.7};
  StepProfile profile = StepProfile::singleInterval(1.0);
  SpectralDomainOptions options{};

  QuadratureRule rule() const { return spectralDomainRule(hurst, 1.0 / profile.horizon(), options); }

  Eigen::MatrixXcd matrix(const QuadratureRule& q) const {
    const auto n = static_cast<Eigen::Index>(q.size());
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j <= i; ++j) {
        const double u = q.nodes[static_cast<std::size_t>(i)] - q.nodes[static_cast<std::size_t>(j)];
        std::complex<double> k{0.0, 0.0};
        for (std::size_t l = 0; l < profile.size(); ++l) k += profile.xi()[l] * incrementKernel(profile.times()[l], u);
        const double w = std::sqrt(q.weights[static_cast<std::size_t>(i)] * q.weights[static_cast<std::size_t>(j)]);
        m(i, j) = w * k;
        m(j, i) = std::conj(m(i, j));
      }
    }
    return m;
  }
};

/// Normalized spectrum (2 sum lambda^2 = 1 at t = 1, xi = 1) of the
/// spectral-domain operator. Throws TruncationError when the Hilbert-Schmidt
/// mass missed by the truncation exceeds `tol` relative.
inline Spectrum eigSpectralDomain(const SpectralDomainOperator& op, double tol) {
  const QuadratureRule q = op.rule();
  const double scale = spectralDomainNormalization(op.hurst);
  if (op.profile.isZero()) {
    Spectrum s = Spectrum::fromEigenvalues(std::vector<double>(q.size(), 0.0), SpectrumSource::SpectralDomain);
    s.truncationRadius = op.options.radius * op.profile.horizon();
    return s;
  }
  const Eigen::MatrixXcd m = op.matrix(q);
  const double frob = m.norm();
  const double asym = (m - m.adjoint()).norm();
  require(asym <= 1e-10 * frob, ErrorCode::NonHermitian, "spectral-domain matrix is not Hermitian");

  const double exact = normalizedHilbertSchmidt(op.profile, op.hurst);
  const double captured = scale * scale * frob * frob;
  const double tailMass = std::max(0.0, exact - captured);
  require(tailMass <= tol * exact, ErrorCode::TruncationError,
          "relative Hilbert-Schmidt tail " + std::to_string(tailMass / exact) + " exceeds " + std::to_string(tol));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  require(solver.info() == Eigen::Success, ErrorCode::NonHermitian, "Hermitian eigen-solve failed");
  const Eigen::VectorXd ev = solver.eigenvalues();
  std::vector<double> eig(ev.data(), ev.data() + ev.size());
  for (double& l : eig) l *= scale;
  Spectrum s = Spectrum::fromEigenvalues(std::move(eig), SpectrumSource::SpectralDomain);
  s.discretizationSize = q.size();
  s.truncationRadius = op.options.radius * op.profile.horizon();
  s.tailSumSquares = std::max(0.0, exact - s.sumSquares());
  return s;
}

struct DecayFit {
  double slope = 0.0;
  double stderr_ = 0.0;
  double rSquared = 0.0;
  std::size_t count = 0;
};

/// Least-squares slope of log mu_k against log k over kMin <= k <= kMax
/// (1-based ranks).
inline DecayFit fitDecayExponent(const Spectrum& spec, std::size_t kMin, std::size_t kMax) {
  require(kMin >= 2 && kMin <= kMax, ErrorCode::InvalidArgument, "need 2 <= kMin <= kMax");
  require(kMax <= spec.size(), ErrorCode::InsufficientSpectrum, "kMax exceeds the spectrum length");
  std::vector<double> k, mu;
  for (std::size_t i = kMin; i <= kMax; ++i) {
    const double m = spec.singularValues[i - 1];
    if (m > 0.0 && std::isfinite(m)) {
      k.push_back(static_cast<double>(i));
      mu.push_back(m);
    }
  }
  require(k.size() >= 10, ErrorCode::InsufficientSpectrum, "fewer than 10 usable singular values");
  const LinearFit f = fitLogLog(k, mu);
  return {f.slope, f.slopeStderr, f.rSquared, f.count};
}

/// Singular values of M K_a M on [0,1] with kernel d_a |x-y|^{a-1}, memoized
/// per (a, nodes, rule).
inline const Spectrum& unitIntervalReference(double alpha, std::size_t nodes,
                                             RieszQuadrature rule = RieszQuadrature::Galerkin) {
  static std::mutex mutex;
  static std::map<std::tuple<double, std::size_t, int>, Spectrum> memo;
  const auto key = std::make_tuple(alpha, nodes, static_cast<int>(rule));
  {
    std::lock_guard lock(mutex);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
  }
  Spectrum s = eigRiesz(RieszKernelOperator::normalized(alpha, 0.0, 1.0, nodes, rule));
  std::lock_guard lock(mutex);
  return memo.emplace(key, std::move(s)).first->second;
}

struct LowerBoundReport {
  std::vector<double> ratios;  // r_n, n = 1..nMax
  double minRatio = 0.0;
  std::size_t argMin = 0;      // 1-based
  double profileScale = 0.0;   // max_j |xi'_j| |I_j|^H
};

/// r_n = mu_n(K_{H/2} M_g K_{H/2}) / (max_j |xi'_j| |I_j|^H * mu~_n^2), with
/// mu~ the singular values of M K_{H/2} M on [0,1].
inline LowerBoundReport verifyLowerBound(const StepProfile& profile, const Hurst& h, std::size_t nMax,
                                         std::size_t nodes = 400) {
  const Spectrum full = eigTimeDomain(profile, h.alpha(), nodes);
  const Spectrum& ref = unitIntervalReference(h.alpha(), nodes);
  require(nMax <= full.size() && nMax <= ref.size(), ErrorCode::InsufficientSpectrum, "nMax exceeds the spectrum");
  LowerBoundReport rep;
  for (std::size_t j = 0; j < profile.size(); ++j) {
    rep.profileScale = std::max(rep.profileScale,
                                std::abs(profile.levels()[j]) * std::pow(profile.intervalLength(j), h.value()));
  }
  rep.minRatio = std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n <= nMax; ++n) {
    const double mt = ref.singularValues[n - 1];
    const double r = rep.profileScale > 0.0 ? full.singularValues[n - 1] / (rep.profileScale * mt * mt) : 0.0;
    rep.ratios.push_back(r);
    if (r < rep.minRatio) {
      rep.minRatio = r;
      rep.argMin = n;
    }
  }
  return rep;
}

struct LocalizationReport {
  /// ratio[j][k-1] = mu_k(localized to I_j) / mu_k(full).
  std::vector<std::vector<double>> ratios;
  double supRatio = 0.0;
};

/// Compares each single-interval localization xi'_j 1_{I_j} with the full
/// multiplier, singular value by singular value.
inline LocalizationReport verifyLocalization(const StepProfile& profile, const Hurst& h, std::size_t kMax,
                                             std::size_t nodes = 400) {
  const Spectrum full = eigTimeDomain(profile, h.alpha(), nodes);
  require(kMax <= full.size(), ErrorCode::InsufficientSpectrum, "kMax exceeds the spectrum");
  LocalizationReport rep;
  for (std::size_t j = 0; j < profile.size(); ++j) {
    std::vector<double> row;
    if (profile.levels()[j] != 0.0) {
      const auto local = StepProfile::singleInterval(profile.intervalLength(j), profile.levels()[j]);
      const Spectrum loc = eigTimeDomain(local, h.alpha(), nodes);
      for (std::size_t k = 1; k <= kMax && k <= loc.size(); ++k) {
        const double r = loc.singularValues[k - 1] / full.singularValues[k - 1];
        row.push_back(r);
        rep.supRatio = std::max(rep.supRatio, r);
      }
    }
    rep.ratios.push_back(std::move(row));
  }
  return rep;
}

}  // namespace rosenlab
