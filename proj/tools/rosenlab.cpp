// rosenlab command-line driver.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <rosenlab/rosenlab.hpp>

namespace rl = rosenlab;
using nlohmann::json;

namespace {

constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct Globals {
  double hurst = 0.7;
  std::uint64_t seed = 42;
  unsigned threads = rl::defaultThreads();
  std::string config;
  std::string out;
  std::string budget = "desk";
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parseList(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("not a number: '" + item + "'");
    }
  }
  return v;
}

// a:b:step, inclusive of b up to rounding.
std::vector<double> parseGrid(const std::string& s) {
  std::vector<double> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(parseList(item).at(0));
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) throw UsageError("grid must be a:b:step with a <= b, step > 0");
  std::vector<double> g;
  const auto n = static_cast<std::size_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
  for (std::size_t i = 0; i <= n; ++i) g.push_back(parts[0] + static_cast<double>(i) * parts[2]);
  return g;
}

rl::StepProfile loadProfile(const std::string& file) {
  const auto rows = rl::readCsv(file);
  std::vector<double> t, xi;
  for (const auto& row : rows) {
    if (row.empty() || row[0].empty() || row[0][0] == '#') continue;
    if (row.size() < 2) throw UsageError("profile rows need two columns t,xi");
    try {
      t.push_back(std::stod(row[0]));
      xi.push_back(std::stod(row[1]));
    } catch (const std::invalid_argument&) {
      if (t.empty()) continue;  // header
      throw UsageError("profile: bad row '" + row[0] + "," + row[1] + "'");
    }
  }
  return rl::StepProfile(t, xi);
}

class Run {
 public:
  Run(std::string command, const Globals& g) {
    manifest_.command = std::move(command);
    manifest_.seed = g.seed;
    manifest_.startedAt = rl::utcTimestamp();
    manifest_.parameters["hurst"] = g.hurst;
    manifest_.parameters["threads"] = g.threads;
    manifest_.parameters["budget"] = g.budget;
  }

  json& parameters() { return manifest_.parameters; }
  json& results() { return manifest_.results; }
  void error(const std::string& e) { manifest_.errors.push_back(e); }

  void finish(const std::string& out) {
    if (out.empty()) return;
    manifest_.outputs.push_back(rl::fs::path(out).filename().string());
    manifest_.finishedAt = rl::utcTimestamp();
    rl::writeManifest(rl::manifestPathFor(out), manifest_);
  }

 private:
  rl::RunManifest manifest_;
};

// Writes CSV to `out`, or to stdout when no path is given.
template <class Fill>
void emitCsv(const std::string& out, const std::vector<std::string>& header, Fill fill) {
  if (!out.empty()) {
    rl::CsvWriter w(out, header);
    fill([&](const std::vector<std::string>& r) { w.row(r); });
    return;
  }
  auto line = [](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) std::cout << (i ? "," : "") << rl::csvField(r[i]);
    std::cout << '\n';
  };
  line(header);
  fill(line);
}

std::string num(double v) { return rl::formatDouble(v); }

// ---- spectrum / charfn -----------------------------------------------------

struct SpectrumArgs {
  std::string profile;
  double t = 1.0;
  double xi = 1.0;
  std::size_t nodes = 800;
  std::string method = "time";
  double radius = 960.0;
  double tol = 0.05;
  bool noCache = false;
};

rl::Spectrum computeSpectrum(const rl::Hurst& h, const rl::StepProfile& p, const SpectrumArgs& a) {
  json params = {{"hurst", h.value()}, {"times", p.times()}, {"xi", p.xi()}, {"method", a.method}};
  std::function<rl::Spectrum()> compute;
  rl::SpectrumSource source = rl::SpectrumSource::TimeDomain;
  if (a.method == "time") {
    params["nodes"] = a.nodes;
    compute = [&] { return rl::rosenblattSpectrum(h, p, a.nodes); };
  } else {
    params["radius"] = a.radius;
    params["tol"] = a.tol;
    source = rl::SpectrumSource::SpectralDomain;
    compute = [&] {
      rl::SpectralDomainOperator op;
      op.hurst = h;
      op.profile = p;
      op.options.radius = a.radius;
      return rl::eigSpectralDomain(op, a.tol);
    };
  }
  if (a.noCache) return compute();
  return rl::cachedSpectrum(rl::spectrumFingerprint("rosenblatt", params), source, compute);
}

int runSpectrum(const Globals& g, const SpectrumArgs& a) {
  const rl::Hurst h(g.hurst);
  const rl::StepProfile p = a.profile.empty() ? rl::StepProfile::singleInterval(a.t, a.xi) : loadProfile(a.profile);
  Run run("spectrum", g);
  run.parameters().update({{"profile", a.profile}, {"times", p.times()}, {"xi", p.xi()}, {"nodes", a.nodes},
                           {"method", a.method}, {"radius", a.radius}, {"tol", a.tol}});
  const rl::Spectrum s = computeSpectrum(h, p, a);
  emitCsv(g.out, {"k", "eigenvalue", "singular_value"}, [&](auto row) {
    for (std::size_t k = 0; k < s.size(); ++k) row({std::to_string(k + 1), num(s.eigenvalues[k]), num(s.singularValues[k])});
  });
  run.results() = {{"count", s.size()},
                   {"tailSumSquares", s.tailSumSquares},
                   {"variance", 2.0 * (s.sumSquares() + s.tailSumSquares)},
                   {"residualImag", s.residualImag},
                   {"discretizationSize", s.discretizationSize}};
  run.finish(g.out);
  return 0;
}

int runCharfn(const Globals& g, const SpectrumArgs& a, const std::string& grid) {
  const rl::Hurst h(g.hurst);
  const auto xs = parseGrid(grid);
  if (!(a.t > 0.0)) throw UsageError("--t must be positive");
  Run run("charfn", g);
  run.parameters().update({{"t", a.t}, {"xiGrid", grid}, {"nodes", a.nodes}, {"method", a.method}});
  SpectrumArgs unitArgs = a;
  const rl::Spectrum unit = computeSpectrum(h, rl::StepProfile::singleInterval(1.0), unitArgs);
  emitCsv(g.out, {"xi", "modulus", "re", "im"}, [&](auto row) {
    for (double xi : xs) {
      const auto s = rl::marginalSpectrum(unit, h, a.t, xi);
      const auto c = rl::charComplex(s);
      row({num(xi), num(rl::charModulus(s)), num(c.real()), num(c.imag())});
    }
  });
  run.results() = {{"points", xs.size()}, {"unitTerms", unit.size()}, {"unitTail", unit.tailSumSquares}};
  run.finish(g.out);
  return 0;
}

// ---- simulate / loctime ----------------------------------------------------

struct SimArgs {
  std::size_t steps = 16384;
  std::size_t paths = 500;
  std::size_t factor = 16;
  double horizon = 1.0;
};

int runSimulate(const Globals& g, const SimArgs& a) {
  const rl::Hurst h(g.hurst);
  if (g.out.empty()) throw UsageError("simulate needs --out <file>");
  if (a.paths == 0) throw UsageError("--paths must be positive");
  Run run("simulate", g);
  run.parameters().update({{"steps", a.steps}, {"paths", a.paths}, {"factor", a.factor}, {"horizon", a.horizon}});
  const rl::PathSimulator sim(h, a.steps, a.horizon, a.factor);
  const auto paths = rl::samplePaths(sim, a.paths, g.seed, g.threads);
  rl::writePaths(g.out, paths);
  run.results() = {{"dt", sim.dt()}, {"normalization", sim.normalization()}, {"pathCount", paths.size()}};
  run.finish(g.out);
  return 0;
}

struct LocArgs {
  std::string paths;
  std::string interval = "0,1";
  double bin = 0.005;
  std::string method = "histogram";
  double cutoff = 2000.0;
  long pathIndex = -1;
};

int runLoctime(const Globals& g, const LocArgs& a) {
  const auto iv = parseList(a.interval);
  if (iv.size() != 2) throw UsageError("--interval must be a,b");
  if (a.method != "histogram" && a.method != "fourier") throw UsageError("--method must be histogram or fourier");
  const auto paths = rl::readPaths(a.paths);
  Run run("loctime", g);
  run.parameters().update({{"paths", a.paths}, {"interval", iv}, {"bin", a.bin}, {"method", a.method},
                           {"cutoff", a.cutoff}, {"pathIndex", a.pathIndex}});
  std::size_t lo = 0, hi = paths.size();
  if (a.pathIndex >= 0) {
    if (static_cast<std::size_t>(a.pathIndex) >= paths.size()) throw UsageError("--path-index out of range");
    lo = static_cast<std::size_t>(a.pathIndex);
    hi = lo + 1;
  }
  json masses = json::array(), clipped = json::array();
  emitCsv(g.out, {"path", "x", "density"}, [&](auto row) {
    for (std::size_t i = lo; i < hi; ++i) {
      auto est = rl::localTimeHistogram(paths[i], iv[0], iv[1], a.bin);
      if (a.method == "fourier") {
        rl::FourierOptions fo;
        fo.binAveraged = true;
        est = rl::localTimeFourier(paths[i], iv[0], iv[1], est.xGrid, a.cutoff, fo);
      }
      masses.push_back(est.totalMass());
      clipped.push_back(est.clippedMass);
      for (std::size_t k = 0; k < est.xGrid.size(); ++k) row({std::to_string(i), num(est.xGrid[k]), num(est.density[k])});
    }
  });
  run.results() = {{"mass", masses}, {"clippedMass", clipped}};
  run.finish(g.out);
  return 0;
}

// ---- verify ------------------------------------------------------------------

struct VerifyArgs {
  std::string target = "all";
  int n = 1;
  std::string gammas;
  double eta = 0.0;
  double gamma = 0.15;
  std::optional<double> kappa;
  std::size_t paths = 0;
  std::size_t steps = 0;
  std::string shift = "level";
};

std::vector<double> geometric(double lo, double ratio, std::size_t count) {
  std::vector<double> g;
  for (std::size_t i = 0; i < count; ++i) g.push_back(lo * std::pow(ratio, static_cast<double>(i)));
  return g;
}

std::vector<rl::PathSample> verifyPaths(const Globals& g, const VerifyArgs& a, std::size_t paths, std::size_t steps) {
  const rl::PathSimulator sim(rl::Hurst(g.hurst), a.steps ? a.steps : steps);
  return rl::samplePaths(sim, a.paths ? a.paths : paths, g.seed, g.threads);
}

void printReport(const json& r) {
  std::cout << r.dump(2) << '\n';
}

// The named single-check targets; returns pass/fail and fills `report`.
bool runTarget(const Globals& g, const VerifyArgs& a, json& report) {
  const rl::Hurst h(g.hurst);
  const bool thorough = rl::parseBudget(g.budget) == rl::Budget::Thorough;
  if (a.target == "alku") {
    if (a.n < 1 || a.n > 3) throw UsageError("--n must be 1, 2 or 3");
    const rl::AlkuParams p(a.n, g.hurst, parseList(a.gammas));
    rl::AlkuBudget b;
    b.seed = g.seed;
    b.threads = g.threads;
    const auto bf = rl::alkuBruteForce(p, b);
    const double cf = rl::alkuClosedForm(p);
    const double rel = std::abs(bf.value / cf - 1.0);
    const double tol = a.n == 1 ? 1e-12 : a.n == 2 ? 1e-3 : 1e-2;
    const bool ok = rel <= tol && bf.errorEstimate <= tol * cf;
    report = {{"closedForm", cf},  {"printedForm", rl::alkuClosedFormPrinted(p)}, {"bruteForce", bf.value},
              {"errorEstimate", bf.errorEstimate}, {"relativeError", rel}, {"tolerance", tol}, {"passed", ok}};
    return ok;
  }
  if (a.target == "fourier-bound") {
    rl::FourierBoundOptions opt;
    opt.threads = g.threads;
    if (a.n == 2) opt.nodes = thorough ? 400 : 96;
    const auto r = rl::verifyFourierBound(h, a.n, a.eta, opt);
    report = {{"n", r.n},         {"eta", r.eta},           {"horizons", r.horizons}, {"integrals", r.integrals},
              {"slope", r.slope}, {"expected", r.expectedSlope}, {"tolerance", r.tolerance},
              {"finite", r.finite}, {"passed", r.passed}};
    return r.passed;
  }
  if (a.target == "moment-scaling") {
    if (a.shift != "level" && a.shift != "none") throw UsageError("--shift must be level or none");
    const auto paths = verifyPaths(g, a, 500, std::size_t{1} << 14);
    rl::MomentScalingOptions opt;
    opt.threads = g.threads;
    opt.shift = a.shift == "level" ? rl::ShiftMode::AtLevelZa : rl::ShiftMode::None;
    const auto r = rl::verifyMomentScaling(paths, h, a.n, geometric(std::ldexp(1.0, -9), 2.0, 8), opt);
    report = {{"n", a.n}, {"h", r.grid}, {"moments", r.moments}, {"slope", r.slope}, {"expected", r.expectedSlope},
              {"accepted", {r.lower, r.upper}}, {"passed", r.passed}};
    return r.passed;
  }
  if (a.target == "space-holder") {
    const auto paths = verifyPaths(g, a, 500, std::size_t{1} << 14);
    rl::SpaceHolderOptions opt;
    opt.threads = g.threads;
    const auto r = rl::verifySpaceHolder(paths, h, a.gamma, geometric(0.01, 2.0, 5), opt);
    report = {{"gamma", a.gamma}, {"y", r.grid}, {"moments", r.moments}, {"slope", r.slope},
              {"lower", r.lower}, {"passed", r.passed}};
    return r.passed;
  }
  if (a.target == "limsup") {
    const auto paths = verifyPaths(g, a, 100, std::size_t{1} << 15);
    const double kappa = a.kappa.value_or(2.0 * g.hurst);
    const auto rGrid = geometric(1.0 / 16, 0.5, 7);
    std::size_t bounded = 0;
    json ratios = json::array();
    for (const auto& p : paths) {
      const auto r = rl::limsupDiagnostic(h, p, 0.5, rGrid, kappa);
      bounded += r.bounded;
      ratios.push_back(r.ratios);
    }
    const bool ok = 10 * bounded >= 9 * paths.size();
    report = {{"kappa", kappa}, {"r", rGrid}, {"ratios", ratios}, {"boundedPaths", bounded},
              {"paths", paths.size()}, {"passed", ok}};
    return ok;
  }
  if (a.target == "irregularity") {
    const auto paths = verifyPaths(g, a, 100, std::size_t{1} << 15);
    const auto rGrid = geometric(std::ldexp(1.0, -10), 2.0, 6);
    std::vector<double> sGrid;
    for (int i = 1; i < 32; ++i) sGrid.push_back(i / 32.0);
    const auto v = rl::irregularityFloor(paths, sGrid, rGrid, g.threads);
    const std::size_t n = paths.front().steps();
    std::vector<double> line(n + 1);
    for (std::size_t i = 0; i <= n; ++i) line[i] = static_cast<double>(i) / static_cast<double>(n);
    const auto control = rl::irregularityFloor({rl::PathSample::injected(1.0 / static_cast<double>(n), line, h)}, sGrid, rGrid);
    const bool ok = v.floorMaintained && !control.floorMaintained;
    report = {{"r", rGrid}, {"medianFloor", v.medianFloor}, {"slope", v.slope}, {"maxSlope", v.maxSlope},
              {"linearSlope", control.slope}, {"passed", ok}};
    return ok;
  }
  throw UsageError("unknown verify target '" + a.target + "'");
}

bool isCriterion(const std::string& target) {
  for (const auto& c : rl::acceptanceCriteria()) {
    if (c.key == target || std::to_string(c.id) == target) return true;
  }
  return false;
}

int runVerify(const Globals& g, const VerifyArgs& a) {
  Run run("verify " + a.target, g);
  if (a.target == "all" || isCriterion(a.target)) {
    rl::SuiteOptions opt;
    opt.hurst = rl::Hurst(g.hurst);
    opt.seed = g.seed;
    opt.threads = g.threads;
    opt.budget = rl::parseBudget(g.budget);
    std::vector<std::string> keys;
    if (a.target != "all") keys.push_back(a.target);
    int failed = 0;
    json rows = json::array();
    std::printf("%-3s %-16s %-5s %s\n", "id", "criterion", "", "summary");
    const auto results = rl::runSuite(opt, keys, [&](const rl::CriterionResult& r) {
      std::printf("%-3d %-16s %-5s %s  [%.1fs]\n", r.id, r.key.c_str(), r.passed ? "PASS" : "FAIL", r.summary.c_str(),
                  r.seconds);
      std::fflush(stdout);
      failed += !r.passed;
      rows.push_back(rl::toJson(r));
      if (!r.error.empty()) run.error(r.key + ": " + r.error);
    });
    std::printf("%zu criteria, %d failed\n", results.size(), failed);
    run.results() = {{"criteria", rows}, {"failed", failed}};
    if (!g.out.empty()) {
      std::ofstream(g.out) << json{{"criteria", rows}, {"failed", failed}}.dump(2) << '\n';
    }
    run.finish(g.out);
    return failed == 0 ? 0 : kExitFailed;
  }
  run.parameters().update({{"n", a.n}, {"gammas", a.gammas}, {"eta", a.eta}, {"gamma", a.gamma}, {"paths", a.paths},
                           {"steps", a.steps}, {"shift", a.shift}});
  if (a.kappa) run.parameters()["kappa"] = *a.kappa;
  json report;
  const bool ok = runTarget(g, a, report);
  printReport(report);
  std::printf("%s %s\n", a.target.c_str(), ok ? "PASS" : "FAIL");
  run.results() = report;
  if (!g.out.empty()) std::ofstream(g.out) << report.dump(2) << '\n';
  run.finish(g.out);
  return ok ? 0 : kExitFailed;
}

// ---- report ------------------------------------------------------------------

int runReport(const Globals& g, const std::vector<std::string>& files) {
  if (files.empty()) throw UsageError("report needs at least one JSON file");
  std::vector<std::vector<std::string>> rows;
  for (const auto& f : files) {
    std::ifstream in(f);
    if (!in) throw rl::Error(rl::ErrorCode::IoError, "cannot open " + f);
    const json j = json::parse(in);
    const json& results = j.contains("command") ? j.at("results") : j;
    if (j.contains("command")) {
      std::printf("%s: %s (version %s, seed %llu, %s .. %s)\n", f.c_str(), j.value("command", "").c_str(),
                  j.value("version", "").c_str(), static_cast<unsigned long long>(j.value("seed", 0ULL)),
                  j.value("startedAt", "").c_str(), j.value("finishedAt", "").c_str());
      for (const auto& e : j.value("errors", std::vector<std::string>{})) std::printf("  error: %s\n", e.c_str());
    }
    if (results.contains("criteria")) {
      for (const auto& c : results.at("criteria")) {
        const std::string status = c.at("passed").get<bool>() ? "PASS" : "FAIL";
        std::printf("  %-3d %-16s %s  %s\n", c.at("id").get<int>(), c.at("key").get<std::string>().c_str(),
                    status.c_str(), c.at("summary").get<std::string>().c_str());
        rows.push_back({f, std::to_string(c.at("id").get<int>()), c.at("key").get<std::string>(), status,
                        c.at("summary").get<std::string>()});
      }
    } else {
      for (auto it = results.begin(); it != results.end(); ++it) {
        if (it->is_primitive()) std::printf("  %s = %s\n", it.key().c_str(), it->dump().c_str());
      }
      if (results.contains("passed")) rows.push_back({f, "", j.value("command", ""), results["passed"].get<bool>() ? "PASS" : "FAIL", ""});
    }
  }
  if (!g.out.empty()) {
    rl::CsvWriter w(g.out, {"file", "id", "check", "status", "summary"});
    for (const auto& r : rows) w.row(r);
  }
  return 0;
}

// Fills options the command line left unset from the config file.
void applyConfig(CLI::App& app, CLI::App* sub, const std::string& file) {
  const rl::Config cfg = rl::loadConfig(file);
  for (const auto& [key, value] : cfg) {
    CLI::Option* opt = sub ? sub->get_option_no_throw("--" + key) : nullptr;
    if (!opt) opt = app.get_option_no_throw("--" + key);
    if (!opt) throw UsageError("unknown config key '" + key + "'");
    if (opt->count() > 0) continue;
    opt->add_result(value);
    opt->run_callback();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rosenblatt process numerics: spectra, characteristic functions, paths, local times"};
  app.set_version_flag("--version", std::string(rl::kVersion));
  app.require_subcommand(1);
  app.fallthrough();
  app.failure_message(CLI::FailureMessage::help);

  Globals g;
  app.add_option("--hurst", g.hurst, "Hurst index H in (0.5,1)");
  app.add_option("--seed", g.seed, "master RNG seed");
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--config", g.config, "key = value file; command-line flags win");
  app.add_option("--out", g.out, "output path (a manifest is written beside it)");
  app.add_option("--budget", g.budget, "desk or thorough")->check(CLI::IsMember({"desk", "thorough"}));

  SpectrumArgs sa;
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of the Rosenblatt operator for a step profile");
  spectrum->add_option("--profile", sa.profile, "CSV with columns t,xi")->check(CLI::ExistingFile);
  spectrum->add_option("--t", sa.t, "single-interval horizon when no profile is given");
  spectrum->add_option("--xi", sa.xi, "single-interval coefficient");
  spectrum->add_option("--nodes", sa.nodes, "time-domain nodes")->check(CLI::PositiveNumber);
  spectrum->add_option("--method", sa.method, "time or spectral")->check(CLI::IsMember({"time", "spectral"}));
  spectrum->add_option("--radius", sa.radius, "spectral-domain truncation radius");
  spectrum->add_option("--tol", sa.tol, "spectral-domain relative HS tail tolerance");
  spectrum->add_flag("--no-cache", sa.noCache, "skip the eigenvalue cache");

  SpectrumArgs ca;
  ca.nodes = 400;
  std::string xiGrid = "0:8:0.1";
  auto* charfn = app.add_subcommand("charfn", "characteristic function of Z_t on a grid of xi");
  charfn->add_option("--t", ca.t, "time t");
  charfn->add_option("--xi-grid", xiGrid, "a:b:step");
  charfn->add_option("--nodes", ca.nodes, "time-domain nodes")->check(CLI::PositiveNumber);
  charfn->add_flag("--no-cache", ca.noCache, "skip the eigenvalue cache");

  SimArgs sim;
  auto* simulate = app.add_subcommand("simulate", "sample Rosenblatt paths to a binary file");
  simulate->add_option("--steps", sim.steps, "grid steps per path")->check(CLI::PositiveNumber);
  simulate->add_option("--paths", sim.paths, "number of paths");
  simulate->add_option("--factor", sim.factor, "fine fGn points per step")->check(CLI::PositiveNumber);
  simulate->add_option("--horizon", sim.horizon, "time horizon T")->check(CLI::PositiveNumber);

  LocArgs la;
  auto* loctime = app.add_subcommand("loctime", "occupation densities of stored paths");
  loctime->add_option("--paths", la.paths, "path file from simulate")->required()->check(CLI::ExistingFile);
  loctime->add_option("--interval", la.interval, "a,b");
  loctime->add_option("--bin", la.bin, "bin width")->check(CLI::PositiveNumber);
  loctime->add_option("--method", la.method, "histogram or fourier");
  loctime->add_option("--cutoff", la.cutoff, "Fourier cutoff")->check(CLI::PositiveNumber);
  loctime->add_option("--path-index", la.pathIndex, "single path (default: all)");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "acceptance checks");
  verify->add_option("target", va.target,
                     "all | alku | fourier-bound | moment-scaling | space-holder | limsup | irregularity | criterion key or id");
  verify->add_option("--n", va.n, "dimension (alku, fourier-bound) or moment order (moment-scaling)");
  verify->add_option("--gammas", va.gammas, "comma-separated gamma_j (alku)");
  verify->add_option("--eta", va.eta, "Fourier weight exponent");
  verify->add_option("--gamma", va.gamma, "space Hölder order");
  verify->add_option("--kappa", va.kappa, "iterated-log exponent (limsup, default 2H)");
  verify->add_option("--paths", va.paths, "number of paths (path-based targets)");
  verify->add_option("--steps", va.steps, "steps per path (path-based targets)");
  verify->add_option("--shift", va.shift, "level or none (moment-scaling)");

  std::vector<std::string> reportFiles;
  auto* report = app.add_subcommand("report", "summarize manifests and verify outputs");
  report->add_option("files", reportFiles, "JSON files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (!g.config.empty()) applyConfig(app, sub, g.config);
    if (!(g.hurst > 0.5 && g.hurst < 1.0)) throw UsageError("H out of (0.5,1): " + std::to_string(g.hurst));
    if (g.budget != "desk" && g.budget != "thorough") throw UsageError("budget must be desk or thorough");
    if (sub == spectrum) return runSpectrum(g, sa);
    if (sub == charfn) return runCharfn(g, ca, xiGrid);
    if (sub == simulate) return runSimulate(g, sim);
    if (sub == loctime) return runLoctime(g, la);
    if (sub == verify) return runVerify(g, va);
    return runReport(g, reportFiles);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const rl::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (e.code() == rl::ErrorCode::InvalidArgument || e.code() == rl::ErrorCode::DomainError) return kExitUsage;
    return kExitFailed;
  }
}
