#pragma once

// Files: eigenvalue cache, path files, CSV tables, run manifests and
// key = value configuration.

#include <bit>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <json.hpp>

#include "core.hpp"

namespace rosenlab {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

namespace fs = std::filesystem;

/// Shortest round-trip text for a double, independent of the C locale.
inline std::string formatDouble(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// ---- CSV ------------------------------------------------------------------

inline std::string csvField(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& header) : out_(path, std::ios::binary) {
    require(out_.good(), ErrorCode::IoError, "cannot open " + path.string());
    row(header);
  }

  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << csvField(fields[i]);
    }
    out_ << "\r\n";
  }

  void row(const std::vector<double>& values) {
    std::vector<std::string> f;
    f.reserve(values.size());
    for (double v : values) f.push_back(formatDouble(v));
    row(f);
  }

 private:
  std::ofstream out_;
};

/// Parses a CSV produced by CsvWriter (quoted fields allowed, no embedded newlines).
inline std::vector<std::vector<std::string>> readCsv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::IoError, "cannot open " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      char c = line[i];
      if (quoted) {
        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          fields.back() += '"';
          ++i;
        } else if (c == '"') {
          quoted = false;
        } else {
          fields.back() += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        fields.emplace_back();
      } else {
        fields.back() += c;
      }
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

// ---- configuration ----------------------------------------------------------

using Config = std::map<std::string, std::string>;

/// `key = value` lines; '#' starts a comment; later keys win.
inline Config parseConfig(std::istream& in) {
  Config cfg;
  std::string line;
  int lineNo = 0;
  auto trim = [](std::string s) {
    const char* ws = " \t\r\n";
    s.erase(0, s.find_first_not_of(ws));
    s.erase(s.find_last_not_of(ws) + 1);
    return s;
  };
  while (std::getline(in, line)) {
    ++lineNo;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    require(eq != std::string::npos, ErrorCode::InvalidArgument,
            "config line " + std::to_string(lineNo) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    require(!key.empty(), ErrorCode::InvalidArgument, "config line " + std::to_string(lineNo) + ": empty key");
    cfg[key] = trim(line.substr(eq + 1));
  }
  return cfg;
}

inline Config loadConfig(const fs::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::IoError, "cannot open config " + path.string());
  return parseConfig(in);
}

// ---- manifest ---------------------------------------------------------------

struct RunManifest {
  std::uint64_t seed = 0;
  nlohmann::json parameters = nlohmann::json::object();
  std::string version{kVersion};
  std::string command;
  std::string startedAt;
  std::string finishedAt;
  std::vector<std::string> outputs;
  nlohmann::json results = nlohmann::json::object();
  std::vector<std::string> errors;

  nlohmann::json toJson() const {
    return {{"seed", seed},         {"parameters", parameters}, {"version", version},
            {"command", command},   {"startedAt", startedAt},   {"finishedAt", finishedAt},
            {"outputs", outputs},   {"results", results},       {"errors", errors}};
  }

  static RunManifest fromJson(const nlohmann::json& j) {
    RunManifest m;
    m.seed = j.at("seed").get<std::uint64_t>();
    m.parameters = j.at("parameters");
    m.version = j.at("version").get<std::string>();
    m.command = j.value("command", "");
    m.startedAt = j.value("startedAt", "");
    m.finishedAt = j.value("finishedAt", "");
    m.outputs = j.value("outputs", std::vector<std::string>{});
    m.results = j.value("results", nlohmann::json::object());
    m.errors = j.value("errors", std::vector<std::string>{});
    return m;
  }

  friend bool operator==(const RunManifest& a, const RunManifest& b) { return a.toJson() == b.toJson(); }
};

/// UTC time in ISO 8601.
inline std::string utcTimestamp() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline fs::path manifestPathFor(const fs::path& output) {
  fs::path p = output;
  p += ".manifest.json";
  return p;
}

inline void writeManifest(const fs::path& path, const RunManifest& m) {
  std::ofstream out(path);
  require(out.good(), ErrorCode::IoError, "cannot write manifest " + path.string());
  out << m.toJson().dump(2) << '\n';
}

inline RunManifest readManifest(const fs::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::IoError, "cannot read manifest " + path.string());
  return RunManifest::fromJson(nlohmann::json::parse(in));
}

// ---- binary helpers ---------------------------------------------------------

namespace detail {

template <class T>
void putRaw(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T getRaw(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  require(in.good(), ErrorCode::IoError, "truncated binary file");
  return v;
}

/// Advisory lock held for the lifetime of the object.
class FileLock {
 public:
  FileLock(const fs::path& path, bool exclusive) {
    fd_ = ::open(path.c_str(), O_RDWR | O_CREAT, 0644);
    require(fd_ >= 0, ErrorCode::IoError, "cannot open lock file " + path.string());
    if (::flock(fd_, exclusive ? LOCK_EX : LOCK_SH) != 0) {
      ::close(fd_);
      throw Error(ErrorCode::IoError, "cannot lock " + path.string());
    }
  }
  ~FileLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_ = -1;
};

}  // namespace detail

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// ---- eigenvalue cache -------------------------------------------------------

inline constexpr char kSpectrumMagic[8] = {'R', 'L', 'S', 'P', 'E', 'C', '0', '1'};

/// ROSENLAB_CACHE_DIR, else $XDG_CACHE_HOME/rosenlab, else ~/.cache/rosenlab.
inline fs::path cacheDirectory() {
  if (const char* d = std::getenv("ROSENLAB_CACHE_DIR"); d && *d) return d;
  if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x) return fs::path(x) / "rosenlab";
  if (const char* home = std::getenv("HOME"); home && *home) return fs::path(home) / ".cache" / "rosenlab";
  return fs::temp_directory_path() / "rosenlab-cache";
}

/// Operator fingerprint: a canonical text description of everything the
/// spectrum depends on.
inline std::string spectrumFingerprint(std::string_view kind, const nlohmann::json& params) {
  return std::string(kind) + ":" + params.dump() + ":" + std::string(kVersion);
}

// Layout: 32-byte header (magic, fingerprint hash, value count, discretization
// size), then count signed eigenvalues, then the tail sum of squares.
inline void writeSpectrumFile(const fs::path& path, std::uint64_t hash, const Spectrum& s) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), ErrorCode::IoError, "cannot write " + path.string());
  out.write(kSpectrumMagic, 8);
  detail::putRaw<std::uint64_t>(out, hash);
  detail::putRaw<std::uint64_t>(out, s.eigenvalues.size());
  detail::putRaw<std::uint64_t>(out, s.discretizationSize);
  out.write(reinterpret_cast<const char*>(s.eigenvalues.data()),
            static_cast<std::streamsize>(s.eigenvalues.size() * sizeof(double)));
  detail::putRaw<double>(out, s.tailSumSquares);
  require(out.good(), ErrorCode::IoError, "short write to " + path.string());
}

/// nullopt when the file is absent, malformed or carries another fingerprint.
inline std::optional<Spectrum> readSpectrumFile(const fs::path& path, std::uint64_t hash, SpectrumSource source) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) return std::nullopt;
  char magic[8];
  in.read(magic, 8);
  if (!in.good() || std::memcmp(magic, kSpectrumMagic, 8) != 0) return std::nullopt;
  try {
    if (detail::getRaw<std::uint64_t>(in) != hash) return std::nullopt;
    const auto count = detail::getRaw<std::uint64_t>(in);
    const auto disc = detail::getRaw<std::uint64_t>(in);
    std::vector<double> eig(count);
    in.read(reinterpret_cast<char*>(eig.data()), static_cast<std::streamsize>(count * sizeof(double)));
    if (!in.good()) return std::nullopt;
    const double tail = detail::getRaw<double>(in);
    Spectrum s = Spectrum::fromEigenvalues(std::move(eig), source, tail);
    s.discretizationSize = disc;
    return s;
  } catch (const Error&) {
    return std::nullopt;
  }
}

/// Returns the cached spectrum for the fingerprint, computing and storing it
/// on a miss. Concurrent processes serialize on a per-entry lock file.
inline Spectrum cachedSpectrum(const std::string& fingerprint, SpectrumSource source,
                               const std::function<Spectrum()>& compute, const fs::path& dir = cacheDirectory()) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) return compute();
  const std::uint64_t hash = fnv1a(fingerprint);
  char name[40];
  std::snprintf(name, sizeof name, "%016llx.rlspec", static_cast<unsigned long long>(hash));
  const fs::path file = dir / name;
  fs::path lockPath = file;
  lockPath += ".lock";
  detail::FileLock lock(lockPath, true);
  if (auto hit = readSpectrumFile(file, hash, source)) return *hit;
  Spectrum s = compute();
  fs::path tmp = file;
  tmp += ".tmp";
  writeSpectrumFile(tmp, hash, s);
  fs::rename(tmp, file);
  return s;
}

// ---- path files -------------------------------------------------------------

inline constexpr char kPathMagic[8] = {'R', 'L', 'P', 'A', 'T', 'H', '0', '1'};

// Header: magic, H, dt, nSteps, seed (40 bytes); then nSteps+1 doubles per path.
inline void writePaths(const fs::path& path, const std::vector<PathSample>& paths) {
  require(!paths.empty(), ErrorCode::InvalidArgument, "no paths to write");
  const auto& first = paths.front();
  for (const auto& p : paths) {
    require(p.steps() == first.steps() && p.dt == first.dt && p.hurst == first.hurst, ErrorCode::InvalidArgument,
            "paths in one file must share H, dt and length");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), ErrorCode::IoError, "cannot write " + path.string());
  out.write(kPathMagic, 8);
  detail::putRaw<double>(out, first.hurst.value());
  detail::putRaw<double>(out, first.dt);
  detail::putRaw<std::uint64_t>(out, first.steps());
  detail::putRaw<std::uint64_t>(out, first.seed);
  for (const auto& p : paths) {
    out.write(reinterpret_cast<const char*>(p.values.data()),
              static_cast<std::streamsize>(p.values.size() * sizeof(double)));
  }
  require(out.good(), ErrorCode::IoError, "short write to " + path.string());
}

inline std::vector<PathSample> readPaths(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::IoError, "cannot open " + path.string());
  char magic[8];
  in.read(magic, 8);
  require(in.good() && std::memcmp(magic, kPathMagic, 8) == 0, ErrorCode::IoError,
          path.string() + " is not a path file");
  const double h = detail::getRaw<double>(in);
  const double dt = detail::getRaw<double>(in);
  const auto steps = detail::getRaw<std::uint64_t>(in);
  const auto seed = detail::getRaw<std::uint64_t>(in);
  const auto start = in.tellg();
  in.seekg(0, std::ios::end);
  const auto bytes = static_cast<std::uint64_t>(in.tellg() - start);
  in.seekg(start);
  const std::uint64_t perPath = (steps + 1) * sizeof(double);
  require(bytes % perPath == 0, ErrorCode::IoError, "path file size is not a whole number of paths");
  const Hurst hurst(h);
  std::vector<PathSample> out;
  for (std::uint64_t k = 0; k < bytes / perPath; ++k) {
    std::vector<double> v(steps + 1);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(perPath));
    require(in.good(), ErrorCode::IoError, "truncated path file");
    out.emplace_back(dt, std::move(v), hurst, seed, PathGenerator::Hermite2Fgn);
  }
  return out;
}

}  // namespace rosenlab
