#include <gtest/gtest.h>

#include <rosenlab/io.hpp>
#include <rosenlab/simulate.hpp>

#include <sstream>

using namespace rosenlab;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("rosenlab-test-" + std::to_string(::getpid()) + "-" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST(Csv, RoundTripWithQuoting) {
  TempDir dir;
  const auto file = dir.path / "t.csv";
  {
    CsvWriter w(file, {"name", "value"});
    w.row(std::vector<std::string>{"plain", "1"});
    w.row(std::vector<std::string>{"with,comma", "say \"hi\""});
    w.row(std::vector<double>{0.1, -2.5e-300});
  }
  const auto rows = readCsv(file);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"name", "value"}));
  EXPECT_EQ(rows[2], (std::vector<std::string>{"with,comma", "say \"hi\""}));
  EXPECT_EQ(std::stod(rows[3][0]), 0.1);
  EXPECT_EQ(std::stod(rows[3][1]), -2.5e-300);
}

TEST(Csv, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, 1e-310, -7.0, 6.02214076e23}) {
    const std::string t = formatDouble(v);
    double back = 0.0;
    std::from_chars(t.data(), t.data() + t.size(), back);
    EXPECT_EQ(back, v) << t;
  }
}

TEST(Config, ParsesKeysAndComments) {
  std::istringstream in("# comment\nhurst = 0.7\n\nseed=42  # trailing\nhurst = 0.8\n");
  const Config c = parseConfig(in);
  EXPECT_EQ(c.at("hurst"), "0.8");
  EXPECT_EQ(c.at("seed"), "42");
  EXPECT_EQ(c.size(), 2u);
  std::istringstream bad("no equals sign\n");
  EXPECT_THROW(parseConfig(bad), Error);
  EXPECT_THROW(loadConfig("/nonexistent/rosenlab.conf"), Error);
}

TEST(Manifest, RoundTrip) {
  TempDir dir;
  RunManifest m;
  m.seed = 42;
  m.parameters = {{"hurst", 0.7}, {"nodes", 800}};
  m.command = "spectrum";
  m.startedAt = utcTimestamp();
  m.finishedAt = utcTimestamp();
  m.outputs = {"spectrum.csv"};
  m.results = {{"lambda1", 0.5}};
  const auto file = manifestPathFor(dir.path / "spectrum.csv");
  EXPECT_EQ(file.filename(), "spectrum.csv.manifest.json");
  writeManifest(file, m);
  const RunManifest back = readManifest(file);
  EXPECT_EQ(back, m);
  EXPECT_EQ(back.version, std::string(kVersion));
}

TEST(SpectrumCache, HitMissAndFingerprint) {
  TempDir dir;
  int computed = 0;
  auto compute = [&] {
    ++computed;
    return Spectrum::fromEigenvalues({0.5, -0.25, 0.125}, SpectrumSource::TimeDomain, 1e-3);
  };
  const auto fp = spectrumFingerprint("time", {{"hurst", 0.7}, {"nodes", 10}});
  const Spectrum a = cachedSpectrum(fp, SpectrumSource::TimeDomain, compute, dir.path);
  const Spectrum b = cachedSpectrum(fp, SpectrumSource::TimeDomain, compute, dir.path);
  EXPECT_EQ(computed, 1);
  EXPECT_EQ(a.eigenvalues, b.eigenvalues);
  EXPECT_EQ(a.tailSumSquares, b.tailSumSquares);
  const auto other = spectrumFingerprint("time", {{"hurst", 0.8}, {"nodes", 10}});
  cachedSpectrum(other, SpectrumSource::TimeDomain, compute, dir.path);
  EXPECT_EQ(computed, 2);
}

TEST(SpectrumCache, FileLayoutAndRejection) {
  TempDir dir;
  const auto file = dir.path / "s.rlspec";
  const auto s = Spectrum::fromEigenvalues({1.0, 2.0});
  writeSpectrumFile(file, 99, s);
  EXPECT_EQ(fs::file_size(file), 32u + 2 * 8 + 8);
  std::ifstream in(file, std::ios::binary);
  char magic[8];
  in.read(magic, 8);
  EXPECT_EQ(std::string(magic, 8), "RLSPEC01");
  EXPECT_TRUE(readSpectrumFile(file, 99, SpectrumSource::Synthetic).has_value());
  EXPECT_FALSE(readSpectrumFile(file, 100, SpectrumSource::Synthetic).has_value());
  EXPECT_FALSE(readSpectrumFile(dir.path / "missing", 99, SpectrumSource::Synthetic).has_value());
}

TEST(PathFile, RoundTrip) {
  TempDir dir;
  const auto paths = samplePaths(PathSimulator(Hurst(0.7), 64, 1.0, 4), 3, 42);
  const auto file = dir.path / "p.bin";
  writePaths(file, paths);
  EXPECT_EQ(fs::file_size(file), 40u + 3 * 65 * 8);
  const auto back = readPaths(file);
  ASSERT_EQ(back.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back[i].values, paths[i].values);
    EXPECT_EQ(back[i].dt, paths[i].dt);
    EXPECT_EQ(back[i].seed, 42u);
    EXPECT_EQ(back[i].hurst.value(), 0.7);
  }
  EXPECT_THROW(readPaths(dir.path / "missing.bin"), Error);
}
