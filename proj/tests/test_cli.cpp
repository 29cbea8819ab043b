#include <gtest/gtest.h>

#include <rosenlab/io.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sys/wait.h>
#include <unistd.h>

using namespace rosenlab;

namespace {

struct Result {
  int code = -1;
  std::string output;
};

struct Sandbox {
  fs::path dir;
  Sandbox() {
    dir = fs::temp_directory_path() / ("rosenlab-cli-" + std::to_string(::getpid()) + "-" +
                                       ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir);
    fs::create_directories(dir / "cache");
    ::setenv("ROSENLAB_CACHE_DIR", (dir / "cache").c_str(), 1);
  }
  ~Sandbox() { fs::remove_all(dir); }

  Result run(const std::string& args) const {
    const std::string cmd = std::string(ROSENLAB_CLI_PATH) + " " + args + " 2>&1";
    Result r;
    FILE* p = ::popen(cmd.c_str(), "r");
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.output.append(buf.data(), n);
    const int status = ::pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
  }

  std::string file(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST(Cli, SpectrumWritesCsvAndManifest) {
  Sandbox s;
  const auto r = s.run("spectrum --nodes 100 --out " + s.file("spec.csv"));
  ASSERT_EQ(r.code, 0) << r.output;
  const auto rows = readCsv(s.file("spec.csv"));
  ASSERT_GT(rows.size(), 10u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"k", "eigenvalue", "singular_value"}));
  const auto m = readManifest(manifestPathFor(s.file("spec.csv")));
  EXPECT_EQ(m.command, "spectrum");
  EXPECT_EQ(m.seed, 42u);
  EXPECT_EQ(m.parameters.at("nodes").get<int>(), 100);
  EXPECT_TRUE(m.errors.empty());
  // Second run hits the cache and gives the same file.
  ASSERT_EQ(s.run("spectrum --nodes 100 --out " + s.file("again.csv")).code, 0);
  EXPECT_EQ(readCsv(s.file("again.csv")), rows);
}

TEST(Cli, UsageErrors) {
  Sandbox s;
  EXPECT_EQ(s.run("spectrum --no-such-flag").code, 2);
  EXPECT_EQ(s.run("").code, 2);
  const auto r = s.run("spectrum --hurst 1.2");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("H out of (0.5,1)"), std::string::npos) << r.output;
  EXPECT_EQ(s.run("verify nonsense").code, 2);
  EXPECT_EQ(s.run("--version").code, 0);
}

TEST(Cli, ConfigFileAndFlagPrecedence) {
  Sandbox s;
  std::ofstream(s.file("run.conf")) << "# test config\nhurst = 0.8\nnodes = 60\nseed = 7\n";
  ASSERT_EQ(s.run("spectrum --config " + s.file("run.conf") + " --nodes 80 --out " + s.file("a.csv")).code, 0);
  const auto m = readManifest(manifestPathFor(s.file("a.csv")));
  EXPECT_EQ(m.parameters.at("hurst").get<double>(), 0.8);
  EXPECT_EQ(m.parameters.at("nodes").get<int>(), 80);
  EXPECT_EQ(m.seed, 7u);
  std::ofstream(s.file("bad.conf")) << "colour = blue\n";
  EXPECT_EQ(s.run("spectrum --config " + s.file("bad.conf")).code, 2);
}

TEST(Cli, VerifyScaling) {
  Sandbox s;
  const auto r = s.run("verify scaling --out " + s.file("v.json"));
  EXPECT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("PASS"), std::string::npos);
  const auto rep = s.run("report " + s.file("v.json") + " " + manifestPathFor(s.file("v.json")).string());
  EXPECT_EQ(rep.code, 0) << rep.output;
  EXPECT_NE(rep.output.find("scaling"), std::string::npos);
}

TEST(Cli, SimulateThenLoctime) {
  Sandbox s;
  ASSERT_EQ(s.run("simulate --steps 256 --paths 3 --factor 4 --seed 5 --out " + s.file("p.bin")).code, 0);
  const auto paths = readPaths(s.file("p.bin"));
  ASSERT_EQ(paths.size(), 3u);
  EXPECT_EQ(paths[0].steps(), 256u);
  const auto r = s.run("loctime --paths " + s.file("p.bin") + " --interval 0,1 --bin 0.05 --out " + s.file("l.csv"));
  ASSERT_EQ(r.code, 0) << r.output;
  const auto rows = readCsv(s.file("l.csv"));
  double mass0 = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i][0] == "0") mass0 += 0.05 * std::stod(rows[i][2]);
  }
  EXPECT_NEAR(mass0, 1.0, 1e-9);
  const auto f = s.run("loctime --paths " + s.file("p.bin") + " --method fourier --path-index 1 --bin 0.05");
  EXPECT_EQ(f.code, 0) << f.output;
  EXPECT_EQ(s.run("loctime --paths " + s.file("p.bin") + " --path-index 9").code, 2);
}

TEST(Cli, Charfn) {
  Sandbox s;
  const auto r = s.run("charfn --nodes 100 --xi-grid 0:1:0.5");
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("xi,modulus,re,im"), std::string::npos);
  EXPECT_NE(r.output.find("\n0,1,1,0"), std::string::npos) << r.output;
}
