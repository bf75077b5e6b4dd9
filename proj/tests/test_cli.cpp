#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "twolayer/cli.hpp"

namespace fs = std::filesystem;
using namespace twolayer;

namespace {

int run_cli(std::vector<std::string> args, std::string* out = nullptr, std::string* err = nullptr) {
  args.insert(args.begin(), "twolayer_cli");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream o, e;
  const int code = cli::main(static_cast<int>(argv.size()), argv.data(), o, e);
  if (out) *out = o.str();
  if (err) *err = e.str();
  return code;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("twolayer_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, RunWritesFramesManifestAndErrors) {
  std::string out;
  const fs::path o = dir_ / "wb";
  ASSERT_EQ(run_cli({"run", "--scenario", "wb-jump-wet", "--n", "100", "--t-final", "10", "--out",
                     o.string()}, &out),
            0);
  EXPECT_TRUE(fs::exists(o / "frame_0000.csv"));
  EXPECT_TRUE(fs::exists(o / "frame_0001.csv"));
  EXPECT_TRUE(fs::exists(o / "stacked.csv"));
  const auto manifest = nlohmann::json::parse(slurp(o / "manifest.json"));
  EXPECT_EQ(manifest["eigensolver"], "linearized-dynamic");
  EXPECT_EQ(manifest["dry_tolerance"], 1e-3);
  EXPECT_GT(manifest["steps"].get<long>(), 0);
  EXPECT_TRUE(manifest.contains("wall_clock_seconds"));
  EXPECT_TRUE(manifest.contains("max_cfl"));
  EXPECT_TRUE(manifest.contains("clipped_mass"));
  const auto errors = nlohmann::json::parse(slurp(o / "errors.json"));
  for (const auto& [field, e] : errors["fields"].items()) {
    EXPECT_EQ(e["l1"].get<double>(), 0.0) << field;
    EXPECT_EQ(e["linf"].get<double>(), 0.0) << field;
  }
  EXPECT_NE(slurp(o / "stacked.csv").find("t,x,b,h1"), std::string::npos);
}

TEST_F(CliTest, IdenticalConfigGivesIdenticalFiles) {
  for (const char* sub : {"a", "b"}) {
    ASSERT_EQ(run_cli({"run", "--scenario", "wave4", "--n", "64", "--t-final", "0.05", "--frames",
                       "3", "--eigen", "direct", "--out", (dir_ / sub).string()}),
              0);
  }
  for (const char* f : {"frame_0000.csv", "frame_0001.csv", "frame_0002.csv", "stacked.csv", "config.txt"})
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
}

TEST_F(CliTest, ConfigFileAndFlagPrecedence) {
  {
    std::ofstream cfg(dir_ / "run.cfg");
    cfg << "scenario = wave3\nn = 40\nt_final = 0.02\nlimiter = mc\n";
  }
  const fs::path o = dir_ / "out";
  ASSERT_EQ(run_cli({"run", "--config", (dir_ / "run.cfg").string(), "--n", "48", "--out", o.string()}), 0);
  const auto manifest = nlohmann::json::parse(slurp(o / "manifest.json"));
  EXPECT_EQ(manifest["n_cells"], 48);
  EXPECT_EQ(manifest["limiter"], "mc");
  EXPECT_EQ(manifest["t_final"], 0.02);
}

TEST_F(CliTest, OutputRootFromEnvironment) {
  ::setenv(cli::kOutputRootEnv, dir_.string().c_str(), 1);
  const int code = run_cli({"run", "--scenario", "wb-smooth-wet", "--n", "20", "--t-final", "0.1"});
  ::unsetenv(cli::kOutputRootEnv);
  ASSERT_EQ(code, 0);
  EXPECT_TRUE(fs::exists(dir_ / "wb-smooth-wet" / "manifest.json"));
}

TEST_F(CliTest, ConvergeWritesOrderTable) {
  std::string out;
  const fs::path o = dir_ / "conv";
  ASSERT_EQ(run_cli({"converge", "--scenario", "wave4", "--resolutions", "16,32,64",
                     "--reference-n", "256", "--t-final", "0.05", "--out", o.string()}, &out),
            0);
  const auto j = nlohmann::json::parse(slurp(o / "errors.json"));
  EXPECT_EQ(j["errors"].size(), 3u);
  EXPECT_TRUE(j["order"]["h2"].is_number());
  EXPECT_TRUE(fs::exists(o / "n16" / "frame_final.csv"));
  EXPECT_TRUE(fs::exists(o / "n256" / "frame_final.csv"));
  EXPECT_NE(out.find("order"), std::string::npos);
}

TEST_F(CliTest, WellBalancedSuiteTable) {
  std::string out;
  ASSERT_EQ(run_cli({"well-balanced-suite", "--n", "20", "--t-final", "0.5", "--out", dir_.string()}, &out), 0);
  EXPECT_NE(out.find("Jump"), std::string::npos);
  EXPECT_NE(out.find("Smooth"), std::string::npos);
  const auto j = nlohmann::json::parse(slurp(dir_ / "errors.json"));
  EXPECT_EQ(j.size(), 4u);
}

TEST_F(CliTest, ExitCodes) {
  std::string err;
  EXPECT_EQ(run_cli({"run", "--scenario", "nope", "--out", dir_.string()}, nullptr, &err), cli::kExitConfig);
  EXPECT_NE(err.find("unknown scenario"), std::string::npos);
  EXPECT_EQ(run_cli({"run", "--bogus-flag"}, nullptr, &err), cli::kExitConfig);
  EXPECT_EQ(run_cli({"run", "--scenario", "wave3", "--n", "2", "--out", dir_.string()}), cli::kExitConfig);
  EXPECT_EQ(run_cli({"converge", "--scenario", "wave3", "--resolutions", "16,32", "--out", dir_.string()}),
            cli::kExitConfig);
  {
    // shear beyond the hyperbolic limit: the Direct solver cannot proceed
    std::ofstream cfg(dir_ / "shear.cfg");
    cfg << "scenario = wave3\nbathymetry = flat\nrho1 = 999\nperturbation.epsilon = 0.3\n"
           "eigen = direct\nn = 40\nt_final = 0.5\n";
  }
  EXPECT_EQ(run_cli({"run", "--config", (dir_ / "shear.cfg").string(), "--out", (dir_ / "s").string()},
                    nullptr, &err),
            cli::kExitSolver);
  EXPECT_NE(err.find("solver failure"), std::string::npos);
}
