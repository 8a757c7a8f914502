#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "qcalc/json_io.hpp"

namespace fs = std::filesystem;
using qcalc::Json;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("qcalc_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const std::string& text) {
    const fs::path p = dir_ / "config.json";
    std::ofstream(p) << text;
    return p;
  }

  int run(const std::string& args) {
    const std::string cmd = std::string(QCALC_CLI_PATH) + " " + args + " > " + (dir_ / "stdout.txt").string() +
                            " 2> " + (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
  }

  static Json load(const fs::path& p) { return Json::parse(slurp(p)); }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, SpectrumOfDiagonalOperator) {
  const auto cfg = write_config(R"({"operator": {"diag": [[1, 2, 0, 0], 3]}, "commands": [{"verb": "spectrum"}]})");
  const fs::path out = dir_ / "out";
  ASSERT_EQ(run("spectrum --config " + cfg.string() + " --out " + out.string()), 0);
  const Json j = load(out / "01_spectrum.json");
  ASSERT_EQ(j["spheres"].size(), 2u);
  EXPECT_NEAR(j["spheres"][0]["x0"].get<double>(), 1.0, 1e-10);
  EXPECT_NEAR(j["spheres"][0]["x1"].get<double>(), 2.0, 1e-10);
  EXPECT_NEAR(j["spheres"][1]["x0"].get<double>(), 3.0, 1e-10);
  EXPECT_NEAR(j["spheres"][1]["x1"].get<double>(), 0.0, 1e-10);
  EXPECT_EQ(slurp(out / "01_spectrum.csv").rfind("x0,x1,multiplicity\n", 0), 0u);
  const Json summary = load(out / "summary.json");
  EXPECT_TRUE(summary["pass"].get<bool>());
  EXPECT_EQ(summary["exit_code"].get<int>(), 0);
}

TEST_F(CliTest, CompareKernelMeasure) {
  const auto cfg = write_config(R"({
    "operator": {"diag": [[0, 1, 0, 0], [0, 0, 0.5, 0]]},
    "measures": {"mu10": {"kernel": {"p": 10}}},
    "commands": [{"verb": "compare", "name": "cmp", "params": {"measure": "mu10", "alpha": 5, "c": 0.5}}]
  })");
  const fs::path out = dir_ / "out";
  ASSERT_EQ(run("compare --config " + cfg.string() + " --out " + out.string() + " --format json"), 0);
  const Json j = load(out / "cmp.json");
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_LT(j["max_residual"].get<double>(), 1e-6);
  EXPECT_TRUE(j["routes"].contains("strip"));
  EXPECT_FALSE(fs::exists(out / "cmp.csv"));
}

TEST_F(CliTest, EmptyCommandListPasses) {
  const auto cfg = write_config(R"({"commands": []})");
  const fs::path out = dir_ / "out";
  EXPECT_EQ(run("run --config " + cfg.string() + " --out " + out.string()), 0);
  const Json summary = load(out / "summary.json");
  EXPECT_EQ(summary["checks_total"].get<int>(), 0);
  EXPECT_TRUE(summary["pass"].get<bool>());
}

TEST_F(CliTest, SelftestIsDeterministic) {
  const fs::path a = dir_ / "a";
  const fs::path b = dir_ / "b";
  ASSERT_EQ(run("selftest --criteria 1 2 8 --out " + a.string()), 0);
  ASSERT_EQ(run("selftest --criteria 1 2 8 --out " + b.string()), 0);
  EXPECT_EQ(slurp(a / "selftest.json"), slurp(b / "selftest.json"));
  EXPECT_EQ(slurp(a / "summary.json"), slurp(b / "summary.json"));
  const Json j = load(a / "selftest.json");
  EXPECT_EQ(j["criteria"].size(), 3u);
  EXPECT_EQ(j["seed"].get<std::uint64_t>(), 20240611u);
}

TEST_F(CliTest, SelftestMutationCriterion) {
  const fs::path out = dir_ / "out";
  ASSERT_EQ(run("selftest --criteria 13 --out " + out.string()), 0);
  EXPECT_TRUE(load(out / "selftest.json")["criteria"][0]["pass"].get<bool>());
}

TEST_F(CliTest, ValidationErrorExitsOneBeforeRunning) {
  const auto cfg = write_config(R"({
    "operator": {"diag": [1, 2]},
    "commands": [{"verb": "spectrum"}, {"verb": "compare", "params": {"measure": "missing", "alpha": 5, "c": 0.5}}]
  })");
  const fs::path out = dir_ / "out";
  EXPECT_EQ(run("run --config " + cfg.string() + " --out " + out.string()), 1);
  EXPECT_FALSE(fs::exists(out / "01_spectrum.json"));
  EXPECT_NE(slurp(dir_ / "stderr.txt").find("commands[1]"), std::string::npos);
}

TEST_F(CliTest, SyntaxErrorExitsOne) {
  const auto cfg = write_config("{\"commands\": [\n");
  EXPECT_EQ(run("run --config " + cfg.string() + " --out " + (dir_ / "out").string()), 1);
  EXPECT_NE(slurp(dir_ / "stderr.txt").find("line"), std::string::npos);
}

TEST_F(CliTest, ResolventOnSpectrumIsRejected) {
  const auto cfg = write_config(R"({"operator": {"diag": [2, 3]},
    "commands": [{"verb": "resolvent", "params": {"s": 2}}]})");
  EXPECT_EQ(run("resolvent --config " + cfg.string() + " --out " + (dir_ / "out").string()), 1);
  EXPECT_NE(slurp(dir_ / "stderr.txt").find("commands[0].params.s"), std::string::npos);
}

TEST_F(CliTest, FailedCheckExitsTwo) {
  const auto cfg = write_config(R"({"operator": {"diag": [[0, 1, 0, 0], [0, 0, 0.5, 0]]},
    "measures": {"mu3": {"kernel": {"p": 3}}},
    "commands": [{"verb": "invert", "params": {"measure": "mu3", "polynomials": [[4, -1]]}}]})");
  const fs::path out = dir_ / "out";
  EXPECT_EQ(run("invert --config " + cfg.string() + " --out " + out.string()), 2);
  EXPECT_FALSE(load(out / "summary.json")["pass"].get<bool>());
}

TEST_F(CliTest, DemoConfigPasses) {
  const fs::path out = dir_ / "out";
  EXPECT_EQ(run(std::string("run --config ") + QCALC_SOURCE_DIR + "/configs/demo.json --out " + out.string()), 0);
  EXPECT_TRUE(fs::exists(out / "summary.json"));
}

TEST_F(CliTest, UnknownFlagExitsOne) {
  EXPECT_EQ(run("run --bogus"), 1);
}

TEST_F(CliTest, StripWiderThanAdmissibleStripIsRejected) {
  const auto cfg = write_config(R"({"operator": {"diag": [[0, 1, 0, 0], [0, 0, 0.5, 0]]},
    "measures": {"mu10": {"kernel": {"p": 10}}},
    "commands": [{"verb": "compare", "params": {"measure": "mu10", "alpha": 5, "c": 1.5}}]})");
  EXPECT_EQ(run("compare --config " + cfg.string() + " --out " + (dir_ / "out").string()), 1);
  EXPECT_NE(slurp(dir_ / "stderr.txt").find("commands[0].params.c"), std::string::npos);
}
