#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

#include "rectiscope/io.hpp"

namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("rectiscope_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(const std::string& args) {
    const std::string cmd = std::string(RECTISCOPE_CLI) + " " + args + " 2> " + path("stderr.txt");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  static std::string slurp(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  nlohmann::json json(const std::string& file) const { return nlohmann::json::parse(slurp(path(file))); }
  nlohmann::json error_record() const {
    std::istringstream in(slurp(path("stderr.txt")));
    std::string line, last;
    while (std::getline(in, line)) {
      if (!line.empty()) last = line;
    }
    return nlohmann::json::parse(last);
  }

  fs::path dir_;
};

TEST_F(Cli, SingleAtomSsum) {
  ASSERT_EQ(run("generate --kind atom --vertex 0.3,0.6 --out " + path("atom.csv")), 0);
  ASSERT_EQ(run("ssum --input " + path("atom.csv") + " --depth 20 --out " + path("s.json")), 0);
  const auto doc = json("s.json");
  EXPECT_NEAR(doc["atoms"][0]["S_K"].get<double>(), 2.82843, 1e-5);
  EXPECT_EQ(doc["atoms"][0]["classification"], "converging");
}

TEST_F(Cli, CollinearBetaIsZero) {
  ASSERT_EQ(run("generate --kind segment --level 6 --vertex 0.1,0.2 --vertex 0.9,0.6 --out " +
                path("seg.csv")),
            0);
  ASSERT_EQ(run("beta --input " + path("seg.csv") + " --depth 5 --out " + path("b.json")), 0);
  const auto doc = json("b.json");
  ASSERT_FALSE(doc.empty());
  for (const auto& row : doc) EXPECT_LE(row["beta"].get<double>(), 1e-10);
}

TEST_F(Cli, CurveOnCantorLine) {
  ASSERT_EQ(run("generate --kind cantor-quarter-line --level 6 --out " + path("c.csv")), 0);
  ASSERT_EQ(run("curve --input " + path("c.csv") +
                " --depth 12 --q0 0,0 --N 6 --eps 0.5 --eps 0.25 --out " + path("curve.json")),
            0);
  const auto doc = json("curve.json");
  ASSERT_EQ(doc["curves"].size(), 2u);
  for (const auto& m : doc["curves"]) {
    EXPECT_EQ(m["certificate"], "pass");
    EXPECT_GT(m["polyline"]["vertices"].size(), 2u);
  }
  ASSERT_EQ(run("curve --input " + path("c.csv") + " --depth 12 --N 6 --eps 0.5 --format svg --out " +
                path("curve.svg")),
            0);
  EXPECT_NE(slurp(path("curve.svg")).find("<polyline"), std::string::npos);
}

TEST_F(Cli, ReportsAreByteIdenticalAndJobIndependent) {
  ASSERT_EQ(run("generate --kind random-uniform --count 150 --seed 9 --out " + path("r.csv")), 0);
  for (const char* sub : {"beta", "ssum", "diagnose"}) {
    const std::string base = std::string(sub) + " --input " + path("r.csv") + " --depth 4";
    ASSERT_EQ(run(base + " --out " + path("a.json")), 0) << sub;
    ASSERT_EQ(run(base + " --out " + path("b.json")), 0) << sub;
    ASSERT_EQ(run(base + " --jobs 4 --out " + path("c.json")), 0) << sub;
    EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json"))) << sub;
    EXPECT_EQ(slurp(path("a.json")), slurp(path("c.json"))) << sub;
  }
  ASSERT_EQ(run("partition --input " + path("r.csv") + " --depth 4 --N 60 --eps 0.002 --format csv --out " +
                path("p1.csv")),
            0);
  ASSERT_EQ(run("partition --input " + path("r.csv") + " --depth 4 --N 60 --eps 0.002 --format csv --out " +
                path("p2.csv")),
            0);
  EXPECT_EQ(slurp(path("p1.csv")), slurp(path("p2.csv")));
}

TEST_F(Cli, GenerateRoundTripPreservesMass) {
  ASSERT_EQ(run("generate --kind circle --level 7 --vertex 0.5,0.5 --radius 0.3 --out " + path("c.csv")), 0);
  ASSERT_EQ(run("generate --kind circle --level 7 --vertex 0.5,0.5 --radius 0.3 --format json --out " +
                path("c.json")),
            0);
  const auto a = rectiscope::load_measure(path("c.csv"));
  const auto b = rectiscope::load_measure(path("c.json"));
  EXPECT_NEAR(a.total_mass(), 2.0 * M_PI * 0.3, 1e-12);
  EXPECT_NEAR(a.total_mass(), b.total_mass(), 1e-12);
}

TEST_F(Cli, UsageErrorsAreMachineReadable) {
  EXPECT_EQ(run("ssum --depth 3"), 2);
  EXPECT_EQ(error_record()["error"]["kind"], "usage");
  EXPECT_EQ(run("frobnicate"), 2);
  EXPECT_EQ(run("generate --kind nonsense"), 2);
  EXPECT_EQ(error_record()["error"]["kind"], "input");
}

TEST_F(Cli, BadInputIsRejected) {
  std::ofstream(path("bad.csv")) << "x1,x2,w\n0.1,0.2,-1\n";
  EXPECT_EQ(run("ssum --input " + path("bad.csv")), 2);
  EXPECT_NE(error_record()["error"]["message"].get<std::string>().find("line"), std::string::npos);
  EXPECT_EQ(run("ssum --input " + path("missing.csv")), 2);
}

TEST_F(Cli, ExponentRangeGate) {
  ASSERT_EQ(run("generate --kind random-uniform --n 4 --count 20 --seed 1 --out " + path("r4.csv")), 0);
  EXPECT_EQ(run("diagnose --input " + path("r4.csv") + " --m 3 --p 6 --depth 2 --out " + path("d.json")), 2);
  EXPECT_EQ(error_record()["error"]["kind"], "range");
  EXPECT_EQ(run("diagnose --input " + path("r4.csv") + " --m 3 --p 5.9 --depth 2 --out " + path("d.json")), 0);
  EXPECT_EQ(json("d.json").size(), 20u);
}

TEST_F(Cli, LogLevelFromEnvironment) {
  ASSERT_EQ(run("generate --kind atom --vertex 0.5,0.5 --out " + path("a.csv")), 0);
  const std::string cmd = "RECTISCOPE_LOG=info " + std::string(RECTISCOPE_CLI) + " ssum --input " +
                          path("a.csv") + " --out " + path("s.json") + " 2> " + path("log.txt");
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_NE(slurp(path("log.txt")).find("loaded 1 atoms"), std::string::npos);
}

}  // namespace
