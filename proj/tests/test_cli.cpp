#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wwlab/cli.hpp"

using namespace wwlab;
namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.status = cli_dispatch(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("wwlab_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Cli, VdcRandomTrials) {
  const auto r = run({"vdc-check", "--random", "--trials", "1000", "--seed", "7"});
  EXPECT_EQ(r.status, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 1000u);
  for (const auto& row : rows) {
    const auto j = nlohmann::json::parse(row);
    EXPECT_GE(j.at("slack").get<double>(), -1e-9);
    EXPECT_LT(j.at("H").get<std::size_t>(), j.at("N").get<std::size_t>());
  }
  EXPECT_EQ(run({"vdc-check", "--random", "--trials", "1000", "--seed", "7"}).out, r.out);
}

TEST(Cli, AverageOfConstantsIsOne) {
  const auto r = run({"average", "--system", "rotation", "--alpha-num", "1", "--alpha-den", "4", "--f1", "const_one",
                      "--f2", "const_one", "--a", "1", "--b", "2", "--p", ""});
  EXPECT_EQ(r.status, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_GT(rows.size(), 1u);
  EXPECT_EQ(rows[0], "N,re,im,modulus");
  std::size_t expect_n = 1;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i], std::to_string(expect_n) + ",1,0,1");
    expect_n *= 2;
  }
}

TEST(Cli, MissingConfigFile) {
  const auto r = run({"experiment", "--config", "missing.toml"});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("not found"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("missing.toml"), std::string::npos);
}

TEST(Cli, UnknownFlagPrintsUsage) {
  const auto r = run({"average", "--frobnicate", "3"});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("Usage"), std::string::npos) << r.err;
  EXPECT_EQ(run({"teleport"}).status, 1);
  EXPECT_EQ(run({}).status, 1);
}

TEST(Cli, HelpExitsZero) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.status, 0);
  EXPECT_NE((r.out + r.err).find("vdc-check"), std::string::npos);
}

TEST(Cli, BadObservableIsInputError) {
  const auto r = run({"average", "--system", "rotation", "--f1", "nonsense"});
  EXPECT_NE(r.status, 0);
}

TEST(Cli, VdcInputFile) {
  const auto dir = scratch_dir("vdc");
  const auto path = dir / "a.csv";
  std::ofstream(path) << "re,im\n1,0\n-1,0\n1,0\n-1,0\n";
  const auto r = run({"vdc-check", "--input", path.string(), "--H", "1"});
  EXPECT_EQ(r.status, 0) << r.err;
  const auto j = nlohmann::json::parse(lines(r.out).at(0));
  EXPECT_NEAR(j.at("rhs").get<double>(), 5.0 / 32.0, 1e-12);
  EXPECT_NEAR(j.at("lhs").get<double>(), 0.0, 1e-12);

  const auto every = run({"vdc-check", "--input", path.string()});
  EXPECT_EQ(lines(every.out).size(), 4u);
  EXPECT_EQ(run({"vdc-check", "--input", (dir / "nope.csv").string()}).status, 1);
  EXPECT_EQ(run({"vdc-check"}).status, 1);
}

TEST(Cli, OrbitOfQuarterRotation) {
  const auto r = run({"orbit", "--system", "rotation", "--alpha", "1/4", "--x", "0", "--length", "5", "--f", "character_x(1)"});
  EXPECT_EQ(r.status, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[1].substr(0, 2), "0,");
  EXPECT_NE(rows[2].find("0x4000000000000000"), std::string::npos);
  EXPECT_NE(rows[3].find("0x8000000000000000"), std::string::npos);
}

TEST(Cli, SeminormJsonLines) {
  const auto r = run({"seminorm", "--system", "bernoulli", "--f", "rademacher_bit", "--k", "2", "--N", "1024", "--H",
                      "32", "--points", "3"});
  EXPECT_EQ(r.status, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& row : rows) {
    const auto j = nlohmann::json::parse(row);
    for (const char* key : {"system", "observable", "k", "N", "H", "value", "seed"}) EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_EQ(run({"seminorm", "--f", "const_one", "--k", "2", "--N", "64", "--H", "40"}).status, 1);
}

TEST(Cli, SupWwJson) {
  const auto r = run({"sup-ww", "--system", "rotation", "--f1", "const_one", "--f2", "const_one", "--N", "256"});
  EXPECT_EQ(r.status, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j.at("sup_value").get<double>(), 1.0, 1e-12);
}

TEST(Cli, ExperimentWritesOutputs) {
  const auto dir = scratch_dir("experiment");
  const auto cfg = dir / "conv.toml";
  std::ofstream(cfg) << "experiment = \"convergence\"\nsamples = 3\n[average]\nn_max = 64\n";
  const auto r = run({"experiment", "--config", cfg.string(), "--output-dir", dir.string()});
  EXPECT_EQ(r.status, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].substr(0, 17), "PASS convergence:");
  EXPECT_TRUE(fs::exists(rows[1]));
  EXPECT_TRUE(fs::exists(rows[2]));

  const auto reseeded = run({"experiment", "--config", cfg.string(), "--output-dir", dir.string(), "--seed", "9"});
  EXPECT_EQ(reseeded.status, 0);
  EXPECT_NE(lines(reseeded.out).at(1), rows[1]);

  const auto failing = dir / "fail.toml";
  std::ofstream(failing) << "experiment = \"uniformity\"\nsamples = 2\n[average]\nn_max = 64\n[assert]\ndecay_ratio = 0.5\n";
  EXPECT_EQ(run({"experiment", "--config", failing.string(), "--output-dir", dir.string()}).status, 2);

  const auto broken = dir / "broken.toml";
  std::ofstream(broken) << "experiment = \n";
  EXPECT_EQ(run({"experiment", "--config", broken.string()}).status, 1);
}
