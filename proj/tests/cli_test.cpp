#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "planmerge/metrics.hpp"

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(PLANMERGE_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("planmerge_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run_cli(""), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli("run --preset exp9 --out /tmp/x"), 2);
  EXPECT_EQ(run_cli("run --preset exp1"), 2);
  EXPECT_EQ(run_cli("run --preset exp1 --method 5 --out /tmp/x"), 2);
  EXPECT_EQ(run_cli("run --preset exp1 --seeds 0 --out /tmp/x"), 2);
  EXPECT_EQ(run_cli("aggregate --in /tmp"), 2);
}

TEST(Cli, BadConfigValueExitsTwo) {
  const fs::path dir = temp_dir("badcfg");
  fs::create_directories(dir);
  std::ofstream(dir / "c.cfg") << "num_nodes=500\n";
  EXPECT_EQ(run_cli("run --preset exp1 --config " + (dir / "c.cfg").string() + " --out " +
                    (dir / "out").string()),
            2);
  fs::remove_all(dir);
}

TEST(Cli, RunWritesRawAndAggregateFiles) {
  const fs::path dir = temp_dir("run");
  ASSERT_EQ(run_cli("run --preset exp1 --method all --seeds 3 --out " + dir.string()), 0);
  for (int m = 0; m < 4; ++m) {
    const fs::path raw = dir / ("raw_exp1_" + std::to_string(m) + ".csv");
    ASSERT_TRUE(fs::exists(raw)) << raw;
    EXPECT_EQ(planmerge::read_records_csv(raw).size(), 6u);
  }
  ASSERT_TRUE(fs::exists(dir / "agg_exp1.csv"));

  const fs::path again = dir / "agg_again.csv";
  ASSERT_EQ(run_cli("aggregate --in " + dir.string() + " --out " + again.string()), 0);
  std::ifstream a(dir / "agg_exp1.csv"), b(again);
  const std::string sa((std::istreambuf_iterator<char>(a)), {});
  const std::string sb((std::istreambuf_iterator<char>(b)), {});
  EXPECT_EQ(sa, sb);
  fs::remove_all(dir);
}

TEST(Cli, SingleMethodNoNoise) {
  const fs::path dir = temp_dir("single");
  ASSERT_EQ(run_cli("run --preset exp2 --method 2 --no-noise --master-seed 9 --out " + dir.string()),
            0);
  EXPECT_TRUE(fs::exists(dir / "raw_exp2_2.csv"));
  EXPECT_FALSE(fs::exists(dir / "raw_exp2_0.csv"));
  fs::remove_all(dir);
}

TEST(Cli, MissingInputDirectoryExitsOne) {
  EXPECT_EQ(run_cli("aggregate --in /nonexistent_dir_for_planmerge --out /tmp/planmerge_agg.csv"), 1);
}
