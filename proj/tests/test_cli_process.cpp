// Runs the built executable to check exit codes and file output end to end.
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(PHOTAMP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("photamp_test_" + name);
}

}  // namespace

TEST(CliProcess, ExitCodes) {
  EXPECT_EQ(run("fig1 --grid-points 8"), 0);
  EXPECT_EQ(run("fig1 --n ''"), 1);
  EXPECT_EQ(run("fig1 --grid-points 1"), 1);
  EXPECT_EQ(run("fig1 --format xml"), 1);
  EXPECT_EQ(run("bogus"), 1);
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("fig1 --output /nonexistent/dir/out.csv"), 2);
  EXPECT_EQ(run("fig1 --config /nonexistent/dir/cfg.txt"), 2);
  EXPECT_EQ(run("exact-compare --N '' "), 1);
}

TEST(CliProcess, ByteIdenticalOutputs) {
  // Same invocation twice; the output path is part of the echoed config.
  const auto a = scratch("a.json");
  const std::string cmd = "fig2 --grid-points 33 --format json --output " + a.string();
  ASSERT_EQ(run(cmd), 0);
  const auto first = slurp(a);
  ASSERT_EQ(run(cmd), 0);
  EXPECT_FALSE(first.empty());
  EXPECT_EQ(first, slurp(a));
  std::filesystem::remove(a);
}

TEST(CliProcess, ConfigFileWithFlagOverride) {
  const auto cfg = scratch("cfg.txt");
  const auto out = scratch("fig1.csv");
  {
    std::ofstream f(cfg);
    f << "# single panel\nn_e=10\nn=0,5\ngrid_points=4\nformat=csv\n";
  }
  ASSERT_EQ(run("fig1 --config " + cfg.string() + " --n 5 --output " + out.string()), 0);
  const auto text = slurp(out);
  EXPECT_EQ(text.substr(0, text.find('\n')), "tau,p_ne10_n5");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
  std::filesystem::remove(cfg);
  std::filesystem::remove(out);
}
