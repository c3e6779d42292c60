#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "driftspec/config.hpp"
#include "driftspec/error.hpp"

using namespace driftspec;

namespace {

std::string config_error(const std::string& text) {
  try {
    parse_config(text, "test.cfg");
  } catch (const ConfigError& e) {
    return e.what();
  }
  ADD_FAILURE() << "expected ConfigError for:\n" << text;
  return {};
}

const char* kMinimal = R"(
[problem]
kind = "drift"
domain = 0, 1
phi = "x"
n = 100
num_eigs = 4
)";

}  // namespace

TEST(Config, MinimalDriftConfigGetsDefaults) {
  const JobConfig c = parse_config(kMinimal);
  EXPECT_EQ(c.kind, JobKind::drift);
  EXPECT_EQ(c.a, 0.0);
  EXPECT_EQ(c.b, 1.0);
  ASSERT_TRUE(c.phi.has_value());
  EXPECT_EQ(*c.phi, "x");
  EXPECT_FALSE(c.f.has_value());
  EXPECT_EQ(c.effective_n(), 100u);
  EXPECT_EQ(c.effective_num_eigs(), 4u);
  EXPECT_EQ(c.tol, 1e-8);
  EXPECT_EQ(c.solver, SolverChoice::automatic);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.convention, GapConvention::model_consistent);
  EXPECT_TRUE(c.csv.empty());
}

TEST(Config, EpsilonListAndOutputSection) {
  const JobConfig c = parse_config(R"(
# comment line
[problem]
kind = "converge"   # trailing comment
domain = -1, 2.5
phi = "x"
epsilon = 0.2, 0.1, 0.05, 0.025
solver = "iterative"
seed = 7
[output]
csv = "out#1.csv"  # quoted hash is kept
json = "dir with space/out.json"
)");
  EXPECT_EQ(c.epsilon, (std::vector<double>{0.2, 0.1, 0.05, 0.025}));
  EXPECT_EQ(c.a, -1.0);
  EXPECT_EQ(c.b, 2.5);
  EXPECT_EQ(*c.phi, "x");
  EXPECT_EQ(c.solver, SolverChoice::iterative);
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.csv, "out#1.csv");
  EXPECT_EQ(c.json, "dir with space/out.json");
  EXPECT_EQ(c.effective_num_eigs(), 3u);
}

TEST(Config, RejectsBothWeights) {
  const std::string msg = config_error(R"(
[problem]
kind = "drift"
domain = 0, 1
phi = "x"
f = "1"
)");
  EXPECT_NE(msg.find("exactly one of phi/f"), std::string::npos) << msg;
}

TEST(Config, RejectsMissingWeight) {
  EXPECT_NE(config_error("[problem]\nkind = \"drift\"\ndomain = 0, 1\n").find("phi/f"),
            std::string::npos);
}

TEST(Config, StrictSyntax) {
  EXPECT_NE(config_error(std::string(kMinimal) + "epsilom = 0.1\n").find("unknown key 'epsilom'"),
            std::string::npos);
  EXPECT_NE(config_error(std::string(kMinimal) + "n = 5\n").find("duplicate key"),
            std::string::npos);
  EXPECT_NE(config_error("[problem]\nkind = \"drift\"\nphi = \"x\"\n").find("missing required key 'domain'"),
            std::string::npos);
  EXPECT_NE(config_error("kind = \"drift\"\n").find("outside of a section"), std::string::npos);
  EXPECT_NE(config_error("[problme]\n").find("unknown section"), std::string::npos);
  EXPECT_NE(config_error("[problem]\nkind = drift\ndomain = 0, 1\n").find("double-quoted"),
            std::string::npos);
  EXPECT_NE(config_error("[problem]\nkind = \"drift\"\ndomain = 0, 1x\nphi = \"x\"\n")
                .find("malformed number '1x'"),
            std::string::npos);
  EXPECT_NE(config_error("[problem]\nkind = \"drift\"\ndomain = 0, 1\nphi = \"x\"\nn = -3\n")
                .find("malformed non-negative integer"),
            std::string::npos);
  EXPECT_NE(config_error("[problem]\nkind = \"warp\"\ndomain = 0, 1\n").find("unknown job kind"),
            std::string::npos);
  // Locations are reported as file:line.
  EXPECT_NE(config_error("[problem]\n\nkind = \"drift\"\nbogus = 1\n").find("test.cfg:4:"),
            std::string::npos);
}

TEST(Config, KindSpecificInvariants) {
  EXPECT_NE(config_error(R"(
[problem]
kind = "converge"
domain = 0, 1
phi = "x"
epsilon = 0.2, 0.1, 0.05
)").find("at least 4"),
            std::string::npos);
  EXPECT_NE(config_error(R"(
[problem]
kind = "converge"
domain = 0, 1
phi = "x"
epsilon = 0.2, 0.1, 0.04, 0.02
)").find("geometric"),
            std::string::npos);
  EXPECT_NE(config_error(R"(
[problem]
kind = "prop2"
domain = 0, 1
phi = "x"
)").find("not used"),
            std::string::npos);
  EXPECT_NE(config_error("[problem]\nkind = \"drift\"\ndomain = 1, 0\nphi = \"x\"\n").find("a < b"),
            std::string::npos);
  EXPECT_NE(config_error("[problem]\nkind = \"drift\"\ndomain = 0, 1\nphi = \"x +\"\n").find("phi:"),
            std::string::npos);
}

TEST(Config, CheckedInConfigsAllLoad) {
  std::size_t count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(DRIFTSPEC_CONFIG_DIR)) {
    if (entry.path().extension() != ".cfg") continue;
    EXPECT_NO_THROW(load_config(entry.path())) << entry.path();
    ++count;
  }
  EXPECT_GE(count, 10u);
}

TEST(Config, MissingFileIsAConfigError) {
  EXPECT_THROW(load_config("/nonexistent/driftspec.cfg"), ConfigError);
}
