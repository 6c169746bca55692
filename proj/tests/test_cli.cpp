#include <gtest/gtest.h>

#include <string>

#include <json.hpp>

#include "support.hpp"

using json = nlohmann::json;
using ghc::test::run;

namespace {

const std::string kCli = GHC_CLI_PATH;
const std::string kDir = std::string(GHC_FIXTURE_DIR) + "/";

ghc::test::CommandResult ghc_run(const std::string& args) {
  return run(kCli + " " + args + " 2>/dev/null");
}

json ghc_json(const std::string& args, int expect_status) {
  const auto r = ghc_run(args);
  EXPECT_EQ(r.status, expect_status) << args << "\n" << r.out;
  try {
    return json::parse(r.out);
  } catch (const json::exception&) {
    ADD_FAILURE() << "not JSON: " << r.out;
    return {};
  }
}

void expect_value(const json& j, double lo, double hi, double eps) {
  EXPECT_NEAR(j["value"]["lo"].get<double>(), lo, eps) << j["value"];
  EXPECT_NEAR(j["value"]["hi"].get<double>(), hi, eps) << j["value"];
}

}  // namespace

TEST(Cli, Eval) {
  const auto r = ghc_run("eval " + kDir + "abs_c.ivf --at -2");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "[4, 10]\n");
  const json j = ghc_json("eval " + kDir + "abs_c.ivf --at -2 --format json", 0);
  EXPECT_EQ(j["value"]["lo"], 4);
  EXPECT_EQ(j["value"]["hi"], 10);
  EXPECT_EQ(ghc_run("eval " + kDir + "abs_c.ivf --at 11").status, 3);
  EXPECT_EQ(ghc_run("eval " + kDir + "remark34.ivf --at 1,-1").status, 3);
  EXPECT_EQ(ghc_run("eval " + kDir + "abs_c.ivf --at 1,2").status, 2);
}

TEST(Cli, MalformedFileReportsPosition) {
  const std::string path = ::testing::TempDir() + "bad.ivf";
  ASSERT_EQ(run("printf 'ivf { dom: [0,1];\\n  lower: x1 +; upper: 1 }' > " + path).status, 0);
  const auto r = run(kCli + " eval " + path + " --at 0 2>&1");
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("2:14"), std::string::npos) << r.out;
  EXPECT_EQ(ghc_run("eval /nonexistent.ivf --at 0").status, 2);
}

TEST(Cli, Clarke) {
  expect_value(ghc_json("clarke " + kDir + "abs_c.ivf --at 0 --dir 1", 0), 2, 5, 1e-3);
  expect_value(ghc_json("clarke " + kDir + "abs_c.ivf --at 0 --dir 1 --lower", 0), -5, -2, 1e-3);
  // Brute-force joint sweep gives [3, 4] for the sign-changing scale.
  expect_value(ghc_json("clarke " + kDir + "remark33.ivf --at 0 --dir 2", 0), 3, 4, 2e-3);
  const json q = ghc_json("clarke " + kDir + "remark34.ivf --at 0,0 --dir 1,0", 4);
  EXPECT_FALSE(q["exists"].get<bool>());
  EXPECT_EQ(ghc_run("clarke " + kDir + "remark34.ivf --at 0,0 --dir 1,1 --lower").status, 4);
}

TEST(Cli, DirectionalDerivative) {
  expect_value(ghc_json("dirderiv " + kDir + "remark34.ivf --at 0,0 --dir 1,1", 0), 3, 8, 1e-3);
  const json j = ghc_json("dirderiv " + kDir + "remark33.ivf --at 0 --dir 1", 4);
  EXPECT_FALSE(j["exists"].get<bool>());
  EXPECT_EQ(ghc_run("dirderiv " + kDir + "abs_c.ivf --at 0 --dir 1,1").status, 2);
}

TEST(Cli, Checks) {
  EXPECT_TRUE(ghc_json("check sublinear " + kDir + "ex40.ivf", 0)["holds"].get<bool>());
  const json cv = ghc_json("check convex " + kDir + "ex40_negC.ivf", 5);
  EXPECT_FALSE(cv["holds"].get<bool>());
  EXPECT_FALSE(cv["counterexample"].is_null());
  const json lp = ghc_json("check lipschitz " + kDir + "sqrt.ivf", 5);
  EXPECT_FALSE(lp["is_lipschitz_likely"].get<bool>());
  EXPECT_EQ(ghc_run("check lipschitz " + kDir + "abs_c.ivf").status, 0);
  EXPECT_EQ(ghc_run("check continuous " + kDir + "step.ivf --at 0").status, 5);
  EXPECT_EQ(ghc_run("check continuous " + kDir + "step.ivf --at 0.5").status, 0);
  EXPECT_EQ(ghc_run("check continuous " + kDir + "step.ivf").status, 2);
}

TEST(Cli, ReplayReproducesCounterexample) {
  const auto r = ghc_run("check convex " + kDir + "ex40_negC.ivf");
  ASSERT_EQ(r.status, 5);
  const std::string path = ::testing::TempDir() + "ce.json";
  ASSERT_EQ(run("cat > " + path + " <<'EOF_CE'\n" + r.out + "\nEOF_CE").status, 0);
  const json j = ghc_json("check convex " + kDir + "ex40_negC.ivf --replay " + path, 5);
  EXPECT_TRUE(j["reproduced"].get<bool>());
  EXPECT_EQ(ghc_run("check convex " + kDir + "abs_c.ivf --replay " + path).status, 0);
  EXPECT_EQ(ghc_run("check convex " + kDir + "abs_c.ivf --replay '{not json'").status, 2);
}

TEST(Cli, SeedFromEnvironmentAndFlag) {
  const std::string cmd = "check convex " + kDir + "ex40_negC.ivf";
  const auto a = run("GHC_SEED=7 " + kCli + " " + cmd + " 2>/dev/null");
  const auto b = ghc_run(cmd + " --seed 7");
  const auto c = run("GHC_SEED=8 " + kCli + " " + cmd + " --seed 7 2>/dev/null");
  const auto d = ghc_run(cmd + " --seed 8");
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(b.out, c.out);
  EXPECT_NE(b.out, d.out);
  EXPECT_EQ(run("GHC_SEED=abc " + kCli + " " + cmd + " >/dev/null 2>&1").status, 2);
}

TEST(Cli, Reproduce) {
  const auto r = ghc_run("reproduce remark-2-1");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("PASS"), std::string::npos) << r.out;
  EXPECT_EQ(ghc_run("reproduce remark-9-9").status, 2);
  const auto a = ghc_run("reproduce example-abs-clarke --format json");
  const auto b = ghc_run("reproduce example-abs-clarke --format json");
  EXPECT_EQ(a.status, b.status);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(ghc_run("").status, 2);
  EXPECT_EQ(ghc_run("eval " + kDir + "abs_c.ivf --at 0 --bogus").status, 2);
  EXPECT_EQ(ghc_run("frobnicate").status, 2);
  EXPECT_EQ(ghc_run("clarke " + kDir + "abs_c.ivf --at 0 --dir 1 --ratio 1.5").status, 2);
}
