#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include "crosscap/cli.hpp"

using namespace crosscap;
using nlohmann::json;

namespace {

struct CliRun {
  int exit_code = -1;
  std::string out;
};

std::string problem(const std::string& name) { return std::string(CROSSCAP_PROBLEMS_DIR) + "/" + name; }

CliRun run_cli(const std::string& args) {
  std::string cmd = std::string(CROSSCAP_BINARY) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

CliRun run_json(const std::string& args) { return run_cli(args + " --format json"); }

std::string write_temp(const std::string& name, const std::string& content) {
  std::string path = ::testing::TempDir() + name;
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST(Cli, GenericElevenCrossCaps) {
  CliRun r = run_cli("generic " + problem("eleven_crosscaps.json"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.out.find("generic: true"), std::string::npos);
  json j = json::parse(run_json("generic " + problem("eleven_crosscaps.json")).out);
  EXPECT_EQ(j["generic"], true);
  EXPECT_EQ(j["dim_A"], 15);
}

TEST(Cli, GenericDegenerateHasWitness) {
  CliRun r = run_json("generic " + problem("degenerate.json"));
  EXPECT_EQ(r.exit_code, 2);
  json j = json::parse(r.out);
  EXPECT_EQ(j["generic"], false);
  ASSERT_EQ(j["witness"].size(), 3u);
  for (const auto& c : j["witness"]) EXPECT_NEAR(c.get<double>(), 0.0, 1e-6);
}

TEST(Cli, MalformedPolynomialReportsPosition) {
  std::string path = write_temp("bad.json", R"({"kind":"crosscap","variables":["x","y","z"],"map":["x y","y","z","x","z"]})");
  CliRun r = run_json("generic " + path);
  EXPECT_EQ(r.exit_code, 1);
  json j = json::parse(r.out);
  EXPECT_EQ(j["error"]["code"], "usage");
  EXPECT_EQ(j["error"]["position"], 2);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_cli("").exit_code, 1);
  EXPECT_EQ(run_cli("zeta " + problem("eleven_crosscaps.json") + " --radius-squared 3/x").exit_code, 1);
  EXPECT_EQ(run_cli("zeta " + problem("eleven_crosscaps.json")).exit_code, 1);
  EXPECT_EQ(run_cli("zeta /nonexistent.json --radius-squared 3").exit_code, 1);
  EXPECT_EQ(run_cli("inumber " + problem("eleven_crosscaps.json") + " --radius-squared 3").exit_code, 1);
  std::string wrong_shape = write_temp("shape.json", R"({"kind":"crosscap","variables":["x","y"],"map":["x","y","x*y"]})");
  EXPECT_EQ(run_cli("generic " + wrong_shape).exit_code, 1);
}

TEST(Cli, ZetaElevenCrossCaps) {
  json small = json::parse(run_json("zeta " + problem("eleven_crosscaps.json") + " --radius-squared 3").out);
  EXPECT_EQ(small["zeta"], 2);
  EXPECT_EQ(small["dim_A"], 15);
  EXPECT_TRUE(small["signatures"].contains("delta"));
  EXPECT_TRUE(small["signatures"].contains("u_delta"));
  json large = json::parse(run_json("zeta " + problem("eleven_crosscaps.json") + " --radius-squared 100").out);
  EXPECT_EQ(large["zeta"], 1);
  json ring = json::parse(run_json("zeta " + problem("eleven_crosscaps.json") + " --annulus 3 100").out);
  EXPECT_EQ(ring["zeta"], -1);
  CliRun text = run_cli("zeta " + problem("eleven_crosscaps.json") + " --radius-squared 3");
  EXPECT_EQ(text.exit_code, 0);
  EXPECT_NE(text.out.find("zeta: 2"), std::string::npos);
}

TEST(Cli, ZetaCustomRegion) {
  json j = json::parse(run_json("zeta " + problem("eleven_crosscaps.json") + " --region \"3-x^2-y^2-z^2\"").out);
  EXPECT_EQ(j["zeta"], 2);
}

TEST(Cli, ZetaFiveVariablesSmallBall) {
  json j = json::parse(run_json("zeta " + problem("five_variables.json") + " --radius-squared 1/100").out);
  EXPECT_EQ(j["zeta"], 0);
}

TEST(Cli, HypothesisFailureExitCode) {
  CliRun r = run_json("zeta " + problem("whitney3.json") + " --radius-squared 1 --max-retries 0");
  EXPECT_EQ(r.exit_code, 4);
  EXPECT_EQ(json::parse(r.out)["error"]["code"], "hypothesis_failure");
  json ok = json::parse(run_json("zeta " + problem("whitney3.json") + " --radius-squared 1").out);
  EXPECT_EQ(ok["zeta"], -1);
}

TEST(Cli, CrossCapsElevenCrossCaps) {
  json j = json::parse(run_json("crosscaps " + problem("eleven_crosscaps.json")).out);
  EXPECT_EQ(j["points"].size(), 11u);
  EXPECT_EQ(j["totals"]["count"], 11);
  EXPECT_EQ(j["totals"]["positives"], 6);
  EXPECT_EQ(j["totals"]["negatives"], 5);
  EXPECT_EQ(j["totals"]["zeta"], 1);
  for (const auto& p : j["points"]) {
    EXPECT_LT(p["residual"].get<double>(), 1e-8);
    EXPECT_EQ(std::abs(p["sign"].get<int>()), 1);
  }
}

TEST(Cli, CrossCapsSphereImmersion) {
  json j = json::parse(run_json("crosscaps " + problem("sphere_immersion.json")).out);
  EXPECT_EQ(j["totals"]["count"], 8);
  EXPECT_EQ(j["totals"]["positives"], 5);
  EXPECT_EQ(j["totals"]["negatives"], 3);
  EXPECT_EQ(j["totals"]["zeta"], 2);
}

TEST(Cli, CrossCapsRegularMapIsEmpty) {
  CliRun r = run_json("crosscaps " + problem("regular.json"));
  EXPECT_EQ(r.exit_code, 0);
  json j = json::parse(r.out);
  EXPECT_TRUE(j["points"].empty());
  EXPECT_EQ(j["totals"]["count"], 0);
}

TEST(Cli, IntersectionNumbers) {
  json large = json::parse(run_json("inumber " + problem("sphere_immersion.json") + " --auto-large-radius").out);
  EXPECT_EQ(large["intersection_number"], 2);
  json lin = json::parse(run_json("inumber " + problem("linear_embedding.json") + " --radius-squared 4").out);
  EXPECT_EQ(lin["intersection_number"], 0);
}

TEST(Cli, BadRadiusExitsThreeWithWitness) {
  CliRun r = run_json("inumber " + problem("sphere_immersion.json") + " --radius-squared 537546974441/784465264883");
  EXPECT_EQ(r.exit_code, 3);
  json j = json::parse(r.out);
  EXPECT_EQ(j["error"]["code"], "not_immersion");
  ASSERT_EQ(j["error"]["witness"].size(), 3u);
  double n2 = 0;
  for (const auto& c : j["error"]["witness"]) n2 += c.get<double>() * c.get<double>();
  EXPECT_NEAR(n2, 537546974441.0 / 784465264883.0, 1e-6);
}

TEST(Cli, JsonReportsRoundTrip) {
  cli::Options opt;
  opt.radius_squared = "3";
  for (const std::string cmd : {"generic", "zeta", "crosscaps"}) {
    cli::Outcome o = cli::run(cmd, problem("eleven_crosscaps.json"), opt);
    json again = json::parse(o.report.dump());
    EXPECT_EQ(again, o.report) << cmd;
    std::string flags = cmd == "zeta" ? " --radius-squared 3" : "";
    EXPECT_EQ(json::parse(run_json(cmd + " " + problem("eleven_crosscaps.json") + flags).out), o.report) << cmd;
  }
}

TEST(Cli, IdenticalRunsAreByteIdentical) {
  for (const std::string& args : {"crosscaps " + problem("eleven_crosscaps.json") + " --seed 5",
                                 "zeta " + problem("whitney5.json") + " --radius-squared 1 --seed 3",
                                 "inumber " + problem("sphere_immersion.json") + " --radius-squared 2"}) {
    CliRun a = run_json(args), b = run_json(args);
    EXPECT_EQ(a.exit_code, 0) << args;
    EXPECT_EQ(a.out, b.out) << args;
  }
}

TEST(Cli, ParseRational) {
  EXPECT_EQ(cli::parse_rational("6/4"), Rational(3, 2));
  EXPECT_EQ(cli::parse_rational("-7"), Rational(-7));
  EXPECT_THROW(cli::parse_rational("1/0"), cli::UsageError);
  EXPECT_THROW(cli::parse_rational("1.5"), cli::UsageError);
  EXPECT_THROW(cli::parse_rational(""), cli::UsageError);
}
