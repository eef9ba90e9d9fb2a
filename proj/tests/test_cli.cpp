#include "cli.hpp"

#include "bapred/io.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <sstream>

using namespace bapred;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("bapred_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write_scenario() const {
    Configuration c = make_configuration(10, 3, Placement::Random, InputPattern::Random, 2);
    Scenario s = make_wrapper_scenario(ChannelMode::NonAuth, Rational(4, 5), c, NodeSet{1, 2, 3, 4},
                                       parse_adversary("random_noise"), 0);
    std::string p = path("s.json");
    write_file_atomic(p, scenario_to_json(s).dump(2));
    return p;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(invoke({}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"curves", "--mode", "nonauth", "--n", "40"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"curves", "--mode", "sideways", "--alpha", "0.8", "--n", "40"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"curves", "--mode", "auth", "--alpha", "0.2", "--n", "40"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"sweep", "--mode", "nonauth", "--alpha", "0.8", "--n", "10"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"verify", "--suite", "local"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"verify", "--suite", "bogus", "--seed", "1"}).code, cli::kExitUsage);
  EXPECT_EQ(invoke({"sweep", "--mode", "nonauth", "--alpha", "0.8", "--n", "10", "--seed", "1", "--eta-range", "5"}).code,
            cli::kExitUsage);
}

TEST_F(CliTest, MissingScenarioFileExitsTwoWithDiagnostic) {
  auto r = invoke({"simulate", "--scenario", path("absent.json"), "--out", path("o.json")});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("absent.json"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("o.json")));
}

TEST_F(CliTest, HelpExitsZero) { EXPECT_EQ(invoke({"--help"}).code, cli::kExitOk); }

TEST_F(CliTest, CurvesFirstRowIsConsistencyPoint) {
  auto r = invoke({"curves", "--mode", "nonauth", "--alpha", "0.8", "--n", "40", "--out", path("c.csv")});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  std::string csv = read_file(path("c.csv"));
  EXPECT_NE(csv.find("\nnonauth,0.8,40,0,32,"), std::string::npos);
}

TEST_F(CliTest, SimulateIsDeterministic) {
  std::string s = write_scenario();
  auto a = invoke({"simulate", "--scenario", s, "--seed", "7", "--out", path("a.json"), "--transcripts", path("ta.json")});
  auto b = invoke({"simulate", "--scenario", s, "--seed", "7", "--out", path("b.json"), "--transcripts", path("tb.json")});
  ASSERT_EQ(a.code, cli::kExitOk) << a.err;
  ASSERT_EQ(b.code, cli::kExitOk) << b.err;
  EXPECT_EQ(read_file(path("a.json")), read_file(path("b.json")));
  EXPECT_EQ(read_file(path("ta.json")), read_file(path("tb.json")));
  auto outcome = Json::parse(read_file(path("a.json")));
  EXPECT_EQ(outcome["seed"], 7);
  auto transcripts = Json::parse(read_file(path("ta.json")));
  EXPECT_EQ(transcripts["transcripts"].size(), 10u);
}

TEST_F(CliTest, SweepIsDeterministic) {
  std::vector<std::string> args{"sweep", "--mode", "nonauth", "--alpha", "0.8", "--n", "10", "--eta-range", "0:10",
                                "--trials", "2", "--seed", "5", "--out"};
  auto a_args = args;
  a_args.push_back(path("a.csv"));
  auto b_args = args;
  b_args.push_back(path("b.csv"));
  ASSERT_EQ(invoke(a_args).code, cli::kExitOk);
  ASSERT_EQ(invoke(b_args).code, cli::kExitOk);
  std::string a = read_file(path("a.csv"));
  EXPECT_EQ(a, read_file(path("b.csv")));
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 12);
}

TEST_F(CliTest, VerifyExitCodeFollowsAssertions) {
  auto ok = invoke({"verify", "--suite", "consistency", "--mode", "auth", "--alpha", "0.8", "--n", "30", "--seed", "1",
                 "--report", path("r.json")});
  EXPECT_EQ(ok.code, cli::kExitOk) << ok.out;
  auto report = Json::parse(read_file(path("r.json")));
  EXPECT_TRUE(report["passed"].get<bool>());
  auto imp = invoke({"verify", "--suite", "impossibility", "--seed", "1"});
  EXPECT_EQ(imp.code, cli::kExitOk) << imp.out;
}
