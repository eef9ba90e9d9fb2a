// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include "cli.hpp"

#include "bapred/harness.hpp"
#include "bapred/io.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

using namespace bapred;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kMaster = 20240601;

struct Result {
  bool passed = false;
  std::string detail;
};

struct Grid {
  ChannelMode mode;
  Rational alpha;
  int n;
};

std::vector<Grid> guarantee_grid() {
  std::vector<Grid> g;
  for (int n : {10, 20, 30, 40}) {
    for (auto a : {Rational(2, 5), Rational(3, 5), Rational(4, 5)}) g.push_back({ChannelMode::NonAuth, a, n});
    for (auto a : {Rational(3, 5), Rational(4, 5)}) g.push_back({ChannelMode::Auth, a, n});
  }
  return g;
}

std::string first_failures(const SuiteReport& r, std::size_t limit = 3) {
  std::string out;
  std::size_t shown = 0;
  for (const auto& a : r.assertions) {
    if (a.passed || shown == limit) continue;
    out += (shown++ ? "; " : "") + a.name + ": " + a.detail;
  }
  return out;
}

Result merge(const std::vector<SuiteReport>& reports) {
  std::size_t total = 0, failed = 0, runs = 0;
  std::string failures;
  for (const auto& r : reports) {
    runs += r.runs;
    for (const auto& a : r.assertions) {
      ++total;
      if (!a.passed) ++failed;
    }
    if (!r.passed()) failures += (failures.empty() ? "" : "; ") + first_failures(r);
  }
  std::string detail = std::to_string(total - failed) + "/" + std::to_string(total) + " assertions, " +
                       std::to_string(runs) + " simulations";
  if (failed) detail += "; " + failures;
  return {failed == 0, detail};
}

int invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  if (code != cli::kExitOk) std::cerr << err.str();
  return code;
}

// Hand-computed s(eta) columns for eta = 0..n.
const std::vector<int> kNonAuthS{32, 31, 30, 29, 28, 27, 26, 25, 23, 21, 19, 17, 15, 13, 11, 9, 7, 5, 3, 3, 3,
                                 3,  3,  3,  3,  3,  3,  3,  3,  3,  3,  3,  3,  3,  3,  3, 3, 3, 3, 3, 3};
const std::vector<int> kAuthS{24, 23, 23, 22, 22, 21, 21, 20, 20, 19, 19, 18, 18, 9, 8, 6,
                              5,  5,  5,  5,  5,  5,  5,  5,  5,  5,  5,  5,  5,  5, 5};

Result curves(const fs::path& dir) {
  struct Case {
    const char* mode;
    const char* alpha;
    int n;
    const std::vector<int>* expected;
  };
  const Case cases[] = {{"nonauth", "0.8", 40, &kNonAuthS}, {"auth", "0.8", 30, &kAuthS}};
  int mismatches = 0, compared = 0;
  std::string first;
  for (const auto& c : cases) {
    fs::path out = dir / (std::string(c.mode) + ".csv");
    if (invoke({"curves", "--mode", c.mode, "--alpha", c.alpha, "--n", std::to_string(c.n), "--out", out.string()}) !=
        cli::kExitOk)
      return {false, std::string("curves command failed for ") + c.mode};
    std::istringstream csv(read_file(out.string()));
    std::string line;
    std::getline(csv, line);
    int eta = 0;
    while (std::getline(csv, line)) {
      std::vector<std::string> cols;
      std::stringstream ss(line);
      for (std::string cell; std::getline(ss, cell, ',');) cols.push_back(cell);
      if (cols.size() < 5 || std::stoi(cols[3]) != eta) return {false, "unexpected row: " + line};
      int s = std::stoi(cols[4]);
      ++compared;
      if (s != c.expected->at(static_cast<std::size_t>(eta))) {
        if (!mismatches++) first = std::string(c.mode) + " eta=" + std::to_string(eta) + " got " + std::to_string(s);
      }
      ++eta;
    }
    if (eta != c.n + 1) return {false, std::string("missing rows for ") + c.mode};
  }
  std::string detail = std::to_string(compared - mismatches) + "/" + std::to_string(compared) + " points match";
  if (mismatches) detail += "; first mismatch " + first;
  return {mismatches == 0, detail};
}

Result consistency() {
  std::vector<SuiteReport> r;
  for (const auto& g : guarantee_grid()) r.push_back(consistency_suite(g.mode, g.alpha, g.n, 100, kMaster));
  return merge(r);
}

Result robustness() {
  std::vector<SuiteReport> r;
  for (const auto& g : guarantee_grid()) r.push_back(robustness_suite(g.mode, g.alpha, g.n, 100, kMaster));
  return merge(r);
}

Result smoothness() {
  return merge({smoothness_suite(ChannelMode::NonAuth, Rational(4, 5), 40, 50, kMaster, 4),
                smoothness_suite(ChannelMode::Auth, Rational(4, 5), 30, 50, kMaster, 4)});
}

Result determinism(const fs::path& dir) {
  Configuration c = make_configuration(30, 8, Placement::Random, InputPattern::Random, 3);
  Scenario s = make_wrapper_scenario(ChannelMode::Auth, Rational(4, 5), c, NodeSet::range(5, 24),
                                     parse_adversary("forge"), 11);
  fs::path scenario = dir / "scenario.json";
  write_file_atomic(scenario.string(), scenario_to_json(s).dump(2));
  int differing = 0, compared = 0;
  auto same = [&](const fs::path& a, const fs::path& b) {
    ++compared;
    if (read_file(a.string()) != read_file(b.string())) ++differing;
  };
  for (const char* run : {"a", "b"}) {
    std::string tag(run);
    if (invoke({"simulate", "--scenario", scenario.string(), "--seed", "42", "--out", (dir / ("sim_" + tag)).string(),
                "--transcripts", (dir / ("tr_" + tag)).string()}) != cli::kExitOk)
      return {false, "simulate failed"};
    if (invoke({"sweep", "--mode", "nonauth", "--alpha", "0.8", "--n", "20", "--eta-range", "0:20", "--trials", "2",
                "--seed", "42", "--out", (dir / ("sweep_" + tag)).string()}) != cli::kExitOk)
      return {false, "sweep failed"};
  }
  same(dir / "sim_a", dir / "sim_b");
  same(dir / "tr_a", dir / "tr_b");
  same(dir / "sweep_a", dir / "sweep_b");
  return {differing == 0,
          std::to_string(compared - differing) + "/" + std::to_string(compared) + " output files byte-identical"};
}

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<Result()> run;
};

}  // namespace

int main() {
  fs::path dir = fs::temp_directory_path() / "bapred_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  const std::vector<Criterion> criteria{
      {1, "theoretical curves", 1, [&] { return curves(dir); }},
      {2, "consistency", 300, consistency},
      {3, "robustness", 300, robustness},
      {4, "smoothness", 1200, smoothness},
      {5, "impossibility constructions", 60, [] { return merge({impossibility_suite()}); }},
      {6, "replay indistinguishability", 60, [] { return merge({local_suite(kMaster)}); }},
      {7, "baseline protocols", 300, [] { return merge({protocols_suite(50, kMaster)}); }},
      {8, "determinism", 60, [&] { return determinism(dir); }},
  };

  bool all = true;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = {false, std::string("error: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = secs < c.budget_seconds;
    bool ok = r.passed && in_time;
    all = all && ok;
    char timing[96];
    std::snprintf(timing, sizeof timing, "%.2f s, budget %.0f s%s", secs, c.budget_seconds,
                  in_time ? "" : ", over budget");
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.id << " " << c.title << ": " << r.detail << " ("
              << timing << ")" << std::endl;
  }
  fs::remove_all(dir);
  return all ? 0 : 1;
}
