#include "cli.hpp"

#include "bapred/io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <sstream>

namespace bapred::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& path, const std::string& contents, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << contents;
  } else {
    write_file_atomic(path, contents);
  }
}

std::vector<int> parse_eta_range(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("--eta-range must look like a:b");
  int lo = 0;
  int hi = 0;
  try {
    std::size_t used = 0;
    lo = std::stoi(text.substr(0, colon), &used);
    if (used != colon) throw UsageError("bad --eta-range");
    std::string rest = text.substr(colon + 1);
    hi = std::stoi(rest, &used);
    if (used != rest.size()) throw UsageError("bad --eta-range");
  } catch (const std::logic_error&) {
    throw UsageError("--eta-range must look like a:b");
  }
  if (lo < 0 || hi < lo) throw UsageError("--eta-range needs 0 <= a <= b");
  std::vector<int> grid;
  for (int e = lo; e <= hi; ++e) grid.push_back(e);
  return grid;
}

std::vector<AdversarySpec> parse_adversary_list(const std::string& text, ChannelMode mode) {
  if (text.empty() || text == "library") return adversary_library(mode);
  std::vector<AdversarySpec> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    AdversarySpec spec = parse_adversary(item);
    make_adversary(spec, mode, 0);  // rejects strategies unusable in this mode
    out.push_back(spec);
  }
  if (out.empty()) throw UsageError("--adversaries is empty");
  return out;
}

std::vector<PredictionSplit> parse_splits(const std::string& text) {
  std::vector<PredictionSplit> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "worst_case") out.push_back(PredictionSplit::WorstCase);
    else if (item == "inverse") out.push_back(PredictionSplit::Inverse);
    else if (item == "balanced") out.push_back(PredictionSplit::Balanced);
    else if (!item.empty()) throw UsageError("unknown split '" + item + "'");
  }
  if (out.empty()) throw UsageError("--splits is empty");
  return out;
}

struct GridPoint {
  ChannelMode mode;
  Rational alpha;
  int n;
};

/// Default grids used when --mode/--alpha/--n are omitted.
std::vector<GridPoint> suite_grid(const std::string& suite, const std::string& mode, const std::string& alpha, int n) {
  std::vector<ChannelMode> modes;
  if (mode.empty()) modes = {ChannelMode::NonAuth, ChannelMode::Auth};
  else modes = {parse_channel_mode(mode)};
  std::vector<GridPoint> grid;
  for (auto m : modes) {
    std::vector<Rational> alphas;
    std::vector<int> ns;
    if (suite == "smoothness") {
      alphas = {Rational(4, 5)};
      ns = {m == ChannelMode::NonAuth ? 40 : 30};
    } else {
      if (m == ChannelMode::NonAuth) alphas = {Rational(2, 5), Rational(3, 5), Rational(4, 5)};
      else alphas = {Rational(3, 5), Rational(4, 5)};
      ns = {10, 20, 30, 40};
    }
    if (!alpha.empty()) alphas = {parse_rational(alpha)};
    if (n > 0) ns = {n};
    for (const auto& a : alphas)
      for (int k : ns) grid.push_back({m, a, k});
  }
  return grid;
}

void print_report(const SuiteReport& r, std::ostream& out) {
  std::size_t failed = 0;
  for (const auto& a : r.assertions) {
    if (!a.passed) ++failed;
    if (!a.passed || r.assertions.size() <= 64) {
      out << (a.passed ? "PASS " : "FAIL ") << a.name;
      if (!a.detail.empty()) out << ": " << a.detail;
      out << '\n';
    }
  }
  out << r.suite << ": " << (r.assertions.size() - failed) << '/' << r.assertions.size() << " assertions passed, "
      << r.runs << " runs\n";
}

SuiteReport merge(const std::string& name, const std::vector<SuiteReport>& parts) {
  SuiteReport all;
  all.suite = name;
  for (const auto& p : parts) {
    all.runs += p.runs;
    for (const auto& a : p.assertions) all.assertions.push_back(a);
  }
  return all;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Synchronous Byzantine Agreement simulator with prediction-augmented protocols", "bapred"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run one scenario file");
  std::string scenario_path;
  std::string out_path;
  std::string transcripts_path;
  std::optional<std::uint64_t> sim_seed;
  bool check = false;
  sim->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  sim->add_option("--seed", sim_seed, "Override the scenario seed");
  sim->add_option("--out", out_path, "Outcome JSON (stdout if omitted)");
  sim->add_option("--transcripts", transcripts_path, "Per-node transcript JSON");
  sim->add_flag("--check", check, "Exit 1 if agreement, validity or termination is violated");

  // sweep
  auto* sw = app.add_subcommand("sweep", "Empirical resilience curve as CSV");
  std::string sw_mode;
  std::string sw_alpha;
  int sw_n = 0;
  std::string sw_eta;
  int sw_trials = 4;
  std::string sw_adv;
  std::string sw_splits = "worst_case,inverse,balanced";
  std::uint64_t sw_seed = 0;
  std::string sw_out;
  sw->add_option("--mode", sw_mode, "nonauth or auth")->required();
  sw->add_option("--alpha", sw_alpha, "Trust parameter, decimal or p/q")->required();
  sw->add_option("--n", sw_n, "Number of nodes")->required()->check(CLI::Range(1, 100000));
  sw->add_option("--eta-range", sw_eta, "Inclusive error range a:b (default 0:n)");
  sw->add_option("--trials", sw_trials, "Sampled configurations per (f, split, adversary)")->check(CLI::Range(1, 1000000));
  sw->add_option("--adversaries", sw_adv, "Comma-separated strategies or 'library'");
  sw->add_option("--splits", sw_splits, "Comma-separated prediction splits");
  sw->add_option("--seed", sw_seed, "Master seed")->required();
  sw->add_option("--out", sw_out, "CSV output (stdout if omitted)");

  // curves
  auto* cv = app.add_subcommand("curves", "Theoretical s and sbar as CSV");
  std::string cv_mode;
  std::string cv_alpha;
  int cv_n = 0;
  std::string cv_out;
  cv->add_option("--mode", cv_mode, "nonauth or auth")->required();
  cv->add_option("--alpha", cv_alpha, "Trust parameter, decimal or p/q")->required();
  cv->add_option("--n", cv_n, "Number of nodes")->required()->check(CLI::Range(1, 100000));
  cv->add_option("--out", cv_out, "CSV output (stdout if omitted)");

  // verify
  auto* vf = app.add_subcommand("verify", "Run an acceptance suite; exit 0 iff every assertion passes");
  std::string suite;
  std::string vf_mode;
  std::string vf_alpha;
  int vf_n = 0;
  std::optional<int> vf_seeds;
  int vf_sweep_trials = 4;
  std::uint64_t vf_seed = 0;
  std::string vf_report;
  vf->add_option("--suite", suite, "Suite name")
      ->required()
      ->check(CLI::IsMember({"consistency", "robustness", "smoothness", "impossibility", "local", "protocols"}));
  vf->add_option("--mode", vf_mode, "Restrict to one channel mode");
  vf->add_option("--alpha", vf_alpha, "Restrict to one trust parameter");
  vf->add_option("--n", vf_n, "Restrict to one system size")->check(CLI::Range(1, 100000));
  vf->add_option("--seeds", vf_seeds, "Seeds per cell (default 100, 50 for smoothness and protocols)")
      ->check(CLI::Range(1, 1000000));
  vf->add_option("--sweep-trials", vf_sweep_trials, "Trials for the smoothness sweep check (0 skips it)")
      ->check(CLI::Range(0, 1000000));
  vf->add_option("--seed", vf_seed, "Master seed")->required();
  vf->add_option("--report", vf_report, "JSON report output");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (sim->parsed()) {
      Scenario s = scenario_from_json(Json::parse(read_file(scenario_path), nullptr, true, true));
      if (sim_seed) s.seed = *sim_seed;
      RunOptions opts;
      opts.record_transcripts = !transcripts_path.empty();
      ScenarioResult r = run_scenario(s, opts);
      std::string outcome = outcome_to_json(s, r).dump(2) + "\n";
      std::string transcripts;
      if (opts.record_transcripts) transcripts = transcripts_to_json(r.transcripts).dump(2) + "\n";
      emit(out_path, outcome, out);
      if (opts.record_transcripts) emit(transcripts_path, transcripts, out);
      return (check && !r.ok()) ? kExitFailure : kExitOk;
    }
    if (sw->parsed()) {
      ChannelMode mode = parse_channel_mode(sw_mode);
      Rational alpha = parse_rational(sw_alpha);
      std::vector<int> grid = sw_eta.empty() ? parse_eta_range("0:" + std::to_string(sw_n)) : parse_eta_range(sw_eta);
      if (grid.back() > sw_n) throw UsageError("--eta-range exceeds n");
      ResilienceOptions opts;
      opts.adversaries = parse_adversary_list(sw_adv, mode);
      opts.trials = sw_trials;
      opts.seed = sw_seed;
      opts.splits = parse_splits(sw_splits);
      std::string csv = sweep_csv(sweep(mode, alpha, sw_n, grid, opts));
      emit(sw_out, csv, out);
      return kExitOk;
    }
    if (cv->parsed()) {
      emit(cv_out, curves_csv(parse_channel_mode(cv_mode), parse_rational(cv_alpha), cv_n), out);
      return kExitOk;
    }
    if (vf->parsed()) {
      std::vector<SuiteReport> parts;
      if (suite == "impossibility") {
        parts.push_back(impossibility_suite());
      } else if (suite == "local") {
        parts.push_back(local_suite(vf_seed));
      } else if (suite == "protocols") {
        parts.push_back(protocols_suite(vf_seeds.value_or(50), vf_seed));
      } else {
        for (const auto& g : suite_grid(suite, vf_mode, vf_alpha, vf_n)) {
          if (suite == "consistency")
            parts.push_back(consistency_suite(g.mode, g.alpha, g.n, vf_seeds.value_or(100), vf_seed));
          else if (suite == "robustness")
            parts.push_back(robustness_suite(g.mode, g.alpha, g.n, vf_seeds.value_or(100), vf_seed));
          else
            parts.push_back(smoothness_suite(g.mode, g.alpha, g.n, vf_seeds.value_or(50), vf_seed, vf_sweep_trials));
        }
      }
      SuiteReport report = merge(suite, parts);
      print_report(report, out);
      if (!vf_report.empty()) write_file_atomic(vf_report, report_to_json(report).dump(2) + "\n");
      return report.passed() ? kExitOk : kExitFailure;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Json::parse_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace bapred::cli
