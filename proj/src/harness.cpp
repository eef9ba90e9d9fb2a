#include "bapred/harness.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace bapred {

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string mode_alpha_n(ChannelMode mode, const Rational& alpha, int n) {
  return std::string(to_string(mode)) + " alpha=" + format_rational(alpha) + " n=" + std::to_string(n);
}

}  // namespace

std::string_view to_string(Placement p) {
  switch (p) {
    case Placement::High: return "high";
    case Placement::Low: return "low";
    case Placement::Random: return "random";
  }
  return "unknown";
}

std::string_view to_string(InputPattern p) {
  switch (p) {
    case InputPattern::AllZero: return "all_zero";
    case InputPattern::AllOne: return "all_one";
    case InputPattern::SplitHalf: return "split_half";
    case InputPattern::Random: return "random";
  }
  return "unknown";
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) { return mix64(master ^ mix64(index)); }

NodeSet place_faulty(int n, int f, Placement placement, std::uint64_t seed) {
  if (f < 0 || f > n) throw DomainError("f must lie in 0..n");
  switch (placement) {
    case Placement::High: return NodeSet::range(n - f + 1, n);
    case Placement::Low: return NodeSet::range(1, f);
    case Placement::Random: {
      std::mt19937_64 rng(seed);
      std::vector<NodeId> pool;
      for (int i = 1; i <= n; ++i) pool.push_back(NodeId{i});
      for (int i = 0; i < f; ++i) {
        auto j = static_cast<std::size_t>(i) + static_cast<std::size_t>(uniform_below(rng, static_cast<std::uint64_t>(n - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
      }
      pool.resize(static_cast<std::size_t>(f));
      return NodeSet(std::move(pool));
    }
  }
  throw DomainError("unknown placement");
}

std::map<NodeId, Bit> make_inputs(const NodeSet& honest, InputPattern pattern, std::uint64_t seed) {
  std::map<NodeId, Bit> inputs;
  std::mt19937_64 rng(seed ^ 0x1ee7ULL);
  std::size_t i = 0;
  for (auto id : honest) {
    Bit b = Bit::Zero;
    switch (pattern) {
      case InputPattern::AllZero: b = Bit::Zero; break;
      case InputPattern::AllOne: b = Bit::One; break;
      case InputPattern::SplitHalf: b = i < honest.size() / 2 ? Bit::Zero : Bit::One; break;
      case InputPattern::Random: b = bit_from_int(static_cast<int>(rng() & 1U)); break;
    }
    inputs[id] = b;
    ++i;
  }
  return inputs;
}

Configuration make_configuration(int n, int f, Placement placement, InputPattern pattern, std::uint64_t seed) {
  Configuration c;
  c.n = n;
  c.faulty = place_faulty(n, f, placement, seed);
  c.inputs = make_inputs(c.honest(), pattern, seed);
  return c;
}

TrialPlan trial_plan(std::uint64_t master, std::uint64_t index) {
  return TrialPlan{static_cast<Placement>(index % 3), static_cast<InputPattern>(index % 4), derive_seed(master, index)};
}

// --- checking ------------------------------------------------------------------

Verdict check_outcome(const Scenario& scenario, const Outcome& outcome) {
  Outcome o = evaluate_decisions(scenario.config, outcome.decisions, outcome.decided_round);
  return Verdict{o.agreement, o.validity, o.termination};
}

namespace {

bool seed_matters(const AdversarySpec& a) {
  return a.kind == AdversaryKind::CrashAfter || a.kind == AdversaryKind::RandomNoise || a.kind == AdversaryKind::Forge;
}

void put_set(std::string& out, const NodeSet& s) {
  out += '{';
  for (auto id : s) {
    out += std::to_string(id.value);
    out += ',';
  }
  out += '}';
}

}  // namespace

std::string scenario_key(const Scenario& s) {
  std::string k;
  k.reserve(256);
  k += to_string(s.mode);
  k += '|';
  k += format_rational(s.alpha);
  k += '|';
  k += to_string(s.protocol);
  k += '|';
  k += std::to_string(s.config.n);
  k += '|';
  put_set(k, s.config.faulty);
  k += '|';
  for (const auto& [id, b] : s.config.inputs) k += static_cast<char>('0' + to_int(b));
  k += '|';
  if (s.local_prediction) {
    for (const auto& p : s.prediction.per_node) put_set(k, p);
  } else if (!s.prediction.per_node.empty()) {
    put_set(k, s.prediction.per_node.front());
  }
  k += '|';
  const auto& a = s.adversary;
  k += a.name();
  k += std::to_string(to_int(a.spoof_input));
  if (a.spoof_prediction) put_set(k, *a.spoof_prediction);
  if (a.part_a) put_set(k, *a.part_a);
  if (a.part_b) put_set(k, *a.part_b);
  k += std::to_string(to_int(a.value_a)) + std::to_string(to_int(a.value_b));
  for (const auto& l : a.labels) {
    put_set(k, l.members);
    k += static_cast<char>('0' + to_int(l.input));
    put_set(k, l.audience);
    if (l.prediction) put_set(k, *l.prediction);
  }
  if (seed_matters(a)) k += "|seed=" + std::to_string(s.seed);
  return k;
}

Verdict RunMemo::run(const Scenario& s) {
  std::string key = scenario_key(s);
  if (auto it = cache_.find(key); it != cache_.end()) {
    ++hits_;
    return it->second;
  }
  ++runs_;
  ScenarioResult r = run_scenario(s);
  Verdict v = check_outcome(s, r.outcome);
  v.termination = v.termination && r.outcome.termination;
  cache_.emplace(std::move(key), v);
  return v;
}

Scenario make_wrapper_scenario(ChannelMode mode, const Rational& alpha, Configuration config, const NodeSet& prediction,
                               AdversarySpec adversary, std::uint64_t seed) {
  Scenario s;
  s.mode = mode;
  s.alpha = alpha;
  s.protocol = mode == ChannelMode::NonAuth ? ProtocolChoice::PredBa : ProtocolChoice::AuthPredBa;
  s.prediction = replicate(prediction, config.n);
  s.config = std::move(config);
  s.adversary = std::move(adversary);
  s.seed = seed;
  return s;
}

// --- resilience -------------------------------------------------------------------

int empirical_resilience(ChannelMode mode, const Rational& alpha, int n, int eta, const ResilienceOptions& options,
                         RunMemo* memo) {
  if (eta < 0 || eta > n) throw DomainError("eta must lie in 0..n");
  RunMemo local;
  RunMemo& m = memo ? *memo : local;
  for (int f = 0; f <= n; ++f) {
    std::uint64_t level_seed = derive_seed(options.seed, static_cast<std::uint64_t>(f));
    for (int i = 0; i < options.trials; ++i) {
      TrialPlan plan = trial_plan(level_seed, static_cast<std::uint64_t>(i));
      Configuration config = make_configuration(n, f, plan.placement, plan.pattern, plan.seed);
      for (auto split : options.splits) {
        Prediction p = predict(config, eta, split);
        for (const auto& adv : options.adversaries) {
          Scenario s = make_wrapper_scenario(mode, alpha, config, p.members, adv, plan.seed);
          if (!m.run(s).ok()) return f - 1;
        }
      }
    }
  }
  return n;
}

std::string adversary_set_hash(const std::vector<AdversarySpec>& adversaries) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& a : adversaries) {
    for (char c : a.name() + ";") {
      h ^= static_cast<std::uint8_t>(c);
      h *= 0x100000001b3ULL;
    }
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

std::vector<SweepRow> sweep(ChannelMode mode, const Rational& alpha, int n, const std::vector<int>& eta_grid,
                            const ResilienceOptions& options) {
  TrustParam checked(alpha, mode);
  (void)checked;
  RunMemo memo;
  std::vector<SweepRow> rows;
  std::string hash = adversary_set_hash(options.adversaries);
  for (std::size_t i = 0; i < eta_grid.size(); ++i) {
    int eta = eta_grid[i];
    ResilienceOptions cell = options;
    cell.seed = derive_seed(options.seed, i);
    SweepRow row;
    row.mode = mode;
    row.alpha = alpha;
    row.n = n;
    row.eta = eta;
    row.theory_s = theoretical_smoothness(mode, alpha, n, eta);
    row.theory_sbar = theoretical_impossibility(mode, alpha, n, eta);
    row.empirical_f = empirical_resilience(mode, alpha, n, eta, cell, &memo);
    row.trials = options.trials;
    row.adversary_set_hash = hash;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "mode,alpha,n,eta,theory_s,theory_sbar,sbar_flag,empirical_f,trials,adversary_set_hash\n";
  for (const auto& r : rows) {
    os << to_string(r.mode) << ',' << format_rational(r.alpha) << ',' << r.n << ',' << r.eta << ',' << r.theory_s << ',';
    if (r.theory_sbar) {
      os << r.theory_sbar->value << ',' << (r.theory_sbar->conditional ? 1 : 0);
    } else {
      os << ',';
    }
    os << ',' << r.empirical_f << ',' << r.trials << ',' << r.adversary_set_hash << '\n';
  }
  return os.str();
}

ResilienceCurve empirical_curve(const std::vector<SweepRow>& rows) {
  ResilienceCurve c;
  c.kind = CurveKind::Empirical;
  if (!rows.empty()) {
    c.mode = rows.front().mode;
    c.alpha = rows.front().alpha;
    c.n = rows.front().n;
  }
  for (const auto& r : rows) c.points.push_back(CurvePoint{r.eta, r.empirical_f, false, r.trials});
  return c;
}

// --- suites ---------------------------------------------------------------------------

bool SuiteReport::passed() const {
  return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed; });
}

void SuiteReport::add(std::string name, bool passed, std::string detail) {
  assertions.push_back(Assertion{std::move(name), passed, std::move(detail)});
}

bool ImpossibilityReport::some_failure() const {
  return std::any_of(entries.begin(), entries.end(), [](const Entry& e) { return !e.verdict.ok(); });
}

ImpossibilityReport run_impossibility_suite(Family family, const Rational& alpha, int n, std::optional<int> size) {
  ImpossibilityReport report{family, alpha, n, {}};
  for (auto& member : build_impossibility_scenarios(family, alpha, n, size)) {
    ScenarioResult r = run_scenario(member.scenario);
    Verdict v = check_outcome(member.scenario, r.outcome);
    v.termination = v.termination && r.outcome.termination;
    report.entries.push_back({member.scenario.label, member.eta, member.f, v});
  }
  return report;
}

namespace {

/// Tracks violations for one assertion.
struct Tally {
  std::size_t total = 0;
  std::size_t violations = 0;
  std::string first;

  void record(const Scenario& s, const Verdict& v) {
    ++total;
    if (v.ok()) return;
    ++violations;
    if (first.empty()) {
      first = "first violation: " + scenario_key(s) + " (agreement=" + (v.agreement ? "1" : "0") +
              " validity=" + (v.validity ? "1" : "0") + " termination=" + (v.termination ? "1" : "0") + ")";
    }
  }

  std::string summary() const {
    std::string s = std::to_string(violations) + " violations in " + std::to_string(total) + " trials";
    if (!first.empty()) s += "; " + first;
    return s;
  }
};

const InputPattern kPatterns[] = {InputPattern::AllZero, InputPattern::AllOne, InputPattern::SplitHalf,
                                  InputPattern::Random};

}  // namespace

SuiteReport consistency_suite(ChannelMode mode, const Rational& alpha, int n, int seeds, std::uint64_t master) {
  SuiteReport report{"consistency", {}, 0};
  int f = static_cast<int>(consistency_bound(mode, alpha, n));
  RunMemo memo;
  Tally tally;
  for (const auto& adv : adversary_library(mode)) {
    for (auto pattern : kPatterns) {
      for (int i = 0; i < seeds; ++i) {
        std::uint64_t seed = derive_seed(master, static_cast<std::uint64_t>(i));
        Configuration config = make_configuration(n, f, static_cast<Placement>(i % 3), pattern, seed);
        NodeSet p = config.honest();
        Scenario s = make_wrapper_scenario(mode, alpha, std::move(config), p, adv, seed);
        tally.record(s, memo.run(s));
      }
    }
  }
  report.runs = memo.runs();
  report.add("consistency " + mode_alpha_n(mode, alpha, n) + " f=" + std::to_string(f), tally.violations == 0,
             tally.summary());
  return report;
}

SuiteReport robustness_suite(ChannelMode mode, const Rational& alpha, int n, int seeds, std::uint64_t master) {
  SuiteReport report{"robustness", {}, 0};
  int f = static_cast<int>(robustness_bound(mode, alpha, n));
  RunMemo memo;
  Tally tally;
  for (const auto& adv : adversary_library(mode)) {
    for (auto pattern : kPatterns) {
      for (int i = 0; i < seeds; ++i) {
        std::uint64_t seed = derive_seed(master, static_cast<std::uint64_t>(i));
        Configuration config = make_configuration(n, f, static_cast<Placement>(i % 3), pattern, seed);
        std::vector<NodeSet> preds{config.faulty, NodeSet{}, NodeSet::range(1, n),
                                   random_prediction(n, derive_seed(seed, 99)).members};
        for (const auto& p : preds) {
          Scenario s = make_wrapper_scenario(mode, alpha, config, p, adv, seed);
          tally.record(s, memo.run(s));
        }
      }
    }
  }
  report.runs = memo.runs();
  report.add("robustness " + mode_alpha_n(mode, alpha, n) + " f=" + std::to_string(f), tally.violations == 0,
             tally.summary());
  return report;
}

SuiteReport smoothness_suite(ChannelMode mode, const Rational& alpha, int n, int seeds, std::uint64_t master,
                             int sweep_trials) {
  SuiteReport report{"smoothness", {}, 0};
  RunMemo memo;
  Tally tally;
  std::vector<int> bad_eta;
  const PredictionSplit splits[] = {PredictionSplit::WorstCase, PredictionSplit::Inverse, PredictionSplit::Balanced};
  for (int eta = 0; eta <= n; ++eta) {
    int f = static_cast<int>(theoretical_smoothness(mode, alpha, n, eta));
    std::size_t before = tally.violations;
    for (auto split : splits) {
      for (const auto& adv : adversary_library(mode)) {
        for (int i = 0; i < seeds; ++i) {
          TrialPlan plan = trial_plan(derive_seed(master, static_cast<std::uint64_t>(eta)), static_cast<std::uint64_t>(i));
          Configuration config = make_configuration(n, f, plan.placement, plan.pattern, plan.seed);
          Prediction p = predict(config, eta, split);
          Scenario s = make_wrapper_scenario(mode, alpha, std::move(config), p.members, adv, plan.seed);
          tally.record(s, memo.run(s));
        }
      }
    }
    if (tally.violations != before) bad_eta.push_back(eta);
  }
  std::string detail = tally.summary();
  if (!bad_eta.empty()) {
    detail += "; failing eta:";
    for (int e : bad_eta) detail += " " + std::to_string(e);
  }
  report.add("smoothness " + mode_alpha_n(mode, alpha, n) + " f=s(eta)", tally.violations == 0, detail);

  if (sweep_trials > 0) {
    std::vector<int> grid;
    for (int eta = 0; eta <= n; ++eta) grid.push_back(eta);
    ResilienceOptions opts{adversary_library(mode), sweep_trials, master, {}};
    opts.splits = {PredictionSplit::WorstCase, PredictionSplit::Inverse, PredictionSplit::Balanced};
    auto rows = sweep(mode, alpha, n, grid, opts);
    std::string below;
    for (const auto& r : rows) {
      if (r.empirical_f < r.theory_s) {
        below += " eta=" + std::to_string(r.eta) + "(" + std::to_string(r.empirical_f) + "<" +
                 std::to_string(r.theory_s) + ")";
      }
    }
    report.add("empirical >= theoretical " + mode_alpha_n(mode, alpha, n), below.empty(),
               below.empty() ? "all " + std::to_string(rows.size()) + " points" : "below at" + below);
  }
  report.runs = memo.runs();
  return report;
}

SuiteReport impossibility_suite() {
  SuiteReport report{"impossibility", {}, 0};
  struct Point {
    Family family;
    Rational alpha;
    int n;
    std::optional<int> size;
  };
  std::vector<Point> points{
      {Family::T41, Rational(4, 5), 20, {}},
      {Family::T42p1, Rational(4, 5), 15, 0},
      {Family::T42p1, Rational(4, 5), 25, 0},
      {Family::T42p2, Rational(4, 5), 15, 5},
      {Family::TC4p1, Rational(3, 4), 16, 0},
      {Family::TC4p2, Rational(3, 4), 16, 2},
      {Family::T52, Rational(1, 2), 8, {}},
  };
  for (const auto& pt : points) {
    std::string name = std::string(to_string(pt.family)) + " alpha=" + format_rational(pt.alpha) +
                       " n=" + std::to_string(pt.n);
    if (pt.size) name += " size=" + std::to_string(*pt.size);
    ImpossibilityReport r;
    try {
      r = run_impossibility_suite(pt.family, pt.alpha, pt.n, pt.size);
    } catch (const std::exception& e) {
      report.add(name, false, std::string("construction error: ") + e.what());
      continue;
    }
    report.runs += r.entries.size();
    std::string detail;
    for (const auto& e : r.entries) {
      detail += e.label + "(eta=" + std::to_string(e.eta) + ",f=" + std::to_string(e.f) + "):" +
                (e.verdict.ok() ? "ok" : "fails") + " ";
    }
    report.add(name, r.some_failure(), detail);
  }
  return report;
}

// --- transcripts -----------------------------------------------------------------

namespace {

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_message(std::vector<std::uint8_t>& out, const Message& m) {
  put32(out, static_cast<std::uint32_t>(m.round));
  put32(out, static_cast<std::uint32_t>(m.sender.value));
  put32(out, static_cast<std::uint32_t>(m.receiver.value));
  auto p = m.payload.encode();
  out.insert(out.end(), p.begin(), p.end());
  auto sigs = m.signatures();
  put32(out, static_cast<std::uint32_t>(sigs.size()));
  for (const auto& s : sigs) {
    put32(out, static_cast<std::uint32_t>(s.signer.value));
    put32(out, static_cast<std::uint32_t>(s.token));
    put32(out, static_cast<std::uint32_t>(s.token >> 32));
  }
}

}  // namespace

std::vector<std::uint8_t> transcript_bytes(const Transcript& t) {
  std::vector<std::uint8_t> out;
  for (const auto& r : t.rounds) {
    put32(out, static_cast<std::uint32_t>(r.round));
    put32(out, static_cast<std::uint32_t>(r.sent.size()));
    for (const auto& m : r.sent) put_message(out, m);
    put32(out, static_cast<std::uint32_t>(r.received.size()));
    for (const auto& m : r.received) put_message(out, m);
  }
  return out;
}

std::vector<IndistinguishabilityCheck> replay_indistinguishability(ProtocolChoice protocol, int n, std::uint64_t seed) {
  auto family = build_impossibility_scenarios(Family::T52, Rational(1, 2), n);
  ChannelMode mode = mode_of(protocol);
  std::vector<ScenarioResult> results;
  for (auto& member : family) {
    member.scenario.mode = mode;
    member.scenario.protocol = protocol;
    member.scenario.seed = seed;
    results.push_back(run_scenario(member.scenario, RunOptions{true, 0}));
  }
  NodeSet a = NodeSet::range(1, n / 2);
  NodeSet b = NodeSet::range(n / 2 + 1, n);
  auto compare = [&](const NodeSet& side, std::size_t lhs, std::size_t rhs, const std::string& name) {
    IndistinguishabilityCheck c{name, true, 0, {}};
    for (auto id : side) {
      auto x = transcript_bytes(results[lhs].transcripts[static_cast<std::size_t>(id.value - 1)]);
      auto y = transcript_bytes(results[rhs].transcripts[static_cast<std::size_t>(id.value - 1)]);
      c.bytes_compared += x.size();
      if (x != y && c.identical) {
        c.identical = false;
        c.detail = "node " + std::to_string(id.value) + " differs";
      }
    }
    return c;
  };
  std::string tag = std::string(to_string(protocol));
  return {compare(a, 0, 2, tag + " A: config1 vs config3"), compare(b, 1, 2, tag + " B: config2 vs config3")};
}

std::vector<IndistinguishabilityCheck> persona_fidelity(const Rational& alpha, int n, std::uint64_t seed) {
  std::vector<IndistinguishabilityCheck> out;
  for (auto& member : build_impossibility_scenarios(Family::T41, alpha, n)) {
    Scenario& s = member.scenario;
    s.seed = seed;
    ScenarioResult r = run_scenario(s, RunOptions{true, 0});
    ProtocolFactory factory = s.factory();
    IndistinguishabilityCheck c{s.label + " personas", true, 0, {}};
    for (const auto& log : r.personas) {
      NodeContext ctx{log.node, s.n(), s.mode, Signer(r.ledger.get(), Principal::Replay, log.node)};
      auto fresh = factory(ctx, log.input, log.prediction);
      ReplayCheck rc = replay_transcript(log.transcript, *fresh, *r.ledger);
      if (!rc.sends_match && c.identical) {
        c.identical = false;
        c.detail = "persona of node " + std::to_string(log.node.value) + " diverges at round " +
                   std::to_string(rc.first_mismatch);
      }
      // What the audience received from this node must be the persona's sends.
      for (auto h : log.audience) {
        const Transcript& ht = r.transcripts[static_cast<std::size_t>(h.value - 1)];
        for (std::size_t k = 0; k < ht.rounds.size() && k < log.transcript.rounds.size(); ++k) {
          std::vector<std::uint8_t> got, want;
          for (const auto& m : ht.rounds[k].received) {
            if (m.sender == log.node) put_message(got, m);
          }
          for (const auto& m : log.transcript.rounds[k].sent) {
            if (m.receiver == h) put_message(want, m);
          }
          c.bytes_compared += want.size();
          if (got != want && c.identical) {
            c.identical = false;
            c.detail = "node " + std::to_string(h.value) + " saw other traffic from " + std::to_string(log.node.value);
          }
        }
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

SuiteReport local_suite(std::uint64_t master) {
  SuiteReport report{"local", {}, 0};
  for (ChannelMode mode : {ChannelMode::NonAuth, ChannelMode::Auth}) {
    auto family = build_impossibility_scenarios(Family::T52, Rational(1, 2), 8);
    bool some = false;
    std::string detail;
    for (auto& member : family) {
      member.scenario.mode = mode;
      member.scenario.protocol = mode == ChannelMode::NonAuth ? ProtocolChoice::PredBa : ProtocolChoice::AuthPredBa;
      ScenarioResult r = run_scenario(member.scenario);
      Verdict v = check_outcome(member.scenario, r.outcome);
      some = some || !v.ok();
      detail += member.scenario.label + ":" + (v.ok() ? "ok " : "fails ");
      ++report.runs;
    }
    report.add("T5.2 n=8 " + std::string(to_string(mode)) + " fails in some configuration", some, detail);
  }
  for (auto p : {ProtocolChoice::PredBa, ProtocolChoice::AuthPredBa, ProtocolChoice::PhaseKing,
                 ProtocolChoice::DolevStrongBa}) {
    for (const auto& c : replay_indistinguishability(p, 8, master)) {
      report.add("identical transcripts " + c.name, c.identical,
                 std::to_string(c.bytes_compared) + " bytes compared" + (c.detail.empty() ? "" : "; " + c.detail));
      report.runs += 1;
    }
  }
  for (const auto& c : persona_fidelity(Rational(4, 5), 20, master)) {
    report.add("split-brain fidelity " + c.name, c.identical,
               std::to_string(c.bytes_compared) + " bytes compared" + (c.detail.empty() ? "" : "; " + c.detail));
    report.runs += 1;
  }
  return report;
}

// --- baseline protocols --------------------------------------------------------------

namespace {

struct BroadcastVerdict {
  bool agreement = true;
  bool validity = true;
  bool termination = true;
  bool audit_ok = true;
  std::size_t rejected = 0;
};

BroadcastVerdict run_broadcast(int m, int t, NodeId sender, const NodeSet& faulty, Bit value, const AdversarySpec& adv,
                               std::uint64_t seed) {
  Configuration config;
  config.n = m;
  config.faulty = faulty;
  for (auto id : config.honest()) config.inputs[id] = value;
  World world{ChannelMode::Auth, config, replicate(NodeSet::range(1, m), m), seed};
  ProtocolFactory factory = dolev_strong_broadcast_factory(sender, NodeSet::range(1, m), t);
  auto adversary = make_adversary(adv, ChannelMode::Auth, seed);
  BroadcastVerdict v;
  try {
    RunResult r = run_simulation(world, factory, *adversary);
    std::optional<Bit> first;
    for (const auto& [id, b] : r.outcome.decisions) {
      if (!first) first = b;
      if (b != *first) v.agreement = false;
    }
    if (!faulty.contains(sender) && first && *first != value) v.validity = false;
    v.termination = r.outcome.termination && r.outcome.decided_round == t + 1;
    v.audit_ok = r.ledger_audit_ok;
    v.rejected = r.rejected_forgeries;
  } catch (const RoundBudgetExceeded&) {
    v.termination = false;
  }
  return v;
}

}  // namespace

SuiteReport protocols_suite(int seeds, std::uint64_t master) {
  SuiteReport report{"protocols", {}, 0};

  // Phase King, m = 4, t = 1: one faulty node, every honest input vector.
  {
    Tally tally;
    bool rounds_ok = true;
    for (int vec = 0; vec < 8; ++vec) {
      for (const auto& adv : adversary_library(ChannelMode::NonAuth)) {
        for (int i = 0; i < seeds; ++i) {
          std::uint64_t seed = derive_seed(master, static_cast<std::uint64_t>(vec * 1000 + i));
          Configuration config;
          config.n = 4;
          config.faulty = NodeSet{i % 4 + 1};
          int bit = 0;
          for (auto id : config.honest()) config.inputs[id] = bit_from_int((vec >> bit++) & 1);
          Scenario s;
          s.mode = ChannelMode::NonAuth;
          s.alpha = Rational(1, 2);
          s.protocol = ProtocolChoice::PhaseKing;
          s.config = config;
          s.prediction = replicate(NodeSet::range(1, 4), 4);
          s.adversary = adv;
          s.seed = seed;
          ScenarioResult r = run_scenario(s);
          Verdict v = check_outcome(s, r.outcome);
          tally.record(s, v);
          if (r.outcome.decided_round != phase_king_rounds(1)) rounds_ok = false;
          ++report.runs;
        }
      }
    }
    report.add("phase king m=4 t=1 exhaustive inputs", tally.violations == 0, tally.summary());
    report.add("phase king decides at round 3(t+1)", rounds_ok);
  }

  // Phase King, m = 7, t = 2 with two faulty nodes.
  {
    Tally tally;
    for (const auto& adv : adversary_library(ChannelMode::NonAuth)) {
      for (auto pattern : kPatterns) {
        for (int i = 0; i < seeds; ++i) {
          std::uint64_t seed = derive_seed(master ^ 7U, static_cast<std::uint64_t>(i));
          Scenario s;
          s.mode = ChannelMode::NonAuth;
          s.alpha = Rational(1, 2);
          s.protocol = ProtocolChoice::PhaseKing;
          s.config = make_configuration(7, 2, static_cast<Placement>(i % 3), pattern, seed);
          s.prediction = replicate(NodeSet::range(1, 7), 7);
          s.adversary = adv;
          s.seed = seed;
          tally.record(s, check_outcome(s, run_scenario(s).outcome));
          ++report.runs;
        }
      }
    }
    report.add("phase king m=7 t=2 two faulty", tally.violations == 0, tally.summary());
  }

  // Dolev-Strong broadcast, m in {4, 7}, every t <= m - 2 and f <= t.
  {
    std::size_t total = 0, bad = 0, rejected = 0;
    bool audit = true;
    std::string first;
    for (int m : {4, 7}) {
      for (int t = 1; t <= m - 2; ++t) {
        for (int f = 0; f <= t; ++f) {
          for (bool faulty_sender : {false, true}) {
            if (faulty_sender && f == 0) continue;
            for (const auto& adv : adversary_library(ChannelMode::Auth)) {
              for (int i = 0; i < seeds; ++i) {
                std::uint64_t seed = derive_seed(master ^ 0xd5U, static_cast<std::uint64_t>(((m * 16 + t) * 16 + f) * 4096 + i * 2 + (faulty_sender ? 1 : 0)));
                NodeSet faulty = place_faulty(m, f, static_cast<Placement>(i % 3), seed);
                NodeId sender = faulty_sender ? faulty.ids().front()
                                              : NodeSet::range(1, m).minus(faulty).ids().front();
                Bit value = bit_from_int(static_cast<int>(seed & 1U));
                auto v = run_broadcast(m, t, sender, faulty, value, adv, seed);
                ++total;
                audit = audit && v.audit_ok;
                rejected += v.rejected;
                if (!(v.agreement && v.validity && v.termination)) {
                  ++bad;
                  if (first.empty()) {
                    first = "m=" + std::to_string(m) + " t=" + std::to_string(t) + " f=" + std::to_string(f) +
                            " sender=" + std::to_string(sender.value) + " adversary=" + adv.name();
                  }
                }
              }
            }
          }
        }
      }
    }
    report.runs += total;
    report.add("dolev-strong broadcast m in {4,7}, f <= t <= m-2", bad == 0,
               std::to_string(bad) + " violations in " + std::to_string(total) + " runs" +
                   (first.empty() ? "" : "; first: " + first));
    report.add("ledger never holds an honest signature it did not issue", audit,
               std::to_string(rejected) + " forgery attempts rejected");
    report.add("forgery attempts were made and refused", rejected > 0);
  }

  // Dolev-Strong agreement with an honest majority.
  {
    Tally tally;
    for (int m : {4, 5, 7}) {
      int f = (m + 1) / 2 - 1;
      for (const auto& adv : adversary_library(ChannelMode::Auth)) {
        for (auto pattern : kPatterns) {
          for (int i = 0; i < std::max(1, seeds / 5); ++i) {
            std::uint64_t seed = derive_seed(master ^ 0xbaU, static_cast<std::uint64_t>(m * 4096 + i));
            Scenario s;
            s.mode = ChannelMode::Auth;
            s.alpha = Rational(1, 2);
            s.protocol = ProtocolChoice::DolevStrongBa;
            s.config = make_configuration(m, f, static_cast<Placement>(i % 3), pattern, seed);
            s.prediction = replicate(NodeSet::range(1, m), m);
            s.adversary = adv;
            s.seed = seed;
            tally.record(s, check_outcome(s, run_scenario(s).outcome));
            ++report.runs;
          }
        }
      }
    }
    report.add("dolev-strong agreement, faulty < ceil(m/2)", tally.violations == 0, tally.summary());
  }
  return report;
}

}  // namespace bapred
