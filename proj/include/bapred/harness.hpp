#pragma once

#include "bapred/impossibility.hpp"
#include "bapred/predgen.hpp"

#include <unordered_map>

namespace bapred {

// --- configuration sampling ----------------------------------------------------

enum class Placement : std::uint8_t { High, Low, Random };
enum class InputPattern : std::uint8_t { AllZero, AllOne, SplitHalf, Random };

std::string_view to_string(Placement p);
std::string_view to_string(InputPattern p);

/// Mixes an index into a master seed (splitmix64 of master xor splitmix64(index)).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

NodeSet place_faulty(int n, int f, Placement placement, std::uint64_t seed);
std::map<NodeId, Bit> make_inputs(const NodeSet& honest, InputPattern pattern, std::uint64_t seed);
Configuration make_configuration(int n, int f, Placement placement, InputPattern pattern, std::uint64_t seed);

/// Trial i uses placement i mod 3 and pattern i mod 4, so 12 consecutive
/// trials cover every combination.
struct TrialPlan {
  Placement placement = Placement::High;
  InputPattern pattern = InputPattern::AllZero;
  std::uint64_t seed = 0;
};
TrialPlan trial_plan(std::uint64_t master, std::uint64_t index);

// --- checking and running ----------------------------------------------------------

struct Verdict {
  bool agreement = false;
  bool validity = false;
  bool termination = false;
  bool ok() const { return agreement && validity && termination; }
  bool operator==(const Verdict&) const = default;
};

/// Agreement, validity and termination recomputed from the decisions alone.
Verdict check_outcome(const Scenario& scenario, const Outcome& outcome);

/// Canonical text of everything the outcome can depend on; the seed is left
/// out when no seeded component is involved.
std::string scenario_key(const Scenario& s);

/// Runs scenarios once per distinct key.
class RunMemo {
 public:
  Verdict run(const Scenario& s);
  std::size_t runs() const { return runs_; }
  std::size_t hits() const { return hits_; }

 private:
  std::unordered_map<std::string, Verdict> cache_;
  std::size_t runs_ = 0;
  std::size_t hits_ = 0;
};

Scenario make_wrapper_scenario(ChannelMode mode, const Rational& alpha, Configuration config, const NodeSet& prediction,
                               AdversarySpec adversary, std::uint64_t seed);

// --- resilience ---------------------------------------------------------------------

struct ResilienceOptions {
  std::vector<AdversarySpec> adversaries;
  int trials = 4;
  std::uint64_t seed = 0;
  std::vector<PredictionSplit> splits{PredictionSplit::WorstCase, PredictionSplit::Inverse, PredictionSplit::Balanced};
};

/// Largest f such that every f' <= f passes every sampled run at error eta.
/// Searched upward from 0; -1 if even f = 0 fails.
int empirical_resilience(ChannelMode mode, const Rational& alpha, int n, int eta, const ResilienceOptions& options,
                         RunMemo* memo = nullptr);

struct SweepRow {
  ChannelMode mode = ChannelMode::NonAuth;
  Rational alpha;
  int n = 0;
  int eta = 0;
  std::int64_t theory_s = 0;
  std::optional<Impossibility> theory_sbar;
  int empirical_f = 0;
  int trials = 0;
  std::string adversary_set_hash;
};

std::string adversary_set_hash(const std::vector<AdversarySpec>& adversaries);

/// Empirical curve over eta_grid with the theoretical columns alongside.
/// Cell i is seeded with derive_seed(seed, i).
std::vector<SweepRow> sweep(ChannelMode mode, const Rational& alpha, int n, const std::vector<int>& eta_grid,
                            const ResilienceOptions& options);

/// mode,alpha,n,eta,theory_s,theory_sbar,sbar_flag,empirical_f,trials,adversary_set_hash
std::string sweep_csv(const std::vector<SweepRow>& rows);

ResilienceCurve empirical_curve(const std::vector<SweepRow>& rows);

// --- suites ---------------------------------------------------------------------------

struct Assertion {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<Assertion> assertions;
  std::size_t runs = 0;

  bool passed() const;
  void add(std::string name, bool passed, std::string detail = {});
};

struct ImpossibilityReport {
  Family family = Family::T41;
  Rational alpha;
  int n = 0;
  struct Entry {
    std::string label;
    std::int64_t eta = 0;
    int f = 0;
    Verdict verdict;
  };
  std::vector<Entry> entries;
  bool some_failure() const;
};

ImpossibilityReport run_impossibility_suite(Family family, const Rational& alpha, int n, std::optional<int> size = {});

/// f = floor(alpha n), P = H, every adversary x input pattern x seed.
SuiteReport consistency_suite(ChannelMode mode, const Rational& alpha, int n, int seeds, std::uint64_t master);

/// f = robustness bound, P in {F, empty, all, seeded random}.
SuiteReport robustness_suite(ChannelMode mode, const Rational& alpha, int n, int seeds, std::uint64_t master);

/// f = theoretical_smoothness(eta) for every eta and split; with sweep_trials > 0
/// also checks that the empirical curve is pointwise at least the theoretical one.
SuiteReport smoothness_suite(ChannelMode mode, const Rational& alpha, int n, int seeds, std::uint64_t master,
                             int sweep_trials);

/// The families at their default grid points.
SuiteReport impossibility_suite();

/// Local-prediction family and replay indistinguishability checks.
SuiteReport local_suite(std::uint64_t master);

/// Baseline Phase King and Dolev-Strong checks.
SuiteReport protocols_suite(int seeds, std::uint64_t master);

/// Transcript bytes: per round, sent then received messages, each as
/// round | sender | receiver | payload | signer/token pairs.
std::vector<std::uint8_t> transcript_bytes(const Transcript& t);

struct IndistinguishabilityCheck {
  std::string name;
  bool identical = false;
  std::size_t bytes_compared = 0;
  std::string detail;
};

/// Honest-side transcripts of A (resp. B) in the local family's Configs 1 (2) and 3.
std::vector<IndistinguishabilityCheck> replay_indistinguishability(ProtocolChoice protocol, int n, std::uint64_t seed);

/// Persona replay for the T4.1 family: every persona's recorded view replayed
/// through a fresh honest process reproduces its sends, and the partition it
/// faces received exactly those sends.
std::vector<IndistinguishabilityCheck> persona_fidelity(const Rational& alpha, int n, std::uint64_t seed);

}  // namespace bapred
