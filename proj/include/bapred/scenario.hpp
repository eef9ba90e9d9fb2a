#pragma once

#include "bapred/adversary.hpp"

namespace bapred {

enum class ProtocolChoice : std::uint8_t { PredBa, AuthPredBa, PhaseKing, DolevStrongBa };

std::string_view to_string(ProtocolChoice p);
ProtocolChoice parse_protocol_choice(std::string_view text);
ChannelMode mode_of(ProtocolChoice p);

/// Everything needed to reproduce one run.
struct Scenario {
  ChannelMode mode = ChannelMode::NonAuth;
  Rational alpha{1};
  ProtocolChoice protocol = ProtocolChoice::PredBa;
  Configuration config;
  LocalPrediction prediction;  // one entry per node
  bool local_prediction = false;
  AdversarySpec adversary;
  std::uint64_t seed = 0;
  std::string label;

  int n() const { return config.n; }

  /// Throws DomainError on any inconsistency.
  void validate() const;

  World world() const;
  ProtocolFactory factory() const;

  /// Global error eta for global predictions, summed local error otherwise.
  std::int64_t error() const;
};

/// Thresholds used when a baseline protocol runs standalone over all n nodes.
int standalone_fault_budget(ProtocolChoice p, int n);

struct ScenarioResult {
  Outcome outcome;
  Round rounds = 0;
  std::size_t rejected_forgeries = 0;
  bool ledger_audit_ok = true;
  std::vector<Transcript> transcripts;
  std::shared_ptr<SignatureLedger> ledger;
  std::vector<PersonaLog> personas;

  bool ok() const { return outcome.agreement && outcome.validity && outcome.termination; }
};

/// Runs the scenario; an exhausted round budget yields termination = false.
ScenarioResult run_scenario(const Scenario& s, const RunOptions& options = {});

}  // namespace bapred
