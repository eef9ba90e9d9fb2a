#include "bapred/scenario.hpp"

namespace bapred {

std::string_view to_string(ProtocolChoice p) {
  switch (p) {
    case ProtocolChoice::PredBa: return "pred_ba";
    case ProtocolChoice::AuthPredBa: return "auth_pred_ba";
    case ProtocolChoice::PhaseKing: return "phase_king";
    case ProtocolChoice::DolevStrongBa: return "dolev_strong_ba";
  }
  return "unknown";
}

ProtocolChoice parse_protocol_choice(std::string_view text) {
  for (auto p : {ProtocolChoice::PredBa, ProtocolChoice::AuthPredBa, ProtocolChoice::PhaseKing,
                 ProtocolChoice::DolevStrongBa}) {
    if (to_string(p) == text) return p;
  }
  throw DomainError("unknown protocol '" + std::string(text) + "'");
}

ChannelMode mode_of(ProtocolChoice p) {
  return p == ProtocolChoice::PredBa || p == ProtocolChoice::PhaseKing ? ChannelMode::NonAuth : ChannelMode::Auth;
}

int standalone_fault_budget(ProtocolChoice p, int n) {
  return p == ProtocolChoice::PhaseKing ? (n + 2) / 3 - 1 : (n + 1) / 2 - 1;
}

void Scenario::validate() const {
  config.validate();
  if (mode_of(protocol) != mode) throw DomainError("protocol does not match the channel mode");
  TrustParam checked(alpha, mode);
  (void)checked;
  if (prediction.per_node.size() != static_cast<std::size_t>(config.n))
    throw DomainError("prediction needs one entry per node");
  for (const auto& p : prediction.per_node) {
    if (!p.subset_of_range(config.n)) throw DomainError("prediction names a node outside 1..n");
  }
  if (!local_prediction) {
    for (const auto& p : prediction.per_node) {
      if (p != prediction.per_node.front()) throw DomainError("global prediction differs between nodes");
    }
  }
  if (adversary.kind == AdversaryKind::LateChain && mode != ChannelMode::Auth)
    throw DomainError("late_chain needs authenticated channels");
  for (const auto& l : adversary.labels) {
    if (!l.members.minus(config.faulty).empty()) throw DomainError("persona members must be faulty");
    if (!l.audience.intersect(config.faulty).empty()) throw DomainError("persona audience must be honest");
    if (l.prediction && !l.prediction->subset_of_range(config.n)) throw DomainError("persona prediction out of range");
  }
}

World Scenario::world() const { return World{mode, config, prediction, seed}; }

ProtocolFactory Scenario::factory() const {
  int n = config.n;
  switch (protocol) {
    case ProtocolChoice::PredBa:
    case ProtocolChoice::AuthPredBa: return pred_ba_factory(TrustParam(alpha, mode));
    case ProtocolChoice::PhaseKing:
      return phase_king_factory(NodeSet::range(1, n), standalone_fault_budget(protocol, n));
    case ProtocolChoice::DolevStrongBa:
      return dolev_strong_ba_factory(NodeSet::range(1, n), standalone_fault_budget(protocol, n));
  }
  throw DomainError("unknown protocol");
}

std::int64_t Scenario::error() const {
  if (local_prediction) return compute_local_error(config, prediction);
  return compute_error(config, Prediction{prediction.per_node.at(0)}).eta;
}

ScenarioResult run_scenario(const Scenario& s, const RunOptions& options) {
  s.validate();
  World world = s.world();
  ProtocolFactory factory = s.factory();
  auto adversary = make_adversary(s.adversary, s.mode, s.seed);
  ScenarioResult out;
  try {
    RunResult r = run_simulation(world, factory, *adversary, options);
    out.outcome = std::move(r.outcome);
    out.rounds = r.rounds_executed;
    out.rejected_forgeries = r.rejected_forgeries;
    out.ledger_audit_ok = r.ledger_audit_ok;
    out.transcripts = std::move(r.transcripts);
    out.ledger = std::move(r.ledger);
    out.personas = std::move(r.personas);
  } catch (const RoundBudgetExceeded&) {
    out.outcome = evaluate_decisions(s.config, {}, 0);
    out.outcome.termination = false;
    out.rounds = options.round_budget > 0 ? options.round_budget : default_round_budget(s.n());
  }
  return out;
}

}  // namespace bapred
