#include "bapred/simnet.hpp"

#include <algorithm>

namespace bapred {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

}  // namespace

std::string_view to_string(ProtocolTag tag) {
  switch (tag) {
    case ProtocolTag::PhaseKing: return "phase_king";
    case ProtocolTag::DolevStrong: return "dolev_strong";
    case ProtocolTag::Decision: return "decision";
    case ProtocolTag::Echo: return "echo";
  }
  return "unknown";
}

ProtocolTag parse_protocol_tag(std::string_view text) {
  for (auto tag : {ProtocolTag::PhaseKing, ProtocolTag::DolevStrong, ProtocolTag::Decision, ProtocolTag::Echo}) {
    if (to_string(tag) == text) return tag;
  }
  throw DomainError("unknown protocol tag '" + std::string(text) + "'");
}

std::vector<std::uint8_t> Payload::encode() const {
  std::vector<std::uint8_t> out;
  out.reserve(12);
  out.push_back(10);
  out.push_back(0);
  out.push_back(static_cast<std::uint8_t>(tag));
  put_u32(out, instance);
  put_u32(out, step);
  out.push_back(value);
  return out;
}

std::uint64_t Payload::signing_digest() const {
  Payload unstepped = *this;
  unstepped.step = 0;
  return fnv1a(unstepped.encode());
}

SigChain make_chain(std::vector<Signature> sigs) {
  return std::make_shared<const std::vector<Signature>>(std::move(sigs));
}

SigChain extend_chain(const SigChain& chain, Signature sig) {
  std::vector<Signature> sigs;
  sigs.reserve((chain ? chain->size() : 0) + 1);
  if (chain) sigs.assign(chain->begin(), chain->end());
  sigs.push_back(sig);
  return make_chain(std::move(sigs));
}

bool operator==(const Message& a, const Message& b) {
  if (a.round != b.round || a.sender != b.sender || a.receiver != b.receiver || !(a.payload == b.payload))
    return false;
  auto sa = a.signatures();
  auto sb = b.signatures();
  return std::equal(sa.begin(), sa.end(), sb.begin(), sb.end());
}

// --- ledger ------------------------------------------------------------------

SignatureLedger::SignatureLedger(std::uint64_t secret, NodeSet faulty)
    : secret_(splitmix64(secret ^ 0x5157a7e5ULL)), faulty_(std::move(faulty)) {}

Token SignatureLedger::token_for(NodeId signer, Digest digest) const {
  return splitmix64(secret_ ^ splitmix64(digest ^ (static_cast<std::uint64_t>(signer.value) << 40)));
}

Token SignatureLedger::mint(Principal who, NodeId requester, NodeId signer, Digest digest) {
  bool allowed = false;
  switch (who) {
    case Principal::Honest: allowed = requester == signer && !faulty_.contains(signer); break;
    case Principal::Adversary: allowed = faulty_.contains(signer); break;
    case Principal::Replay: allowed = requester == signer; break;
  }
  if (!allowed) {
    ++rejected_;
    throw ForgeryRejected("signature for node " + std::to_string(signer.value) + " refused");
  }
  Token token = token_for(signer, digest);
  auto [it, inserted] = entries_.try_emplace(token, Entry{signer, digest, round_, who, requester});
  if (!inserted && it->second.minted > round_) it->second.minted = round_;
  return token;
}

bool SignatureLedger::verify(Token token, NodeId signer, Digest digest) const {
  auto it = entries_.find(token);
  if (it == entries_.end()) return false;
  const Entry& e = it->second;
  return e.signer == signer && e.digest == digest && e.minted <= round_;
}

bool SignatureLedger::audit() const {
  for (const auto& [token, e] : entries_) {
    if (faulty_.contains(e.signer)) continue;
    if (e.who == Principal::Adversary || e.requester != e.signer) return false;
  }
  return true;
}

Signature Signer::sign(Digest digest) const {
  if (!ledger_) throw std::logic_error("signing is unavailable in this context");
  return Signature{self_, ledger_->mint(who_, self_, self_, digest)};
}

bool Signer::verify(const Signature& sig, Digest digest) const {
  return ledger_ && ledger_->verify(sig.token, sig.signer, digest);
}

// --- outboxes ----------------------------------------------------------------

void Outbox::send(NodeId to, const Payload& payload, const SigChain& chain) {
  if (to == self_) return;
  sink_->push_back(Message{round_, self_, to, payload, chain});
}

void Outbox::broadcast(const NodeSet& to, const Payload& payload, const SigChain& chain) {
  for (auto id : to) send(id, payload, chain);
}

void AdversaryOutbox::send(NodeId from, NodeId to, const Payload& payload, const SigChain& chain) {
  send(Message{round_, from, to, payload, chain});
}

void AdversaryOutbox::send(const Message& m) {
  if (!faulty_->contains(m.sender))
    throw ForgeryRejected("adversary cannot send as honest node " + std::to_string(m.sender.value));
  if (m.sender == m.receiver) return;
  Message copy = m;
  copy.round = round_;
  sink_->push_back(std::move(copy));
}

NodeContext AdversaryContext::persona_context(NodeId faulty_node) const {
  return NodeContext{faulty_node, world->n(), world->mode, Signer(ledger, Principal::Adversary, faulty_node)};
}

std::unique_ptr<Process> AdversaryContext::make_persona(NodeId faulty_node, Bit input,
                                                        const NodeSet& prediction) const {
  return (*factory)(persona_context(faulty_node), input, prediction);
}

// --- outcome -----------------------------------------------------------------

Outcome evaluate_decisions(const Configuration& config, std::map<NodeId, Bit> decisions, Round decided_round) {
  Outcome o;
  NodeSet honest = config.honest();
  o.termination = true;
  for (auto id : honest) {
    if (!decisions.contains(id)) o.termination = false;
  }
  o.agreement = true;
  o.validity = true;
  std::optional<Bit> first;
  for (const auto& [id, bit] : decisions) {
    if (!first) first = bit;
    if (bit != *first) o.agreement = false;
    bool some_honest_input = std::any_of(config.inputs.begin(), config.inputs.end(), [&](const auto& kv) {
      return honest.contains(kv.first) && kv.second == bit;
    });
    if (!some_honest_input) o.validity = false;
  }
  o.decisions = std::move(decisions);
  o.decided_round = decided_round;
  return o;
}

// --- simulation loop -----------------------------------------------------------

int default_round_budget(int n) { return 4 * (n + 2); }

RunResult run_simulation(const World& world, const ProtocolFactory& factory, Adversary& adversary,
                         const RunOptions& options) {
  const int n = world.n();
  world.config.validate();
  if (world.predictions.per_node.size() != static_cast<std::size_t>(n))
    throw DomainError("world needs one prediction per node");

  const NodeSet& faulty = world.config.faulty;
  const NodeSet honest = world.config.honest();
  auto ledger = std::make_shared<SignatureLedger>(world.seed, faulty);

  std::vector<std::unique_ptr<Process>> processes(static_cast<std::size_t>(n) + 1);
  for (auto id : honest) {
    NodeContext ctx{id, n, world.mode, Signer(ledger.get(), Principal::Honest, id)};
    processes[static_cast<std::size_t>(id.value)] =
        factory(ctx, world.config.inputs.at(id), world.predictions.of(id));
  }

  AdversaryContext actx{&world, &factory, ledger.get(), options.record_transcripts};
  adversary.setup(actx);

  RunResult result;
  if (options.record_transcripts) {
    for (int i = 1; i <= n; ++i) result.transcripts.push_back(Transcript{NodeId{i}, honest.contains(NodeId{i}), {}});
  }

  const int budget = options.round_budget > 0 ? options.round_budget : default_round_budget(n);
  std::map<NodeId, Bit> decisions;
  Round decided_round = 0;

  std::vector<Message> honest_out;
  std::vector<Message> faulty_out;
  std::vector<Message> all;
  std::vector<Message> to_faulty;
  std::vector<std::size_t> slot;

  Round r = 0;
  while (decisions.size() < honest.size()) {
    if (r >= budget) {
      throw RoundBudgetExceeded("honest nodes undecided after " + std::to_string(budget) + " rounds");
    }
    ++r;
    ledger->set_round(r);

    honest_out.clear();
    for (auto id : honest) {
      Outbox out(id, r, honest_out);
      processes[static_cast<std::size_t>(id.value)]->send(r, out);
    }
    for (const auto& m : honest_out) {
      if (m.receiver.value < 1 || m.receiver.value > n) throw std::logic_error("message to unknown node");
    }

    faulty_out.clear();
    AdversaryOutbox aout(faulty, r, faulty_out);
    adversary.act(r, honest_out, aout);
    for (const auto& m : faulty_out) {
      if (m.receiver.value < 1 || m.receiver.value > n) throw std::logic_error("adversary message to unknown node");
    }

    if (options.record_transcripts) {
      for (auto& t : result.transcripts) t.rounds.push_back(RoundLog{r, {}, {}});
      auto log_sent = [&](const std::vector<Message>& batch) {
        for (const auto& m : batch) result.transcripts[static_cast<std::size_t>(m.sender.value - 1)].rounds.back().sent.push_back(m);
      };
      log_sent(honest_out);
      log_sent(faulty_out);
    }

    // Stable counting sort by (receiver, sender).
    const std::size_t buckets = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    std::fill(slot.begin(), slot.end(), 0);
    slot.resize(buckets + 1, 0);
    auto key = [n](const Message& m) {
      return static_cast<std::size_t>(m.receiver.value - 1) * static_cast<std::size_t>(n) +
             static_cast<std::size_t>(m.sender.value - 1);
    };
    for (const auto& m : honest_out) ++slot[key(m) + 1];
    for (const auto& m : faulty_out) ++slot[key(m) + 1];
    for (std::size_t b = 1; b <= buckets; ++b) slot[b] += slot[b - 1];
    all.clear();
    all.resize(honest_out.size() + faulty_out.size());
    for (auto& m : honest_out) all[slot[key(m)]++] = std::move(m);
    for (auto& m : faulty_out) all[slot[key(m)]++] = std::move(m);

    if (options.record_transcripts) {
      for (const auto& m : all) result.transcripts[static_cast<std::size_t>(m.receiver.value - 1)].rounds.back().received.push_back(m);
    }

    to_faulty.clear();
    auto it = all.begin();
    while (it != all.end()) {
      auto end = std::find_if(it, all.end(), [&](const Message& m) { return m.receiver != it->receiver; });
      NodeId receiver = it->receiver;
      if (faulty.contains(receiver)) {
        to_faulty.insert(to_faulty.end(), it, end);
      }
      it = end;
    }
    adversary.observe(r, to_faulty);

    // Deliver in id order; nodes with no mail still get an empty inbox.
    auto cursor = all.begin();
    for (auto id : honest) {
      while (cursor != all.end() && cursor->receiver < id) ++cursor;
      auto end = cursor;
      while (end != all.end() && end->receiver == id) ++end;
      Process& p = *processes[static_cast<std::size_t>(id.value)];
      p.receive(r, std::span<const Message>(&*cursor, static_cast<std::size_t>(end - cursor)));
      cursor = end;
      if (!decisions.contains(id)) {
        if (auto d = p.decision()) {
          decisions.emplace(id, *d);
          decided_round = r;
        }
      }
    }
  }

  result.outcome = evaluate_decisions(world.config, std::move(decisions), decided_round);
  result.rounds_executed = r;
  result.rejected_forgeries = ledger->rejected_forgeries();
  result.ledger_audit_ok = ledger->audit();
  result.ledger = std::move(ledger);
  if (options.record_transcripts) result.personas = adversary.persona_logs();
  return result;
}

ReplayCheck replay_transcript(const Transcript& transcript, Process& fresh, SignatureLedger& ledger) {
  ReplayCheck check;
  std::vector<Message> sent;
  for (const auto& log : transcript.rounds) {
    ledger.set_round(log.round);
    sent.clear();
    Outbox out(transcript.node, log.round, sent);
    fresh.send(log.round, out);
    bool same = sent.size() == log.sent.size() && std::equal(sent.begin(), sent.end(), log.sent.begin());
    if (!same && check.sends_match) {
      check.sends_match = false;
      check.first_mismatch = log.round;
    }
    fresh.receive(log.round, log.received);
  }
  check.decision = fresh.decision();
  return check;
}

}  // namespace bapred
