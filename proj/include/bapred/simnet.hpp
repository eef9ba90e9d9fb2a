#pragma once

#include "bapred/core.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace bapred {

enum class ProtocolTag : std::uint8_t {
  PhaseKing = 1,
  DolevStrong = 2,
  Decision = 3,
  Echo = 4,
};

std::string_view to_string(ProtocolTag tag);
ProtocolTag parse_protocol_tag(std::string_view text);

/// Value field sentinel for "no value" (e.g. an empty Phase King proposal).
inline constexpr std::uint8_t kNoValue = 2;

/// Structured message body.
///
/// Wire layout (little endian, 12 bytes):
///   u16 length (=10) | u8 tag | u32 instance | u32 step | u8 value
struct Payload {
  ProtocolTag tag = ProtocolTag::Echo;
  std::uint32_t instance = 0;
  std::uint32_t step = 0;
  std::uint8_t value = kNoValue;

  std::vector<std::uint8_t> encode() const;

  /// Digest covered by signatures: tag, instance and value. The step is left
  /// out so relayed copies of a value carry the same digest.
  std::uint64_t signing_digest() const;

  bool operator==(const Payload&) const = default;
};

using Digest = std::uint64_t;
using Token = std::uint64_t;

struct Signature {
  NodeId signer;
  Token token = 0;
  bool operator==(const Signature&) const = default;
};

using SigChain = std::shared_ptr<const std::vector<Signature>>;

SigChain make_chain(std::vector<Signature> sigs);
SigChain extend_chain(const SigChain& chain, Signature sig);

struct Message {
  Round round = 0;
  NodeId sender;
  NodeId receiver;
  Payload payload;
  SigChain chain;  // null in non-authenticated mode

  std::span<const Signature> signatures() const {
    return chain ? std::span<const Signature>(*chain) : std::span<const Signature>{};
  }
};

bool operator==(const Message& a, const Message& b);

// --- signatures --------------------------------------------------------------

enum class Principal : std::uint8_t { Honest, Adversary, Replay };

/// Thrown when the adversary asks for a signature on behalf of an honest node.
class ForgeryRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Simulated PKI. Tokens are opaque; a token verifies only if it was minted
/// for exactly (signer, digest) at or before the current round.
class SignatureLedger {
 public:
  SignatureLedger(std::uint64_t secret, NodeSet faulty);

  Token mint(Principal who, NodeId requester, NodeId signer, Digest digest);
  bool verify(Token token, NodeId signer, Digest digest) const;

  void set_round(Round r) { round_ = r; }
  Round round() const { return round_; }

  std::size_t rejected_forgeries() const { return rejected_; }
  std::size_t size() const { return entries_.size(); }

  /// True iff every entry naming an honest signer was minted by that node.
  bool audit() const;

 private:
  struct Entry {
    NodeId signer;
    Digest digest = 0;
    Round minted = 0;
    Principal who = Principal::Honest;
    NodeId requester;
  };

  Token token_for(NodeId signer, Digest digest) const;

  std::uint64_t secret_;
  NodeSet faulty_;
  Round round_ = 0;
  std::size_t rejected_ = 0;
  std::unordered_map<Token, Entry> entries_;
};

/// Signing capability handed to one node's protocol code.
class Signer {
 public:
  Signer() = default;
  Signer(SignatureLedger* ledger, Principal who, NodeId self) : ledger_(ledger), who_(who), self_(self) {}

  Signature sign(Digest digest) const;
  bool verify(const Signature& sig, Digest digest) const;
  bool available() const { return ledger_ != nullptr; }

 private:
  SignatureLedger* ledger_ = nullptr;
  Principal who_ = Principal::Honest;
  NodeId self_;
};

// --- processes -----------------------------------------------------------------

struct NodeContext {
  NodeId self;
  int n = 0;
  ChannelMode mode = ChannelMode::NonAuth;
  Signer signer;
};

/// Collects one node's outgoing messages for one round.
class Outbox {
 public:
  Outbox(NodeId self, Round round, std::vector<Message>& sink) : self_(self), round_(round), sink_(&sink) {}

  void send(NodeId to, const Payload& payload, const SigChain& chain = {});
  /// Sends to every member of `to` except the sender itself.
  void broadcast(const NodeSet& to, const Payload& payload, const SigChain& chain = {});

  NodeId self() const { return self_; }
  Round round() const { return round_; }

 private:
  NodeId self_;
  Round round_;
  std::vector<Message>* sink_;
};

/// Honest protocol state machine. Each round the simulator calls send() and
/// then receive() with every message addressed to the node in that round.
class Process {
 public:
  virtual ~Process() = default;
  virtual void send(Round r, Outbox& out) = 0;
  virtual void receive(Round r, std::span<const Message> inbox) = 0;
  virtual std::optional<Bit> decision() const = 0;
};

using ProtocolFactory =
    std::function<std::unique_ptr<Process>(const NodeContext& ctx, Bit input, const NodeSet& prediction)>;

// --- world, transcripts, outcome -------------------------------------------------

/// Everything a run depends on besides protocol and adversary code.
struct World {
  ChannelMode mode = ChannelMode::NonAuth;
  Configuration config;
  LocalPrediction predictions;  // one entry per node; identical entries for a global prediction
  std::uint64_t seed = 0;

  int n() const { return config.n; }
};

struct RoundLog {
  Round round = 0;
  std::vector<Message> sent;
  std::vector<Message> received;
};

struct Transcript {
  NodeId node;
  bool honest = true;
  std::vector<RoundLog> rounds;
};

struct Outcome {
  std::map<NodeId, Bit> decisions;
  Round decided_round = 0;
  bool agreement = false;
  bool validity = false;
  bool termination = false;
};

/// Agreement, validity and termination of a set of honest decisions.
Outcome evaluate_decisions(const Configuration& config, std::map<NodeId, Bit> decisions, Round decided_round);

// --- adversary interface ---------------------------------------------------------

/// Lets the adversary emit messages from faulty nodes and sign with their keys.
class AdversaryOutbox {
 public:
  AdversaryOutbox(const NodeSet& faulty, Round round, std::vector<Message>& sink)
      : faulty_(&faulty), round_(round), sink_(&sink) {}

  void send(NodeId from, NodeId to, const Payload& payload, const SigChain& chain = {});
  void send(const Message& m);
  Round round() const { return round_; }

 private:
  const NodeSet* faulty_;
  Round round_;
  std::vector<Message>* sink_;
};

struct AdversaryContext {
  const World* world = nullptr;
  const ProtocolFactory* factory = nullptr;
  SignatureLedger* ledger = nullptr;
  bool record_personas = false;

  NodeContext persona_context(NodeId faulty_node) const;
  std::unique_ptr<Process> make_persona(NodeId faulty_node, Bit input, const NodeSet& prediction) const;
};

/// What one persona (an honest process run by the adversary) saw and sent.
struct PersonaLog {
  NodeId node;
  Bit input = Bit::Zero;
  NodeSet prediction;
  NodeSet audience;
  Transcript transcript;  // sent = everything the process emitted
};

/// Byzantine strategy controlling every faulty node. Rushing: act() sees all
/// honest messages of the round before choosing the faulty ones.
class Adversary {
 public:
  virtual ~Adversary() = default;
  virtual std::string name() const = 0;
  virtual void setup(const AdversaryContext& ctx) = 0;
  virtual void act(Round r, std::span<const Message> honest_outgoing, AdversaryOutbox& out) = 0;
  virtual void observe(Round r, std::span<const Message> delivered_to_faulty) = 0;
  /// Filled only when the context asked for persona recording.
  virtual std::vector<PersonaLog> persona_logs() const { return {}; }
};

// --- running ------------------------------------------------------------------

class RoundBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  bool record_transcripts = false;
  int round_budget = 0;  // 0 selects 4 * (n + 2)
};

struct RunResult {
  Outcome outcome;
  std::vector<Transcript> transcripts;  // one per node, in id order, if recorded
  Round rounds_executed = 0;
  std::size_t rejected_forgeries = 0;
  bool ledger_audit_ok = true;
  std::shared_ptr<SignatureLedger> ledger;
  std::vector<PersonaLog> personas;
};

int default_round_budget(int n);

RunResult run_simulation(const World& world, const ProtocolFactory& factory, Adversary& adversary,
                         const RunOptions& options = {});

/// Replays a recorded transcript through a fresh process. Returns true iff the
/// process emits exactly the recorded messages in every round.
struct ReplayCheck {
  bool sends_match = true;
  Round first_mismatch = 0;
  std::optional<Bit> decision;
};

ReplayCheck replay_transcript(const Transcript& transcript, Process& fresh, SignatureLedger& ledger);

}  // namespace bapred
