#pragma once

#include "bapred/simnet.hpp"

#include <array>

namespace bapred {

enum class ProtocolKind : std::uint8_t { PhaseKing, DolevStrongBa };

std::string_view to_string(ProtocolKind kind);

struct ProtocolSchedule {
  ProtocolKind protocol = ProtocolKind::PhaseKing;
  NodeSet participants;
  int fault_budget = 0;
  int total_rounds = 0;

  /// phase_king: 3(t+1) rounds; dolev_strong_ba: t+1 broadcast rounds plus one
  /// decision-exchange round.
  static ProtocolSchedule make(ProtocolKind protocol, NodeSet participants, int t);
};

int phase_king_rounds(int t);
int dolev_strong_ba_rounds(int t);

/// Inner agreement engine driven with local round numbers 1..rounds().
class AgreementCore {
 public:
  virtual ~AgreementCore() = default;
  virtual int rounds() const = 0;
  virtual void send(int k, Outbox& out) = 0;
  virtual void receive(int k, std::span<const Message> inbox) = 0;
  /// Available once round rounds() has been received.
  virtual std::optional<Bit> output() const = 0;
};

/// Phase King over `participants`, t+1 phases of three rounds each. Thresholds
/// use tau = ceil(m/3) - 1; king of phase p is the p-th participant (mod m).
class PhaseKingCore final : public AgreementCore {
 public:
  PhaseKingCore(NodeId self, NodeSet participants, int t, Bit input);

  int rounds() const override { return phase_king_rounds(t_); }
  void send(int k, Outbox& out) override;
  void receive(int k, std::span<const Message> inbox) override;
  std::optional<Bit> output() const override { return output_; }

  int tolerance() const { return tau_; }
  NodeId king_of_phase(int phase) const;

 private:
  /// Counts of 0 and 1 from distinct participants with matching step.
  std::array<int, 2> tally(int k, std::span<const Message> inbox, std::optional<NodeId> only_from = {}) const;

  NodeId self_;
  NodeSet participants_;
  int m_;
  int t_;
  int tau_;
  Bit value_;
  std::uint8_t proposal_ = kNoValue;
  bool strong_ = false;
  std::optional<Bit> output_;
};

/// One Dolev-Strong broadcast instance (the instance id is the sender id).
/// Runs t+1 rounds; a value received in round r is accepted only with r
/// distinct valid participant signatures, the first being the sender's.
class DolevStrongInstance {
 public:
  DolevStrongInstance(NodeId self, NodeId sender, const NodeSet* participants, int t, const Signer* signer,
                      std::optional<Bit> sender_value);

  void send(int k, Outbox& out);
  void accept(int k, const Message& m);

  /// The single extracted value, or 0 when zero or two values were extracted.
  Bit output() const;
  int extracted_count() const { return static_cast<int>(extracted_.size()); }
  bool has_extracted(Bit b) const;

  /// Validates a chain for `value` at local round k without side effects.
  bool chain_valid(int k, Bit value, std::span<const Signature> sigs) const;

 private:
  NodeId self_;
  NodeId sender_;
  const NodeSet* participants_;
  int t_;
  const Signer* signer_;
  std::array<Digest, 2> digest_{};  // signing digest per value
  std::vector<Bit> extracted_;
  std::vector<std::pair<Bit, SigChain>> pending_;
};

/// Parallel Dolev-Strong broadcasts from every participant, majority of the
/// outputs with ties to 0. Output is ready after t+1 rounds.
class DolevStrongBaCore final : public AgreementCore {
 public:
  DolevStrongBaCore(NodeId self, NodeSet participants, int t, Bit input, Signer signer);

  int rounds() const override { return t_ + 1; }
  void send(int k, Outbox& out) override;
  void receive(int k, std::span<const Message> inbox) override;
  std::optional<Bit> output() const override { return output_; }

  const DolevStrongInstance& instance(NodeId sender) const;

 private:
  NodeId self_;
  NodeSet participants_;
  int t_;
  Signer signer_;
  std::vector<DolevStrongInstance> instances_;  // index aligned with participants_
  std::vector<int> slot_;                       // node id to instance index, -1 if absent
  int slot_of(NodeId id) const {
    auto i = static_cast<std::size_t>(id.value);
    return id.value >= 0 && i < slot_.size() ? slot_[i] : -1;
  }
  std::optional<Bit> output_;
};

// --- standalone processes (participants must be all of ⟦n⟧) --------------------

/// Decides the Phase King output at round 3(t+1).
std::unique_ptr<Process> make_phase_king_process(const NodeContext& ctx, Bit input, const NodeSet& participants,
                                                 int t);

/// Decides the broadcast output of `sender` at round t+1.
std::unique_ptr<Process> make_dolev_strong_broadcast_process(const NodeContext& ctx, NodeId sender, Bit value,
                                                             const NodeSet& participants, int t);

/// Decides at round t+2 after exchanging decisions with the other participants.
std::unique_ptr<Process> make_dolev_strong_ba_process(const NodeContext& ctx, Bit input, const NodeSet& participants,
                                                      int t);

ProtocolFactory phase_king_factory(NodeSet participants, int t);
ProtocolFactory dolev_strong_ba_factory(NodeSet participants, int t);
/// Every node gets `value` as the sender value; only the sender's matters.
ProtocolFactory dolev_strong_broadcast_factory(NodeId sender, NodeSet participants, int t);

}  // namespace bapred
