#include "bapred/protocols.hpp"

#include <algorithm>

namespace bapred {

std::string_view to_string(ProtocolKind kind) {
  return kind == ProtocolKind::PhaseKing ? "phase_king" : "dolev_strong_ba";
}

int phase_king_rounds(int t) { return 3 * (t + 1); }
int dolev_strong_ba_rounds(int t) { return t + 2; }

ProtocolSchedule ProtocolSchedule::make(ProtocolKind protocol, NodeSet participants, int t) {
  if (t < 0) throw DomainError("fault budget must be non-negative");
  ProtocolSchedule s;
  s.protocol = protocol;
  s.participants = std::move(participants);
  s.fault_budget = t;
  s.total_rounds = protocol == ProtocolKind::PhaseKing ? phase_king_rounds(t) : dolev_strong_ba_rounds(t);
  return s;
}

namespace {

int index_in(const NodeSet& set, NodeId id) {
  auto it = std::lower_bound(set.begin(), set.end(), id);
  if (it == set.end() || *it != id) return -1;
  return static_cast<int>(it - set.begin());
}

}  // namespace

// --- Phase King ---------------------------------------------------------------

PhaseKingCore::PhaseKingCore(NodeId self, NodeSet participants, int t, Bit input)
    : self_(self), participants_(std::move(participants)), m_(static_cast<int>(participants_.size())), t_(t),
      tau_((m_ + 2) / 3 - 1), value_(input) {
  if (!participants_.contains(self_)) throw DomainError("Phase King node must be a participant");
}

NodeId PhaseKingCore::king_of_phase(int phase) const {
  return participants_.ids()[static_cast<std::size_t>(phase % m_)];
}

std::array<int, 2> PhaseKingCore::tally(int k, std::span<const Message> inbox,
                                        std::optional<NodeId> only_from) const {
  std::array<int, 2> counts{0, 0};
  std::vector<char> seen(static_cast<std::size_t>(m_), 0);
  for (const auto& msg : inbox) {
    if (msg.payload.tag != ProtocolTag::PhaseKing || msg.payload.step != static_cast<std::uint32_t>(k)) continue;
    if (only_from && msg.sender != *only_from) continue;
    int idx = index_in(participants_, msg.sender);
    if (idx < 0 || seen[static_cast<std::size_t>(idx)]) continue;
    seen[static_cast<std::size_t>(idx)] = 1;
    if (msg.payload.value <= 1) ++counts[msg.payload.value];
  }
  return counts;
}

void PhaseKingCore::send(int k, Outbox& out) {
  int phase = (k - 1) / 3;
  int sub = (k - 1) % 3;
  Payload p{ProtocolTag::PhaseKing, 0, static_cast<std::uint32_t>(k), kNoValue};
  switch (sub) {
    case 0: p.value = static_cast<std::uint8_t>(value_); break;
    case 1: p.value = proposal_; break;
    case 2:
      if (king_of_phase(phase) != self_) return;
      p.value = static_cast<std::uint8_t>(value_);
      break;
  }
  out.broadcast(participants_, p);
}

void PhaseKingCore::receive(int k, std::span<const Message> inbox) {
  int phase = (k - 1) / 3;
  int sub = (k - 1) % 3;
  if (sub == 0) {
    auto c = tally(k, inbox);
    ++c[to_int(value_)];
    proposal_ = kNoValue;
    for (int b = 0; b < 2; ++b) {
      if (c[b] >= m_ - tau_) proposal_ = static_cast<std::uint8_t>(b);
    }
  } else if (sub == 1) {
    auto c = tally(k, inbox);
    if (proposal_ <= 1) ++c[proposal_];
    strong_ = false;
    int best = c[1] > c[0] ? 1 : 0;
    if (c[best] > tau_) {
      value_ = bit_from_int(best);
      strong_ = c[best] >= m_ - tau_;
    }
  } else {
    NodeId king = king_of_phase(phase);
    if (!strong_ && king != self_) {
      auto c = tally(k, inbox, king);
      value_ = c[1] > 0 && c[0] == 0 ? Bit::One : Bit::Zero;
    }
    if (k == rounds()) output_ = value_;
  }
}

// --- Dolev-Strong ---------------------------------------------------------------

DolevStrongInstance::DolevStrongInstance(NodeId self, NodeId sender, const NodeSet* participants, int t,
                                         const Signer* signer, std::optional<Bit> sender_value)
    : self_(self), sender_(sender), participants_(participants), t_(t), signer_(signer) {
  for (int b = 0; b < 2; ++b) {
    digest_[static_cast<std::size_t>(b)] =
        Payload{ProtocolTag::DolevStrong, static_cast<std::uint32_t>(sender.value), 0, static_cast<std::uint8_t>(b)}
            .signing_digest();
  }
  if (sender_value) {
    extracted_.push_back(*sender_value);
    pending_.emplace_back(*sender_value, make_chain({signer_->sign(digest_[static_cast<std::size_t>(to_int(*sender_value))])}));
  }
}

bool DolevStrongInstance::has_extracted(Bit b) const {
  return std::find(extracted_.begin(), extracted_.end(), b) != extracted_.end();
}

bool DolevStrongInstance::chain_valid(int k, Bit value, std::span<const Signature> sigs) const {
  if (static_cast<int>(sigs.size()) < k || sigs.empty()) return false;
  if (sigs.front().signer != sender_) return false;
  Digest d = digest_[static_cast<std::size_t>(to_int(value))];
  std::vector<NodeId> seen;
  seen.reserve(sigs.size());
  for (const auto& s : sigs) {
    if (!participants_->contains(s.signer)) return false;
    if (std::find(seen.begin(), seen.end(), s.signer) != seen.end()) return false;
    seen.push_back(s.signer);
    if (!signer_->verify(s, d)) return false;
  }
  return true;
}

void DolevStrongInstance::send(int k, Outbox& out) {
  for (auto& [value, chain] : pending_) {
    Payload p{ProtocolTag::DolevStrong, static_cast<std::uint32_t>(sender_.value), static_cast<std::uint32_t>(k),
              static_cast<std::uint8_t>(value)};
    out.broadcast(*participants_, p, chain);
  }
  pending_.clear();
}

void DolevStrongInstance::accept(int k, const Message& m) {
  if (k > t_ + 1 || extracted_.size() >= 2) return;
  if (m.payload.value > 1) return;
  Bit v = bit_from_int(m.payload.value);
  if (has_extracted(v)) return;
  auto sigs = m.signatures();
  if (!chain_valid(k, v, sigs)) return;
  extracted_.push_back(v);
  if (k <= t_) {
    pending_.emplace_back(v, extend_chain(m.chain, signer_->sign(digest_[static_cast<std::size_t>(to_int(v))])));
  }
}

Bit DolevStrongInstance::output() const { return extracted_.size() == 1 ? extracted_.front() : Bit::Zero; }

DolevStrongBaCore::DolevStrongBaCore(NodeId self, NodeSet participants, int t, Bit input, Signer signer)
    : self_(self), participants_(std::move(participants)), t_(t), signer_(signer) {
  if (!participants_.contains(self_)) throw DomainError("Dolev-Strong node must be a participant");
  if (!signer_.available()) throw DomainError("Dolev-Strong needs authenticated channels");
  instances_.reserve(participants_.size());
  slot_.assign(static_cast<std::size_t>(participants_.ids().back().value) + 1, -1);
  for (auto sender : participants_) {
    slot_[static_cast<std::size_t>(sender.value)] = static_cast<int>(instances_.size());
    std::optional<Bit> own;
    if (sender == self_) own = input;
    instances_.emplace_back(self_, sender, &participants_, t_, &signer_, own);
  }
}

const DolevStrongInstance& DolevStrongBaCore::instance(NodeId sender) const {
  int idx = index_in(participants_, sender);
  if (idx < 0) throw DomainError("no Dolev-Strong instance for that sender");
  return instances_[static_cast<std::size_t>(idx)];
}

void DolevStrongBaCore::send(int k, Outbox& out) {
  if (k > t_ + 1) return;
  for (auto& inst : instances_) inst.send(k, out);
}

void DolevStrongBaCore::receive(int k, std::span<const Message> inbox) {
  if (k > t_ + 1) return;
  for (const auto& msg : inbox) {
    if (msg.payload.tag != ProtocolTag::DolevStrong || msg.payload.step != static_cast<std::uint32_t>(k)) continue;
    if (slot_of(msg.sender) < 0) continue;
    int idx = msg.payload.instance > static_cast<std::uint32_t>(slot_.size())
                  ? -1
                  : slot_of(NodeId{static_cast<std::int32_t>(msg.payload.instance)});
    if (idx < 0) continue;
    instances_[static_cast<std::size_t>(idx)].accept(k, msg);
  }
  if (k == t_ + 1) {
    int ones = 0;
    for (const auto& inst : instances_) ones += inst.output() == Bit::One ? 1 : 0;
    int zeros = static_cast<int>(instances_.size()) - ones;
    output_ = ones > zeros ? Bit::One : Bit::Zero;
  }
}

// --- standalone processes -------------------------------------------------------

namespace {

void require_full(const NodeContext& ctx, const NodeSet& participants) {
  if (!participants.contains(ctx.self))
    throw DomainError("standalone protocol runs need every node to participate");
}

class CoreProcess final : public Process {
 public:
  CoreProcess(std::unique_ptr<AgreementCore> core, NodeSet audience, bool exchange, NodeId self)
      : core_(std::move(core)), audience_(std::move(audience)), exchange_(exchange), self_(self) {}

  void send(Round r, Outbox& out) override {
    if (r <= core_->rounds()) {
      core_->send(r, out);
    } else if (exchange_ && r == core_->rounds() + 1) {
      out.broadcast(audience_, Payload{ProtocolTag::Decision, 0, static_cast<std::uint32_t>(r),
                                       static_cast<std::uint8_t>(*core_->output())});
    }
  }

  void receive(Round r, std::span<const Message> inbox) override {
    if (r <= core_->rounds()) {
      core_->receive(r, inbox);
      if (!exchange_ && r == core_->rounds()) decision_ = core_->output();
    } else if (exchange_ && r == core_->rounds() + 1) {
      decision_ = core_->output();
    }
  }

  std::optional<Bit> decision() const override { return decision_; }

 private:
  std::unique_ptr<AgreementCore> core_;
  NodeSet audience_;
  bool exchange_;
  NodeId self_;
  std::optional<Bit> decision_;
};

class BroadcastProcess final : public Process {
 public:
  BroadcastProcess(const NodeContext& ctx, NodeId sender, Bit value, NodeSet participants, int t)
      : signer_(ctx.signer), participants_(std::move(participants)), t_(t), sender_(sender),
        inst_(ctx.self, sender, &participants_, t, &signer_,
              ctx.self == sender ? std::optional<Bit>(value) : std::nullopt) {
    if (!signer_.available()) throw DomainError("Dolev-Strong needs authenticated channels");
  }

  void send(Round r, Outbox& out) override {
    if (r <= t_ + 1) inst_.send(r, out);
  }

  void receive(Round r, std::span<const Message> inbox) override {
    if (r > t_ + 1) return;
    for (const auto& msg : inbox) {
      if (msg.payload.tag != ProtocolTag::DolevStrong || msg.payload.step != static_cast<std::uint32_t>(r)) continue;
      if (msg.payload.instance != static_cast<std::uint32_t>(sender_.value)) continue;
      if (!participants_.contains(msg.sender)) continue;
      inst_.accept(r, msg);
    }
    if (r == t_ + 1) decision_ = inst_.output();
  }

  std::optional<Bit> decision() const override { return decision_; }

 private:
  Signer signer_;
  NodeSet participants_;
  int t_;
  NodeId sender_;
  DolevStrongInstance inst_;
  std::optional<Bit> decision_;
};

}  // namespace

std::unique_ptr<Process> make_phase_king_process(const NodeContext& ctx, Bit input, const NodeSet& participants,
                                                 int t) {
  require_full(ctx, participants);
  return std::make_unique<CoreProcess>(std::make_unique<PhaseKingCore>(ctx.self, participants, t, input), participants,
                                       false, ctx.self);
}

std::unique_ptr<Process> make_dolev_strong_broadcast_process(const NodeContext& ctx, NodeId sender, Bit value,
                                                             const NodeSet& participants, int t) {
  require_full(ctx, participants);
  if (t >= static_cast<int>(participants.size())) throw DomainError("Dolev-Strong needs t < m");
  return std::make_unique<BroadcastProcess>(ctx, sender, value, participants, t);
}

std::unique_ptr<Process> make_dolev_strong_ba_process(const NodeContext& ctx, Bit input, const NodeSet& participants,
                                                      int t) {
  require_full(ctx, participants);
  return std::make_unique<CoreProcess>(
      std::make_unique<DolevStrongBaCore>(ctx.self, participants, t, input, ctx.signer), participants, true, ctx.self);
}

ProtocolFactory phase_king_factory(NodeSet participants, int t) {
  return [participants = std::move(participants), t](const NodeContext& ctx, Bit input, const NodeSet&) {
    return make_phase_king_process(ctx, input, participants, t);
  };
}

ProtocolFactory dolev_strong_ba_factory(NodeSet participants, int t) {
  return [participants = std::move(participants), t](const NodeContext& ctx, Bit input, const NodeSet&) {
    return make_dolev_strong_ba_process(ctx, input, participants, t);
  };
}

ProtocolFactory dolev_strong_broadcast_factory(NodeId sender, NodeSet participants, int t) {
  return [sender, participants = std::move(participants), t](const NodeContext& ctx, Bit input, const NodeSet&) {
    return make_dolev_strong_broadcast_process(ctx, sender, input, participants, t);
  };
}

}  // namespace bapred
