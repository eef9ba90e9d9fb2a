#include "bapred/predba.hpp"

namespace bapred {

Rational active_set_threshold(ChannelMode mode, const Rational& alpha, int n) {
  Rational factor = mode == ChannelMode::NonAuth ? Rational(3, 2) : Rational(2);
  return factor * (Rational(1) - alpha) * Rational(n) - Rational(1);
}

ActiveSet build_active_set(const NodeSet& prediction, const TrustParam& alpha, int n) {
  if (!prediction.subset_of_range(n)) throw DomainError("prediction names a node outside 1..n");
  ActiveSet a;
  a.min_size = active_set_threshold(alpha.mode(), alpha.value(), n);
  a.members = prediction;
  int y = 1;
  while (Rational(static_cast<std::int64_t>(a.members.size())) < a.min_size && y <= n) {
    a.members.insert(NodeId{y});
    ++y;
  }
  int size = static_cast<int>(a.members.size());
  a.fault_param = alpha.mode() == ChannelMode::NonAuth ? (size + 2) / 3 : (size + 1) / 2;
  return a;
}

int wrapper_decision_round(ChannelMode mode, const ActiveSet& active) {
  if (mode == ChannelMode::NonAuth) return phase_king_rounds(active.fault_param) + 1;
  return dolev_strong_ba_rounds(active.fault_param);
}

int passive_threshold(const ActiveSet& active) {
  return static_cast<int>(active.members.size()) - active.fault_param + 1;
}

namespace {

class PredBaProcess final : public Process {
 public:
  PredBaProcess(const NodeContext& ctx, Bit input, const NodeSet& prediction, const TrustParam& alpha)
      : self_(ctx.self), n_(ctx.n), input_(input), active_(build_active_set(prediction, alpha, ctx.n)),
        decision_round_(wrapper_decision_round(alpha.mode(), active_)) {
    if (ctx.mode != alpha.mode()) throw DomainError("channel mode does not match the trust parameter");
    if (active_.members.contains(self_)) {
      if (alpha.mode() == ChannelMode::NonAuth) {
        core_ = std::make_unique<PhaseKingCore>(self_, active_.members, active_.fault_param, input);
      } else {
        core_ = std::make_unique<DolevStrongBaCore>(self_, active_.members, active_.fault_param, input, ctx.signer);
      }
    }
  }

  void send(Round r, Outbox& out) override {
    if (!core_) return;
    if (r < decision_round_) {
      if (r <= core_->rounds()) core_->send(r, out);
    } else if (r == decision_round_) {
      out.broadcast(NodeSet::range(1, n_), Payload{ProtocolTag::Decision, 0, static_cast<std::uint32_t>(r),
                                                   static_cast<std::uint8_t>(*core_->output())});
    }
  }

  void receive(Round r, std::span<const Message> inbox) override {
    if (r < decision_round_) {
      if (core_ && r <= core_->rounds()) core_->receive(r, inbox);
      return;
    }
    if (r != decision_round_) return;
    if (core_) {
      decision_ = core_->output();
      return;
    }
    std::array<int, 2> votes{0, 0};
    NodeSet seen;
    for (const auto& msg : inbox) {
      if (msg.payload.tag != ProtocolTag::Decision || msg.payload.step != static_cast<std::uint32_t>(r)) continue;
      if (!active_.members.contains(msg.sender) || msg.payload.value > 1) continue;
      if (!seen.insert(msg.sender)) continue;
      ++votes[msg.payload.value];
    }
    int need = passive_threshold(active_);
    decision_ = input_;
    for (int b = 0; b < 2; ++b) {
      if (votes[b] >= need) decision_ = bit_from_int(b);
    }
  }

  std::optional<Bit> decision() const override { return decision_; }

 private:
  NodeId self_;
  int n_;
  Bit input_;
  ActiveSet active_;
  int decision_round_;
  std::unique_ptr<AgreementCore> core_;
  std::optional<Bit> decision_;
};

}  // namespace

std::unique_ptr<Process> make_pred_ba_process(const NodeContext& ctx, Bit input, const NodeSet& prediction,
                                              const TrustParam& alpha) {
  return std::make_unique<PredBaProcess>(ctx, input, prediction, alpha);
}

ProtocolFactory pred_ba_factory(const TrustParam& alpha) {
  return [alpha](const NodeContext& ctx, Bit input, const NodeSet& prediction) {
    return make_pred_ba_process(ctx, input, prediction, alpha);
  };
}

}  // namespace bapred
