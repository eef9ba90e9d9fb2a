#include "bapred/adversary.hpp"
#include "bapred/simnet.hpp"

#include <gtest/gtest.h>

using namespace bapred;

namespace {

/// One round: broadcast the input, then decide it.
class EchoProcess final : public Process {
 public:
  EchoProcess(NodeId self, int n, Bit input) : self_(self), n_(n), input_(input) {}
  void send(Round r, Outbox& out) override {
    if (r == 1) out.broadcast(NodeSet::range(1, n_), Payload{ProtocolTag::Echo, 0, 1, static_cast<std::uint8_t>(input_)});
  }
  void receive(Round r, std::span<const Message>) override {
    if (r == 1) decided_ = input_;
  }
  std::optional<Bit> decision() const override { return decided_; }

 private:
  NodeId self_;
  int n_;
  Bit input_;
  std::optional<Bit> decided_;
};

ProtocolFactory echo_factory() {
  return [](const NodeContext& ctx, Bit input, const NodeSet&) {
    return std::make_unique<EchoProcess>(ctx.self, ctx.n, input);
  };
}

World world_of(int n, NodeSet faulty, Bit input, ChannelMode mode = ChannelMode::NonAuth) {
  World w;
  w.mode = mode;
  w.config.n = n;
  w.config.faulty = std::move(faulty);
  for (auto id : w.config.honest()) w.config.inputs[id] = input;
  w.predictions.per_node.assign(static_cast<std::size_t>(n), NodeSet::range(1, n));
  w.seed = 11;
  return w;
}

}  // namespace

TEST(PayloadTest, EncodesTwelveLittleEndianBytes) {
  Payload p{ProtocolTag::DolevStrong, 0x01020304u, 7, 1};
  auto bytes = p.encode();
  ASSERT_EQ(bytes.size(), 12u);
  EXPECT_EQ(bytes[0], 10);
  EXPECT_EQ(bytes[1], 0);
  EXPECT_EQ(bytes[2], static_cast<std::uint8_t>(ProtocolTag::DolevStrong));
  EXPECT_EQ(bytes[3], 0x04);
  EXPECT_EQ(bytes[6], 0x01);
  EXPECT_EQ(bytes[7], 7);
  EXPECT_EQ(bytes[11], 1);
}

TEST(PayloadTest, DigestIgnoresStepOnly) {
  Payload a{ProtocolTag::DolevStrong, 3, 1, 1};
  Payload b = a;
  b.step = 4;
  EXPECT_EQ(a.signing_digest(), b.signing_digest());
  b.value = 0;
  EXPECT_NE(a.signing_digest(), b.signing_digest());
  Payload c = a;
  c.instance = 4;
  EXPECT_NE(a.signing_digest(), c.signing_digest());
}

TEST(LedgerTest, HonestTokenVerifiesForItsDigestOnly) {
  SignatureLedger ledger(5, NodeSet{5});
  Token t = ledger.mint(Principal::Honest, NodeId{2}, NodeId{2}, 42);
  EXPECT_TRUE(ledger.verify(t, NodeId{2}, 42));
  EXPECT_FALSE(ledger.verify(t, NodeId{2}, 43));
  EXPECT_FALSE(ledger.verify(t, NodeId{3}, 42));
  ledger.set_round(9);
  EXPECT_TRUE(ledger.verify(t, NodeId{2}, 42));  // transferable, still valid later
}

TEST(LedgerTest, AdversaryOwnsFaultyKeysOnly) {
  SignatureLedger ledger(5, NodeSet{5});
  Token t = ledger.mint(Principal::Adversary, NodeId{5}, NodeId{5}, 1);
  EXPECT_TRUE(ledger.verify(t, NodeId{5}, 1));
  EXPECT_THROW(ledger.mint(Principal::Adversary, NodeId{5}, NodeId{1}, 1), ForgeryRejected);
  EXPECT_EQ(ledger.rejected_forgeries(), 1u);
  EXPECT_THROW(ledger.mint(Principal::Honest, NodeId{1}, NodeId{2}, 1), ForgeryRejected);
  EXPECT_THROW(ledger.mint(Principal::Honest, NodeId{5}, NodeId{5}, 1), ForgeryRejected);
  EXPECT_TRUE(ledger.audit());
}

TEST(LedgerTest, GuessedTokensDoNotVerify) {
  SignatureLedger ledger(5, NodeSet{});
  Token t = ledger.mint(Principal::Honest, NodeId{1}, NodeId{1}, 7);
  for (Token guess : {t + 1, t ^ 1u, Token{0}, Token{7}}) EXPECT_FALSE(ledger.verify(guess, NodeId{1}, 7));
}

TEST(LedgerTest, TokenMintedLaterIsNotYetValid) {
  SignatureLedger ledger(1, NodeSet{});
  ledger.set_round(4);
  Token t = ledger.mint(Principal::Honest, NodeId{1}, NodeId{1}, 3);
  ledger.set_round(3);
  EXPECT_FALSE(ledger.verify(t, NodeId{1}, 3));
}

TEST(OutboxTest, BroadcastSkipsSelfAndAdversaryNeedsFaultySender) {
  std::vector<Message> sink;
  Outbox out(NodeId{2}, 1, sink);
  out.broadcast(NodeSet::range(1, 4), Payload{});
  EXPECT_EQ(sink.size(), 3u);
  NodeSet faulty{4};
  AdversaryOutbox adv(faulty, 1, sink);
  EXPECT_THROW(adv.send(NodeId{1}, NodeId{2}, Payload{}), ForgeryRejected);
  adv.send(NodeId{4}, NodeId{2}, Payload{});
  EXPECT_EQ(sink.size(), 4u);
}

TEST(SimulationTest, AllHonestEchoRecordsExactlyProtocolMessages) {
  World w = world_of(3, {}, Bit::One);
  auto adv = make_adversary(AdversarySpec{}, w.mode, 0);
  RunOptions opts;
  opts.record_transcripts = true;
  auto r = run_simulation(w, echo_factory(), *adv, opts);
  EXPECT_TRUE(r.outcome.agreement && r.outcome.validity && r.outcome.termination);
  EXPECT_EQ(r.outcome.decided_round, 1);
  ASSERT_EQ(r.transcripts.size(), 3u);
  for (const auto& t : r.transcripts) {
    ASSERT_EQ(t.rounds.size(), 1u);
    EXPECT_EQ(t.rounds[0].sent.size(), 2u);
    EXPECT_EQ(t.rounds[0].received.size(), 2u);
  }
}

TEST(SimulationTest, SilentFaultyNodeSendsNothing) {
  World w = world_of(3, NodeSet{3}, Bit::Zero);
  auto adv = make_adversary(AdversarySpec{}, w.mode, 0);
  RunOptions opts;
  opts.record_transcripts = true;
  auto r = run_simulation(w, echo_factory(), *adv, opts);
  for (const auto& t : r.transcripts) {
    if (!t.honest) continue;
    for (const auto& m : t.rounds[0].received) EXPECT_NE(m.sender, NodeId{3});
    EXPECT_EQ(t.rounds[0].received.size(), 1u);
  }
  EXPECT_EQ(r.outcome.decisions.size(), 2u);
}

TEST(SimulationTest, RepeatedRunIsIdentical) {
  World w = world_of(5, NodeSet{4, 5}, Bit::One);
  RunOptions opts;
  opts.record_transcripts = true;
  auto a1 = make_adversary(parse_adversary("random_noise"), w.mode, 3);
  auto a2 = make_adversary(parse_adversary("random_noise"), w.mode, 3);
  auto r1 = run_simulation(w, echo_factory(), *a1, opts);
  auto r2 = run_simulation(w, echo_factory(), *a2, opts);
  ASSERT_EQ(r1.transcripts.size(), r2.transcripts.size());
  for (std::size_t i = 0; i < r1.transcripts.size(); ++i) {
    ASSERT_EQ(r1.transcripts[i].rounds.size(), r2.transcripts[i].rounds.size());
    for (std::size_t k = 0; k < r1.transcripts[i].rounds.size(); ++k) {
      EXPECT_EQ(r1.transcripts[i].rounds[k].sent, r2.transcripts[i].rounds[k].sent);
      EXPECT_EQ(r1.transcripts[i].rounds[k].received, r2.transcripts[i].rounds[k].received);
    }
  }
}

TEST(SimulationTest, NonTerminatingProtocolHitsRoundBudget) {
  World w = world_of(2, {}, Bit::Zero);
  ProtocolFactory never = [](const NodeContext&, Bit, const NodeSet&) -> std::unique_ptr<Process> {
    struct Idle final : Process {
      void send(Round, Outbox&) override {}
      void receive(Round, std::span<const Message>) override {}
      std::optional<Bit> decision() const override { return std::nullopt; }
    };
    return std::make_unique<Idle>();
  };
  auto adv = make_adversary(AdversarySpec{}, w.mode, 0);
  EXPECT_THROW(run_simulation(w, never, *adv), RoundBudgetExceeded);
}

TEST(OutcomeTest, EvaluatesAgreementAndValidity) {
  Configuration c;
  c.n = 3;
  c.inputs = {{NodeId{1}, Bit::Zero}, {NodeId{2}, Bit::One}, {NodeId{3}, Bit::Zero}};
  auto ok = evaluate_decisions(c, {{NodeId{1}, Bit::Zero}, {NodeId{2}, Bit::Zero}, {NodeId{3}, Bit::Zero}}, 4);
  EXPECT_TRUE(ok.agreement && ok.validity && ok.termination);
  auto split = evaluate_decisions(c, {{NodeId{1}, Bit::Zero}, {NodeId{2}, Bit::One}, {NodeId{3}, Bit::Zero}}, 4);
  EXPECT_FALSE(split.agreement);
  Configuration zeros = c;
  zeros.inputs[NodeId{2}] = Bit::Zero;
  auto invalid = evaluate_decisions(zeros, {{NodeId{1}, Bit::One}, {NodeId{2}, Bit::One}, {NodeId{3}, Bit::One}}, 4);
  EXPECT_TRUE(invalid.agreement);
  EXPECT_FALSE(invalid.validity);
  auto missing = evaluate_decisions(c, {{NodeId{1}, Bit::Zero}}, 4);
  EXPECT_FALSE(missing.termination);
}
