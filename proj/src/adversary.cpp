#include "bapred/adversary.hpp"

#include <algorithm>
#include <charconv>

namespace bapred {

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  // Modulo keeps the stream identical across standard libraries.
  return bound == 0 ? 0 : rng() % bound;
}

std::string AdversarySpec::name() const {
  switch (kind) {
    case AdversaryKind::Silent: return "silent";
    case AdversaryKind::CrashAfter: return "crash_after(" + std::to_string(crash_round) + ")";
    case AdversaryKind::RandomNoise: return "random_noise";
    case AdversaryKind::SplitBrain: return "split_brain";
    case AdversaryKind::ReplayHonest: return "replay_honest(" + std::to_string(to_int(spoof_input)) + ")";
    case AdversaryKind::Forge: return "forge";
    case AdversaryKind::LateChain: return "late_chain";
    case AdversaryKind::Personas: return "personas";
  }
  return "unknown";
}

namespace {

std::optional<int> call_arg(std::string_view name, std::string_view fn) {
  if (name.size() < fn.size() + 2 || name.substr(0, fn.size()) != fn || name[fn.size()] != '(' || name.back() != ')')
    return std::nullopt;
  auto inner = name.substr(fn.size() + 1, name.size() - fn.size() - 2);
  int v = 0;
  auto [ptr, ec] = std::from_chars(inner.data(), inner.data() + inner.size(), v);
  if (ec != std::errc() || ptr != inner.data() + inner.size()) throw DomainError("bad argument in '" + std::string(name) + "'");
  return v;
}

}  // namespace

AdversarySpec parse_adversary(std::string_view name) {
  AdversarySpec s;
  if (name == "silent") return s;
  if (name == "random_noise") { s.kind = AdversaryKind::RandomNoise; return s; }
  if (name == "split_brain") { s.kind = AdversaryKind::SplitBrain; return s; }
  if (name == "forge") { s.kind = AdversaryKind::Forge; return s; }
  if (name == "late_chain") { s.kind = AdversaryKind::LateChain; return s; }
  if (name == "crash_after") { s.kind = AdversaryKind::CrashAfter; return s; }
  if (auto r = call_arg(name, "crash_after")) {
    if (*r < 0) throw DomainError("crash round must be non-negative");
    s.kind = AdversaryKind::CrashAfter;
    s.crash_round = *r;
    return s;
  }
  if (auto b = call_arg(name, "replay_honest")) {
    s.kind = AdversaryKind::ReplayHonest;
    s.spoof_input = bit_from_int(*b);
    return s;
  }
  throw DomainError("unknown adversary '" + std::string(name) + "'");
}

std::vector<AdversarySpec> adversary_library(ChannelMode mode) {
  std::vector<AdversarySpec> lib;
  for (auto name : {"silent", "crash_after(2)", "random_noise", "split_brain", "replay_honest(0)", "replay_honest(1)",
                    "forge"}) {
    lib.push_back(parse_adversary(name));
  }
  if (mode == ChannelMode::Auth) lib.push_back(parse_adversary("late_chain"));
  return lib;
}

namespace {

class SilentAdversary final : public Adversary {
 public:
  std::string name() const override { return "silent"; }
  void setup(const AdversaryContext&) override {}
  void act(Round, std::span<const Message>, AdversaryOutbox&) override {}
  void observe(Round, std::span<const Message>) override {}
};

/// Runs persona processes for faulty nodes and routes their traffic. A
/// persona sees every honest message addressed to its node plus messages of
/// other personas with the same label (or of any label when the receiving node
/// has no persona with that label).
class PersonaAdversary : public Adversary {
 public:
  PersonaAdversary(std::string name, std::vector<PersonaLabel> labels, std::uint64_t seed)
      : name_(std::move(name)), labels_(std::move(labels)), rng_(seed) {}

  std::string name() const override { return name_; }

  void setup(const AdversaryContext& ctx) override {
    ctx_ = ctx;
    faulty_ = ctx.world->config.faulty;
    is_faulty_.assign(static_cast<std::size_t>(ctx.world->config.n) + 1, 0);
    for (auto id : faulty_) is_faulty_[static_cast<std::size_t>(id.value)] = 1;
    for (std::size_t l = 0; l < labels_.size(); ++l) {
      for (auto node : labels_[l].members) {
        if (!faulty_.contains(node)) throw DomainError("persona assigned to honest node " + std::to_string(node.value));
        const NodeSet& pred = labels_[l].prediction ? *labels_[l].prediction : ctx.world->predictions.of(node);
        personas_.push_back(Persona{node, static_cast<int>(l), ctx.make_persona(node, labels_[l].input, pred), {}});
        if (ctx.record_personas) {
          logs_.push_back(PersonaLog{node, labels_[l].input, pred, labels_[l].audience, Transcript{node, false, {}}});
        }
      }
    }
    on_setup();
  }

  void act(Round r, std::span<const Message>, AdversaryOutbox& out) override {
    std::vector<Message> buf;
    for (std::size_t i = 0; i < personas_.size(); ++i) {
      auto& p = personas_[i];
      buf.clear();
      Outbox ob(p.node, r, buf);
      p.proc->send(r, ob);
      if (!logs_.empty()) logs_[i].transcript.rounds.push_back(RoundLog{r, buf, {}});
      const NodeSet& audience = labels_[static_cast<std::size_t>(p.label)].audience;
      for (auto& m : buf) {
        if (is_faulty(m.receiver)) {
          route_internal(p.label, m);
        } else if (audience.contains(m.receiver)) {
          emit(r, p, m, out);
        }
      }
    }
    extra(r, out);
  }

  void observe(Round r, std::span<const Message> delivered) override {
    by_receiver_.resize(is_faulty_.size());
    for (auto& b : by_receiver_) b.clear();
    for (const auto& m : delivered) {
      if (!is_faulty(m.sender)) by_receiver_[static_cast<std::size_t>(m.receiver.value)].push_back(&m);
    }
    std::vector<Message> inbox;
    for (std::size_t i = 0; i < personas_.size(); ++i) {
      auto& p = personas_[i];
      inbox.clear();
      for (const Message* m : by_receiver_[static_cast<std::size_t>(p.node.value)]) inbox.push_back(*m);
      inbox.insert(inbox.end(), std::make_move_iterator(p.internal.begin()), std::make_move_iterator(p.internal.end()));
      p.internal.clear();
      std::stable_sort(inbox.begin(), inbox.end(), [](const Message& a, const Message& b) { return a.sender < b.sender; });
      p.proc->receive(r, inbox);
      if (!logs_.empty()) logs_[i].transcript.rounds.back().received = inbox;
    }
  }

  std::vector<PersonaLog> persona_logs() const override { return logs_; }

 protected:
  struct Persona {
    NodeId node;
    int label;
    std::unique_ptr<Process> proc;
    std::vector<Message> internal;
  };

  virtual void on_setup() {}
  virtual void emit(Round, const Persona&, const Message& m, AdversaryOutbox& out) { out.send(m); }
  virtual void extra(Round, AdversaryOutbox&) {}

  void route_internal(int label, const Message& m) {
    bool same_label = false;
    for (auto& q : personas_) {
      if (q.node == m.receiver && q.label == label) {
        q.internal.push_back(m);
        same_label = true;
      }
    }
    if (same_label) return;
    for (auto& q : personas_) {
      if (q.node == m.receiver) q.internal.push_back(m);
    }
  }

  std::string name_;
  std::vector<PersonaLabel> labels_;
  std::mt19937_64 rng_;
  AdversaryContext ctx_;
  bool is_faulty(NodeId id) const {
    auto i = static_cast<std::size_t>(id.value);
    return i < is_faulty_.size() && is_faulty_[i] != 0;
  }

  NodeSet faulty_;
  std::vector<char> is_faulty_;
  std::vector<std::vector<const Message*>> by_receiver_;
  std::vector<Persona> personas_;
  std::vector<PersonaLog> logs_;
};

class CrashAdversary final : public PersonaAdversary {
 public:
  CrashAdversary(std::vector<PersonaLabel> labels, int crash_round, std::uint64_t seed)
      : PersonaAdversary("crash_after(" + std::to_string(crash_round) + ")", std::move(labels), seed),
        crash_round_(crash_round) {}

 protected:
  void emit(Round r, const Persona&, const Message& m, AdversaryOutbox& out) override {
    if (r <= crash_round_) out.send(m);
  }

 private:
  int crash_round_;
};

/// Persona traffic with the value byte replaced at random per message.
class NoiseAdversary final : public PersonaAdversary {
 public:
  NoiseAdversary(std::vector<PersonaLabel> labels, ChannelMode mode, std::uint64_t seed)
      : PersonaAdversary("random_noise", std::move(labels), seed), mode_(mode) {}

 protected:
  void emit(Round, const Persona& p, const Message& m, AdversaryOutbox& out) override {
    Message copy = m;
    copy.payload.value = static_cast<std::uint8_t>(uniform_below(rng_, 3));
    if (mode_ == ChannelMode::Auth) {
      Token t = ctx_.ledger->mint(Principal::Adversary, p.node, p.node, copy.payload.signing_digest());
      copy.chain = make_chain({Signature{p.node, t}});
    }
    out.send(copy);
  }

 private:
  ChannelMode mode_;
};

/// Lies about every value. With signatures it also keeps asking the ledger
/// for honest signatures and ships chains whose tokens do not match.
class ForgeAdversary final : public PersonaAdversary {
 public:
  ForgeAdversary(std::vector<PersonaLabel> labels, ChannelMode mode, std::uint64_t seed)
      : PersonaAdversary("forge", std::move(labels), seed), mode_(mode) {}

 protected:
  void emit(Round, const Persona& p, const Message& m, AdversaryOutbox& out) override {
    Message copy = m;
    if (copy.payload.value <= 1) copy.payload.value ^= 1;
    if (mode_ == ChannelMode::Auth && copy.payload.tag == ProtocolTag::DolevStrong) {
      std::vector<Signature> fake;
      NodeId origin{static_cast<std::int32_t>(copy.payload.instance)};
      fake.push_back(Signature{origin, rng_()});
      for (const auto& s : m.signatures()) {
        if (s.signer != origin) fake.push_back(Signature{s.signer, s.token ^ rng_()});
      }
      Token own = ctx_.ledger->mint(Principal::Adversary, p.node, p.node, copy.payload.signing_digest());
      fake.push_back(Signature{p.node, own});
      copy.chain = make_chain(std::move(fake));
    }
    out.send(copy);
  }

  void extra(Round r, AdversaryOutbox&) override {
    if (mode_ != ChannelMode::Auth || faulty_.empty()) return;
    NodeSet honest = ctx_.world->config.honest();
    if (honest.empty()) return;
    NodeId victim = honest.ids()[static_cast<std::size_t>(uniform_below(rng_, honest.size()))];
    Payload p{ProtocolTag::DolevStrong, static_cast<std::uint32_t>(victim.value), 0, static_cast<std::uint8_t>(r % 2)};
    try {
      ctx_.ledger->mint(Principal::Adversary, faulty_.ids().front(), victim, p.signing_digest());
    } catch (const ForgeryRejected&) {
      // expected: the ledger refuses and counts the attempt
    }
  }

 private:
  ChannelMode mode_;
};

/// Honest-looking personas with input 0, plus a value-1 chain for each faulty
/// sender signed by every faulty node, revealed to one honest node as late as
/// the chain length allows.
class LateChainAdversary final : public PersonaAdversary {
 public:
  LateChainAdversary(std::vector<PersonaLabel> labels, std::uint64_t seed)
      : PersonaAdversary("late_chain", std::move(labels), seed) {}

 protected:
  void extra(Round r, AdversaryOutbox& out) override {
    int k = static_cast<int>(faulty_.size());
    if (k == 0 || r != k) return;
    NodeSet honest = ctx_.world->config.honest();
    if (honest.empty()) return;
    NodeId target = honest.ids().front();
    for (auto origin : faulty_) {
      Payload p{ProtocolTag::DolevStrong, static_cast<std::uint32_t>(origin.value), static_cast<std::uint32_t>(r), 1};
      std::vector<Signature> sigs;
      auto sign = [&](NodeId who) {
        sigs.push_back(Signature{who, ctx_.ledger->mint(Principal::Adversary, who, who, p.signing_digest())});
      };
      sign(origin);
      for (auto other : faulty_) {
        if (other != origin) sign(other);
      }
      out.send(origin, target, p, make_chain(std::move(sigs)));
    }
  }
};

std::vector<Bit> random_bits(std::size_t count, std::mt19937_64& rng) {
  std::vector<Bit> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(bit_from_int(static_cast<int>(rng() & 1U)));
  return out;
}

/// One single-member label per faulty node, seeded inputs, audience = H.
std::vector<PersonaLabel> honest_like(const NodeSet& faulty, const NodeSet& honest, std::mt19937_64& rng,
                                      std::optional<Bit> fixed = {}) {
  std::vector<PersonaLabel> labels;
  auto bits = random_bits(faulty.size(), rng);
  if (fixed || faulty.empty()) {
    labels.push_back(PersonaLabel{faulty, fixed.value_or(Bit::Zero), honest, std::nullopt});
    return labels;
  }
  // Group by seeded input; both groups share traffic through the fallback route.
  NodeSet zeros, ones;
  for (std::size_t i = 0; i < faulty.size(); ++i) (bits[i] == Bit::Zero ? zeros : ones).insert(faulty.ids()[i]);
  if (!zeros.empty()) labels.push_back(PersonaLabel{zeros, Bit::Zero, honest, std::nullopt});
  if (!ones.empty()) labels.push_back(PersonaLabel{ones, Bit::One, honest, std::nullopt});
  return labels;
}

class DeferredAdversary final : public Adversary {
 public:
  DeferredAdversary(AdversarySpec spec, ChannelMode mode, std::uint64_t seed)
      : spec_(std::move(spec)), mode_(mode), seed_(seed) {}

  std::string name() const override { return spec_.name(); }

  void setup(const AdversaryContext& ctx) override {
    const NodeSet& faulty = ctx.world->config.faulty;
    NodeSet honest = ctx.world->config.honest();
    std::mt19937_64 rng(seed_ ^ 0xad7e5a11ULL);
    std::uint64_t inner_seed = rng();
    switch (spec_.kind) {
      case AdversaryKind::Silent: inner_ = std::make_unique<SilentAdversary>(); break;
      case AdversaryKind::CrashAfter:
        inner_ = std::make_unique<CrashAdversary>(honest_like(faulty, honest, rng), spec_.crash_round, inner_seed);
        break;
      case AdversaryKind::RandomNoise:
        inner_ = std::make_unique<NoiseAdversary>(honest_like(faulty, honest, rng), mode_, inner_seed);
        break;
      case AdversaryKind::Forge:
        inner_ = std::make_unique<ForgeAdversary>(honest_like(faulty, honest, rng), mode_, inner_seed);
        break;
      case AdversaryKind::LateChain:
        inner_ = std::make_unique<LateChainAdversary>(honest_like(faulty, honest, rng, Bit::Zero), inner_seed);
        break;
      case AdversaryKind::ReplayHonest: {
        std::vector<PersonaLabel> labels{PersonaLabel{faulty, spec_.spoof_input, honest, spec_.spoof_prediction}};
        inner_ = std::make_unique<PersonaAdversary>(spec_.name(), std::move(labels), inner_seed);
        break;
      }
      case AdversaryKind::SplitBrain: {
        NodeSet a, b;
        if (spec_.part_a && spec_.part_b) {
          a = *spec_.part_a;
          b = *spec_.part_b;
        } else {
          std::size_t half = (honest.size() + 1) / 2;
          for (std::size_t i = 0; i < honest.size(); ++i) (i < half ? a : b).insert(honest.ids()[i]);
        }
        if (!a.intersect(b).empty()) throw DomainError("split_brain partitions overlap");
        if (!a.unite(b).minus(honest).empty()) throw DomainError("split_brain partitions must be honest");
        std::vector<PersonaLabel> labels{PersonaLabel{faulty, spec_.value_a, a, std::nullopt},
                                         PersonaLabel{faulty, spec_.value_b, b, std::nullopt}};
        inner_ = std::make_unique<PersonaAdversary>("split_brain", std::move(labels), inner_seed);
        break;
      }
      case AdversaryKind::Personas: {
        for (const auto& l : spec_.labels) {
          if (!l.audience.minus(honest).empty()) throw DomainError("persona audience must be honest");
        }
        inner_ = std::make_unique<PersonaAdversary>("personas", spec_.labels, inner_seed);
        break;
      }
    }
    inner_->setup(ctx);
  }

  void act(Round r, std::span<const Message> honest_outgoing, AdversaryOutbox& out) override {
    inner_->act(r, honest_outgoing, out);
  }
  void observe(Round r, std::span<const Message> delivered) override { inner_->observe(r, delivered); }
  std::vector<PersonaLog> persona_logs() const override { return inner_->persona_logs(); }

 private:
  AdversarySpec spec_;
  ChannelMode mode_;
  std::uint64_t seed_;
  std::unique_ptr<Adversary> inner_;
};

}  // namespace

std::unique_ptr<Adversary> make_adversary(const AdversarySpec& spec, ChannelMode mode, std::uint64_t seed) {
  if (spec.kind == AdversaryKind::LateChain && mode != ChannelMode::Auth)
    throw DomainError("late_chain needs authenticated channels");
  return std::make_unique<DeferredAdversary>(spec, mode, seed);
}

}  // namespace bapred
