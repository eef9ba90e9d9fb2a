#pragma once

#include "bapred/predba.hpp"

#include <random>

namespace bapred {

/// A group of faulty nodes each running an honest protocol instance with a
/// chosen input, whose messages are shown only to `audience`.
struct PersonaLabel {
  NodeSet members;
  Bit input = Bit::Zero;
  NodeSet audience;
  std::optional<NodeSet> prediction;  // spoofed prediction; the node's own entry when absent

  bool operator==(const PersonaLabel&) const = default;
};

enum class AdversaryKind : std::uint8_t {
  Silent,
  CrashAfter,
  RandomNoise,
  SplitBrain,
  ReplayHonest,
  Forge,
  LateChain,
  Personas,
};

struct AdversarySpec {
  AdversaryKind kind = AdversaryKind::Silent;
  int crash_round = 2;                       // CrashAfter
  Bit spoof_input = Bit::Zero;               // ReplayHonest
  std::optional<NodeSet> spoof_prediction;   // ReplayHonest
  std::optional<NodeSet> part_a, part_b;     // SplitBrain; halves of H when absent
  Bit value_a = Bit::Zero, value_b = Bit::One;
  std::vector<PersonaLabel> labels;          // Personas

  /// Short name, e.g. "crash_after(2)", "replay_honest(1)".
  std::string name() const;

  bool operator==(const AdversarySpec&) const = default;
};

/// Parses the names produced by AdversarySpec::name() for the parameterless
/// kinds plus crash_after(r) and replay_honest(b).
AdversarySpec parse_adversary(std::string_view name);

/// The strategies every suite iterates over.
std::vector<AdversarySpec> adversary_library(ChannelMode mode);

/// Throws DomainError for strategies that cannot run in `mode`.
std::unique_ptr<Adversary> make_adversary(const AdversarySpec& spec, ChannelMode mode, std::uint64_t seed);

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

}  // namespace bapred
