#pragma once

#include "bapred/protocols.hpp"

namespace bapred {

/// Prediction-derived node subset running the inner agreement protocol.
struct ActiveSet {
  NodeSet members;
  int fault_param = 0;
  Rational min_size;
};

/// Minimum active-set size: 3/2(1-alpha)n - 1 (non-auth) or 2(1-alpha)n - 1 (auth).
Rational active_set_threshold(ChannelMode mode, const Rational& alpha, int n);

/// Starts from P and pads with the lowest ids not yet present until the
/// threshold is met. t = ceil(|L|/3) (non-auth) or ceil(|L|/2) (auth).
ActiveSet build_active_set(const NodeSet& prediction, const TrustParam& alpha, int n);

/// Round in which every honest node decides.
int wrapper_decision_round(ChannelMode mode, const ActiveSet& active);

/// Votes a passive node needs before adopting a broadcast decision.
int passive_threshold(const ActiveSet& active);

/// Wrapper process: run the inner protocol inside L, then active nodes broadcast
/// their output to all n nodes in one extra round and passive nodes adopt a
/// value reported by at least |L| - t + 1 members of L (else keep their input).
/// Each node builds L from its own prediction.
std::unique_ptr<Process> make_pred_ba_process(const NodeContext& ctx, Bit input, const NodeSet& prediction,
                                              const TrustParam& alpha);

/// Factory for pred_ba (non-auth) or auth_pred_ba (auth), chosen by alpha's mode.
ProtocolFactory pred_ba_factory(const TrustParam& alpha);

}  // namespace bapred
