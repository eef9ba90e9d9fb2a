#include "bapred/harness.hpp"

#include <gtest/gtest.h>

using namespace bapred;

namespace {

const Rational kAlpha08(4, 5);

Scenario wrapper(ChannelMode mode, const Rational& alpha, int n, NodeSet faulty, Bit input, NodeSet prediction,
                 const std::string& adversary, std::uint64_t seed = 1) {
  Configuration c;
  c.n = n;
  c.faulty = std::move(faulty);
  for (auto id : c.honest()) c.inputs[id] = input;
  return make_wrapper_scenario(mode, alpha, c, prediction, parse_adversary(adversary), seed);
}

void expect_ok(const Scenario& s) {
  auto r = run_scenario(s);
  EXPECT_TRUE(r.outcome.termination) << s.label;
  EXPECT_TRUE(r.outcome.agreement) << s.label;
  EXPECT_TRUE(r.outcome.validity) << s.label;
}

}  // namespace

TEST(ActiveSetTest, NonAuthPadsWithLowestIds) {
  TrustParam a(kAlpha08, ChannelMode::NonAuth);
  EXPECT_EQ(active_set_threshold(ChannelMode::NonAuth, kAlpha08, 20), Rational(5));
  auto l = build_active_set(NodeSet{3, 7}, a, 20);
  EXPECT_EQ(l.members, (NodeSet{1, 2, 3, 4, 7}));
  EXPECT_EQ(l.fault_param, 2);
}

TEST(ActiveSetTest, NoPaddingWhenPredictionIsLargeEnough) {
  TrustParam a(kAlpha08, ChannelMode::NonAuth);
  auto l = build_active_set(NodeSet::range(1, 6), a, 20);
  EXPECT_EQ(l.members, NodeSet::range(1, 6));
  EXPECT_EQ(l.fault_param, 2);
}

TEST(ActiveSetTest, AuthEmptyPredictionPadsToThreshold) {
  TrustParam a(Rational(3, 4), ChannelMode::Auth);
  EXPECT_EQ(active_set_threshold(ChannelMode::Auth, Rational(3, 4), 16), Rational(7));
  auto l = build_active_set(NodeSet{}, a, 16);
  EXPECT_EQ(l.members, NodeSet::range(1, 7));
  EXPECT_EQ(l.fault_param, 4);
}

TEST(ActiveSetTest, SizeReachesCeilingOfThresholdForEveryPrediction) {
  // Property: |L| = max(|P|, ceil(threshold)) and P is a subset of L.
  for (auto mode : {ChannelMode::NonAuth, ChannelMode::Auth}) {
    for (auto alpha : {Rational(3, 5), Rational(2, 3), Rational(4, 5), Rational(1)}) {
      TrustParam a(alpha, mode);
      for (int n : {7, 10, 13}) {
        Rational th = active_set_threshold(mode, alpha, n);
        for (int mask = 0; mask < (1 << n); mask += 37) {
          NodeSet p;
          for (int i = 0; i < n; ++i)
            if (mask & (1 << i)) p.insert(NodeId{i + 1});
          auto l = build_active_set(p, a, n);
          std::int64_t want = std::max<std::int64_t>(static_cast<std::int64_t>(p.size()), std::max<std::int64_t>(0, ceil_of(th)));
          EXPECT_EQ(static_cast<std::int64_t>(l.members.size()), want);
          EXPECT_EQ(l.members.intersect(p), p);
        }
      }
    }
  }
}

TEST(ActiveSetTest, DecisionRoundAndPassiveThreshold) {
  TrustParam na(kAlpha08, ChannelMode::NonAuth);
  auto l = build_active_set(NodeSet{3, 7}, na, 20);
  EXPECT_EQ(wrapper_decision_round(ChannelMode::NonAuth, l), 3 * (2 + 1) + 1);
  EXPECT_EQ(passive_threshold(l), 5 - 2 + 1);
  TrustParam au(Rational(3, 4), ChannelMode::Auth);
  auto la = build_active_set(NodeSet{}, au, 16);
  EXPECT_EQ(wrapper_decision_round(ChannelMode::Auth, la), 4 + 2);
  EXPECT_EQ(passive_threshold(la), 7 - 4 + 1);
}

TEST(PredBaTest, FourNodesPerfectPredictionUnanimousZero) {
  auto s = wrapper(ChannelMode::NonAuth, Rational(1, 2), 4, {}, Bit::Zero, NodeSet::range(1, 4), "silent");
  auto r = run_scenario(s);
  ASSERT_TRUE(r.ok());
  for (const auto& [id, b] : r.outcome.decisions) EXPECT_EQ(b, Bit::Zero);
}

TEST(PredBaTest, ConsistencyAtSixteenOfTwentyWithSplitBrain) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    Configuration c = make_configuration(20, 16, static_cast<Placement>(seed % 3), InputPattern::SplitHalf, seed);
    auto s = make_wrapper_scenario(ChannelMode::NonAuth, kAlpha08, c, c.honest(), parse_adversary("split_brain"), seed);
    expect_ok(s);
  }
}

TEST(PredBaTest, RobustnessWithFaultyPrediction) {
  for (const auto& adv : adversary_library(ChannelMode::NonAuth)) {
    Configuration c = make_configuration(20, 1, Placement::Low, InputPattern::SplitHalf, 2);
    expect_ok(make_wrapper_scenario(ChannelMode::NonAuth, kAlpha08, c, c.faulty, adv, 2));
  }
}

TEST(AuthPredBaTest, SixNodesAllHonestUnanimousOne) {
  auto s = wrapper(ChannelMode::Auth, Rational(2, 3), 6, {}, Bit::One, NodeSet::range(1, 6), "silent");
  auto r = run_scenario(s);
  ASSERT_TRUE(r.ok());
  for (const auto& [id, b] : r.outcome.decisions) EXPECT_EQ(b, Bit::One);
}

TEST(AuthPredBaTest, ConsistencyAtTwentyFourOfThirty) {
  for (const auto& adv : adversary_library(ChannelMode::Auth)) {
    Configuration c = make_configuration(30, 24, Placement::Random, InputPattern::Random, 5);
    expect_ok(make_wrapper_scenario(ChannelMode::Auth, kAlpha08, c, c.honest(), adv, 5));
  }
}

TEST(AuthPredBaTest, RobustnessAtFiveOfThirty) {
  for (const auto& adv : adversary_library(ChannelMode::Auth)) {
    for (int k = 0; k < 3; ++k) {
      Configuration c = make_configuration(30, 5, static_cast<Placement>(k), InputPattern::SplitHalf, 8);
      NodeSet p = k == 0 ? c.faulty : (k == 1 ? NodeSet{} : NodeSet::range(1, 30));
      expect_ok(make_wrapper_scenario(ChannelMode::Auth, kAlpha08, c, p, adv, 8));
    }
  }
}

TEST(PredBaTest, PassiveNodesFollowActiveDecision) {
  // L = {1..5}; nodes 6..20 are passive and must adopt the common value.
  auto s = wrapper(ChannelMode::NonAuth, kAlpha08, 20, {}, Bit::One, NodeSet::range(1, 5), "silent");
  s.config.inputs[NodeId{20}] = Bit::Zero;
  auto r = run_scenario(s);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.outcome.decisions.at(NodeId{20}), Bit::One);
}
