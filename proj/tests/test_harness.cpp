#include "bapred/harness.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace bapred;

namespace {

const Rational kAlpha08(4, 5);

ResilienceOptions library_options(ChannelMode mode, int trials, std::uint64_t seed) {
  ResilienceOptions o;
  o.adversaries = adversary_library(mode);
  o.trials = trials;
  o.seed = seed;
  return o;
}

}  // namespace

TEST(SeedTest, DeriveSeedIsStableAndSpreads) {
  EXPECT_EQ(derive_seed(1, 2), derive_seed(1, 2));
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(42, i));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_NE(derive_seed(1, 2), derive_seed(2, 1));
}

TEST(SamplingTest, TwelveTrialsCoverEveryPlacementAndPattern) {
  std::set<std::pair<int, int>> combos;
  for (std::uint64_t i = 0; i < 12; ++i) {
    auto p = trial_plan(7, i);
    combos.insert({static_cast<int>(p.placement), static_cast<int>(p.pattern)});
  }
  EXPECT_EQ(combos.size(), 12u);
}

TEST(SamplingTest, CanonicalPlacements) {
  EXPECT_EQ(place_faulty(10, 3, Placement::High, 1), (NodeSet{8, 9, 10}));
  EXPECT_EQ(place_faulty(10, 3, Placement::Low, 1), (NodeSet{1, 2, 3}));
  auto r = place_faulty(10, 4, Placement::Random, 9);
  EXPECT_EQ(r.size(), 4u);
  EXPECT_EQ(r, place_faulty(10, 4, Placement::Random, 9));
  EXPECT_THROW(place_faulty(3, 4, Placement::High, 0), DomainError);
}

TEST(SamplingTest, InputPatterns) {
  NodeSet h = NodeSet::range(1, 6);
  for (const auto& [id, b] : make_inputs(h, InputPattern::AllOne, 0)) EXPECT_EQ(b, Bit::One);
  auto split = make_inputs(h, InputPattern::SplitHalf, 0);
  int ones = 0;
  for (const auto& [id, b] : split) ones += to_int(b);
  EXPECT_EQ(ones, 3);
  EXPECT_EQ(make_inputs(h, InputPattern::Random, 5), make_inputs(h, InputPattern::Random, 5));
}

TEST(CheckOutcomeTest, Examples) {
  Scenario s;
  s.config.n = 3;
  s.config.inputs = {{NodeId{1}, Bit::Zero}, {NodeId{2}, Bit::One}, {NodeId{3}, Bit::One}};
  Outcome o;
  o.decisions = {{NodeId{1}, Bit::Zero}, {NodeId{2}, Bit::Zero}, {NodeId{3}, Bit::Zero}};
  EXPECT_EQ(check_outcome(s, o), (Verdict{true, true, true}));
  o.decisions[NodeId{2}] = Bit::One;
  EXPECT_FALSE(check_outcome(s, o).agreement);
  s.config.inputs = {{NodeId{1}, Bit::Zero}, {NodeId{2}, Bit::Zero}, {NodeId{3}, Bit::Zero}};
  o.decisions = {{NodeId{1}, Bit::One}, {NodeId{2}, Bit::One}, {NodeId{3}, Bit::One}};
  EXPECT_FALSE(check_outcome(s, o).validity);
}

TEST(MemoTest, SeedOnlyMattersForSeededAdversaries) {
  Configuration c = make_configuration(10, 2, Placement::High, InputPattern::AllOne, 0);
  auto a = make_wrapper_scenario(ChannelMode::NonAuth, kAlpha08, c, c.honest(), parse_adversary("silent"), 1);
  auto b = a;
  b.seed = 2;
  EXPECT_EQ(scenario_key(a), scenario_key(b));
  a.adversary = b.adversary = parse_adversary("random_noise");
  EXPECT_NE(scenario_key(a), scenario_key(b));
  RunMemo memo;
  memo.run(a);
  memo.run(a);
  memo.run(b);
  EXPECT_EQ(memo.runs(), 2u);
  EXPECT_EQ(memo.hits(), 1u);
}

TEST(ResilienceTest, ConsistencyPointIsReached) {
  auto o = library_options(ChannelMode::NonAuth, 4, 3);
  EXPECT_GE(empirical_resilience(ChannelMode::NonAuth, kAlpha08, 10, 0, o), 8);
  EXPECT_GE(empirical_resilience(ChannelMode::NonAuth, Rational(1, 3), 3, 0, o), 1);
}

TEST(ResilienceTest, NonAuthAtErrorFourReachesTheory) {
  auto o = library_options(ChannelMode::NonAuth, 2, 5);
  EXPECT_GE(empirical_resilience(ChannelMode::NonAuth, kAlpha08, 40, 4, o), 28);
}

TEST(SweepTest, SinglePointGridAndCsvLayout) {
  auto o = library_options(ChannelMode::NonAuth, 2, 1);
  auto rows = sweep(ChannelMode::NonAuth, kAlpha08, 10, {0}, o);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].theory_s, 8);
  EXPECT_GE(rows[0].empirical_f, 8);
  std::string csv = sweep_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "mode,alpha,n,eta,theory_s,theory_sbar,sbar_flag,empirical_f,trials,adversary_set_hash");
  auto curve = empirical_curve(rows);
  EXPECT_EQ(curve.kind, CurveKind::Empirical);
  ASSERT_EQ(curve.points.size(), 1u);
}

TEST(SweepTest, SameSeedSameCsv) {
  auto o = library_options(ChannelMode::NonAuth, 2, 77);
  std::vector<int> grid{0, 3, 6, 10};
  EXPECT_EQ(sweep_csv(sweep(ChannelMode::NonAuth, kAlpha08, 10, grid, o)),
            sweep_csv(sweep(ChannelMode::NonAuth, kAlpha08, 10, grid, o)));
}

TEST(SweepTest, AuthTheoryColumnShowsJump) {
  auto o = library_options(ChannelMode::Auth, 1, 1);
  o.adversaries = {parse_adversary("silent")};
  auto rows = sweep(ChannelMode::Auth, kAlpha08, 30, {12, 13}, o);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].theory_s, 18);
  EXPECT_EQ(rows[1].theory_s, 9);
}

TEST(SweepTest, AdversarySetHashDependsOnMembers) {
  auto a = adversary_library(ChannelMode::NonAuth);
  auto b = a;
  b.pop_back();
  EXPECT_EQ(adversary_set_hash(a), adversary_set_hash(adversary_library(ChannelMode::NonAuth)));
  EXPECT_NE(adversary_set_hash(a), adversary_set_hash(b));
}

TEST(SuiteTest, SmallConsistencyAndRobustnessCellsPass) {
  EXPECT_TRUE(consistency_suite(ChannelMode::NonAuth, Rational(3, 5), 10, 3, 1).passed());
  EXPECT_TRUE(robustness_suite(ChannelMode::Auth, Rational(3, 5), 10, 3, 1).passed());
}
