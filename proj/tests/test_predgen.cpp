#include "bapred/harness.hpp"

#include <gtest/gtest.h>

using namespace bapred;

namespace {

Configuration config_of(int n, NodeSet faulty) {
  Configuration c;
  c.n = n;
  c.faulty = std::move(faulty);
  for (auto id : c.honest()) c.inputs[id] = Bit::Zero;
  return c;
}

}  // namespace

TEST(PredgenTest, PerfectPredictionIsHonestSet) {
  auto c = config_of(4, NodeSet{3, 4});
  EXPECT_EQ(perfect(c).members, (NodeSet{1, 2}));
  EXPECT_EQ(compute_error(c, perfect(c)).eta, 0);
  EXPECT_TRUE(perfect(config_of(3, NodeSet{1, 2, 3})).members.empty());
}

TEST(PredgenTest, WithErrorRoundTripsThroughErrorFunction) {
  auto c = config_of(6, NodeSet{5, 6});
  EXPECT_EQ(with_error(c, 0, 0, 1).members, c.honest());
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto p = with_error(c, 1, 2, seed);
    EXPECT_EQ(compute_error(c, p), (ErrorBreakdown{1, 2, 3}));
  }
  EXPECT_EQ(with_error(c, 2, 4, 3).members, c.faulty);
  EXPECT_THROW(with_error(c, 3, 0, 1), DomainError);
  EXPECT_THROW(with_error(c, 0, 5, 1), DomainError);
}

TEST(PredgenTest, WorstCaseFollowsMinRule) {
  auto c = config_of(10, NodeSet{6, 7, 8, 9, 10});
  EXPECT_EQ(worst_case(c, 0).members, c.honest());
  EXPECT_EQ(compute_error(c, worst_case(c, 3)), (ErrorBreakdown{3, 0, 3}));
  auto c2 = config_of(10, NodeSet{9, 10});
  EXPECT_EQ(compute_error(c2, worst_case(c2, 5)), (ErrorBreakdown{2, 3, 5}));
}

TEST(PredgenTest, EverySplitHitsRequestedErrorExactly) {
  // Property: for every f and every feasible eta, each split produces error eta.
  const int n = 9;
  for (int f = 0; f <= n; ++f) {
    for (auto placement : {Placement::High, Placement::Low, Placement::Random}) {
      auto c = make_configuration(n, f, placement, InputPattern::AllZero, 17);
      for (int eta = 0; eta <= n; ++eta) {
        for (auto split : {PredictionSplit::WorstCase, PredictionSplit::Inverse, PredictionSplit::Balanced}) {
          auto p = predict(c, eta, split);
          EXPECT_EQ(compute_error(c, p).eta, eta) << "f=" << f << " eta=" << eta << " " << to_string(split);
        }
        auto inv = compute_error(c, inverse(c, eta));
        EXPECT_EQ(inv.eta_H, std::min(eta, n - f));
        EXPECT_EQ(compute_error(c, worst_case(c, eta)).eta_F, std::min(eta, f));
      }
    }
  }
}

TEST(PredgenTest, RandomPredictionIsSeeded) {
  EXPECT_EQ(random_prediction(30, 5), random_prediction(30, 5));
  EXPECT_NE(random_prediction(30, 5), random_prediction(30, 6));
  EXPECT_TRUE(random_prediction(30, 5).members.subset_of_range(30));
}

TEST(PredgenTest, LocalFromGlobalAssignsPerNode) {
  std::vector<Prediction> preds{Prediction{NodeSet{1, 2}}, Prediction{NodeSet{3, 4}}};
  std::map<NodeId, std::size_t> assignment{{NodeId{1}, 0}, {NodeId{2}, 0}, {NodeId{3}, 1}, {NodeId{4}, 1}};
  auto lp = local_from_global(preds, assignment);
  ASSERT_EQ(lp.per_node.size(), 4u);
  EXPECT_EQ(lp.of(NodeId{1}), (NodeSet{1, 2}));
  EXPECT_EQ(lp.of(NodeId{4}), (NodeSet{3, 4}));
  EXPECT_TRUE(local_from_global({}, {}).per_node.empty());
}

TEST(PredgenTest, ReplicatedPredictionLocalErrorScalesWithHonestCount) {
  auto c = config_of(6, NodeSet{5, 6});
  NodeSet p{1, 2, 5};
  auto e = compute_error(c, Prediction{p});
  EXPECT_EQ(compute_local_error(c, replicate(p, 6)), 4 * static_cast<std::int64_t>(e.eta));
}
