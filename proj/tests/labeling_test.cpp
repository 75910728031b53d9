#include <gtest/gtest.h>

#include <random>

#include "flowsec/labeling.hpp"
#include "support.hpp"

namespace flowsec {
namespace {

using Names = std::vector<std::string>;

TEST(ComputeLabels, AntichainLabelsAreOwnlabels) {
  auto labels = compute_labels(condense(build_network({"a", "b"}, {})));
  EXPECT_EQ(labels.label("a"), Names{"a"});
  EXPECT_EQ(labels.label("b"), Names{"b"});
}

TEST(ComputeLabels, Chain) {
  auto labels = compute_labels(condense(build_network({"a", "b"}, {{"a", "b"}})));
  EXPECT_EQ(labels.label("a"), Names{"a"});
  EXPECT_EQ(labels.label("b"), (Names{"a", "b"}));
}

TEST(ComputeLabels, EightEntities) {
  const auto poset = condense(testing::eight_entities());
  const auto labels = compute_labels(poset);
  EXPECT_EQ(labels.label("B"), (Names{"B", "F", "H"}));
  EXPECT_EQ(labels.label("F"), (Names{"B", "F", "H"}));
  EXPECT_EQ(labels.label("C"), Names{"C"});
  EXPECT_EQ(labels.label("A"), (Names{"A", "B", "C", "F", "G", "H"}));
  EXPECT_EQ(labels.label("D"), (Names{"A", "B", "C", "D", "F", "G", "H"}));
  EXPECT_EQ(labels.label("E"), (Names{"A", "B", "C", "E", "F", "G", "H"}));
}

TEST(ComputeLabels, FullNetworkLawForUniqueTop) {
  // Everything flows into t.
  auto labels = compute_labels(condense(build_network({"a", "b", "c", "t"}, {{"a", "t"}, {"b", "c"}, {"c", "t"}})));
  EXPECT_EQ(labels.label("t"), (Names{"a", "b", "c", "t"}));
}

TEST(ComputeLabels, PropertiesOnRandomNetworks) {
  std::mt19937 rng(31);
  for (int round = 0; round < 300; ++round) {
    Network net = testing::random_network(rng, 1 + round % 10, std::array{0.1, 0.3, 0.6}[round % 3]);
    const auto poset = condense(net);
    const auto labels = compute_labels(poset);
    const auto oracle = testing::fixpoint_closure(net);
    const std::size_t k = poset.class_count();
    for (ClassId c = 0; c < k; ++c) {
      EXPECT_TRUE(labels.contains_own(c));
      // Bottoms law.
      EXPECT_EQ(poset.is_minimal(c), labels.equals_own(c));
      // The label definition evaluated directly on the oracle relation.
      Names expected;
      for (EntityId e = 0; e < net.size(); ++e) {
        if (oracle[e][poset.members(c).front()]) expected.push_back(net.entities().name(e));
      }
      std::sort(expected.begin(), expected.end());
      EXPECT_EQ(labels.class_label(c), expected);
      for (ClassId d = 0; d < k; ++d) {
        EXPECT_TRUE(c == d || !labels.label_equal(c, d));
        if (poset.leq(c, d)) {
          EXPECT_TRUE(labels.label_subset(c, d));
          EXPECT_TRUE(labels.label_size(c) < labels.label_size(d) || c == d);
        }
      }
    }
    // Closure, poset order and label inclusion agree.
    for (EntityId x = 0; x < net.size(); ++x) {
      for (EntityId y = 0; y < net.size(); ++y) {
        const auto& nx = net.entities().name(x);
        const auto& ny = net.entities().name(y);
        ASSERT_EQ(oracle[x][y], poset.leq(nx, ny));
        ASSERT_EQ(oracle[x][y], can_flow(labels, nx, ny));
      }
    }
  }
}

TEST(CanFlow, ReflexiveAndChain) {
  auto labels = compute_labels(condense(build_network({"a", "b"}, {{"a", "b"}})));
  EXPECT_TRUE(can_flow(labels, "a", "a"));
  EXPECT_TRUE(can_flow(labels, "b", "b"));
  EXPECT_TRUE(can_flow(labels, "a", "b"));
  EXPECT_FALSE(can_flow(labels, "b", "a"));
  EXPECT_THROW(can_flow(labels, "a", "q"), UnknownEntity);
}

TEST(FlowFromLabels, ProperInclusion) {
  auto poset = flow_from_labels(RawLabels{{"a", {"a"}}, {"b", {"a", "b"}}});
  EXPECT_TRUE(poset.leq("a", "b"));
  EXPECT_FALSE(poset.leq("b", "a"));
}

TEST(FlowFromLabels, EqualLabelsMerge) {
  auto poset = flow_from_labels(RawLabels{{"x", {"p", "q"}}, {"y", {"p", "q"}}});
  ASSERT_EQ(poset.class_count(), 1u);
  EXPECT_EQ(poset.member_names(0), (Names{"x", "y"}));
}

TEST(FlowFromLabels, MissingLabel) {
  EXPECT_THROW(flow_from_labels({"a", "b"}, RawLabels{{"a", {"a"}}}), MissingLabel);
}

TEST(FlowFromLabels, AcceptsLabelsWithoutOwnName) {
  RawLabels raw{{"a", {"k"}}, {"b", {"k", "m"}}};
  EXPECT_EQ(own_name_gaps(raw), (Names{"a", "b"}));
  auto poset = flow_from_labels(raw);
  EXPECT_TRUE(poset.leq("a", "b"));
}

TEST(FlowFromLabels, RoundTripOnRandomPosets) {
  std::mt19937 rng(37);
  for (int round = 0; round < 300; ++round) {
    auto rp = testing::random_poset(rng, 8);
    EXPECT_TRUE(isomorphic(flow_from_labels(compute_labels(rp.poset)), rp.poset));
    // Through the raw entity -> names form as well.
    EXPECT_TRUE(isomorphic(flow_from_labels(entity_labels(compute_labels(rp.poset))), rp.poset));
  }
}

TEST(VerifyIsomorphism, SynthesizedLabelsAreIsomorphic) {
  std::mt19937 rng(41);
  for (int round = 0; round < 200; ++round) {
    auto rp = testing::random_poset(rng, 8);
    auto report = verify_isomorphism(rp.poset, compute_labels(rp.poset));
    EXPECT_TRUE(report.isomorphic());
    EXPECT_TRUE(report.own_label_gaps.empty());
  }
}

TEST(VerifyIsomorphism, DuplicateLabelsBreakInjectivity) {
  auto poset = condense(build_network({"a", "b"}, {}));
  auto report = verify_isomorphism(poset, assign_labels(poset, {{"a"}, {"a"}}));
  EXPECT_FALSE(report.isomorphic());
  EXPECT_EQ(report.injectivity_violations, (std::vector<ClassEdge>{{0, 1}}));
  EXPECT_EQ(report.own_label_gaps, std::vector<ClassId>{1});
}

TEST(VerifyIsomorphism, MissingInclusionIsAnOrderViolation) {
  auto poset = condense(build_network({"a", "b"}, {{"a", "b"}}));
  auto report = verify_isomorphism(poset, assign_labels(poset, {{"a"}, {"b"}}));
  EXPECT_TRUE(report.injectivity_violations.empty());
  EXPECT_EQ(report.order_violations, (std::vector<ClassEdge>{{0, 1}}));
}

TEST(AssignLabels, RejectsUndeclaredNames) {
  auto poset = condense(build_network({"a"}, {}));
  EXPECT_THROW(assign_labels(poset, {{"zz"}}), UnknownEntity);
  EXPECT_THROW(assign_labels(poset, {}), MissingLabel);
}

TEST(ComputeLabels, LargeUniverseUsesClassBlocks) {
  // A long chain: label sizes grow linearly, labels share class blocks.
  const std::size_t n = 6000;
  std::vector<std::string> names;
  std::vector<NamedChannel> channels;
  for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
  for (std::size_t i = 0; i + 1 < n; ++i) channels.emplace_back(names[i], names[i + 1]);
  const auto poset = condense(build_network(names, channels));
  const auto labels = compute_labels(poset);
  EXPECT_EQ(labels.label_size(poset.class_of("x5999")), n);
  EXPECT_EQ(labels.label_size(poset.class_of("x0")), 1u);
  EXPECT_TRUE(can_flow(labels, "x17", "x4000"));
  EXPECT_FALSE(can_flow(labels, "x4000", "x17"));
}

}  // namespace
}  // namespace flowsec
