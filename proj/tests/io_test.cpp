#include <gtest/gtest.h>

#include <random>

#include "flowsec/dot.hpp"
#include "flowsec/io.hpp"
#include "support.hpp"

namespace flowsec {
namespace {

std::string data(const std::string& name) { return std::string(FLOWSEC_DATA_DIR) + "/" + name; }

template <class E>
void expect_error_at(std::string_view text, std::size_t line, std::size_t column) {
  try {
    parse(text);
    ADD_FAILURE() << "no error for:\n" << text;
  } catch (const E& e) {
    EXPECT_EQ(e.line(), line) << e.what();
    EXPECT_EQ(e.column(), column) << e.what();
  }
}

TEST(Parse, NetworkFile) {
  const auto doc = parse_file(data("network.flow"));
  ASSERT_EQ(doc.kind(), DocumentKind::network);
  EXPECT_EQ(std::get<Network>(doc.payload), testing::eight_entities());
}

TEST(Parse, EveryKind) {
  EXPECT_EQ(parse_file(data("labels.flow")).kind(), DocumentKind::labels);
  EXPECT_EQ(parse_file(data("levels.flow")).kind(), DocumentKind::level_poset);
  EXPECT_EQ(parse_file(data("tuples.flow")).kind(), DocumentKind::tuple_labels);
  const auto typed = parse_file(data("two_flows.flow"));
  ASSERT_EQ(typed.kind(), DocumentKind::typed_network);
  EXPECT_EQ(std::get<TypedNetwork>(typed.payload), testing::two_flows(true));
}

TEST(Parse, CommentsAndBlankLines) {
  const auto doc = parse("# header\n\nentity a   # trailing\nentity b#c\n  channel a b#c\n");
  const auto& net = std::get<Network>(doc.payload);
  EXPECT_EQ(net.size(), 2u);
  EXPECT_TRUE(net.has_channel(net.entities().id("a"), net.entities().id("b#c")));
}

TEST(Parse, LabelsAndTuples) {
  const auto labels = std::get<RawLabels>(parse("label x: a, b\nlabel y:\n").payload);
  EXPECT_EQ(labels.at("x"), (std::set<std::string>{"a", "b"}));
  EXPECT_TRUE(labels.at("y").empty());
  const auto tuples = std::get<TupleLabelsDocument>(parse("level L < H\ntuple n: H; c\ntuple m: L\n").payload);
  EXPECT_EQ(tuples.labels.at("n"), (TupleLabel{"H", {"c"}}));
  EXPECT_EQ(tuples.labels.at("m"), (TupleLabel{"L", {}}));
  EXPECT_EQ(parse_tuple_label("SECRET;EUR,US"), (TupleLabel{"SECRET", {"EUR", "US"}}));
  EXPECT_EQ(parse_tuple_label("SECRET"), (TupleLabel{"SECRET", {}}));
}

TEST(ParseErrors, ReportLineAndColumn) {
  expect_error_at<SyntaxError>("entity a\nbogus x\n", 2, 1);
  expect_error_at<SyntaxError>("entity a\nchannel a\n", 2, 10);
  expect_error_at<SemanticError>("entity a\nchannel a z\n", 2, 11);
  expect_error_at<SemanticError>("entity a\nentity a\n", 2, 8);
  // Mixed kinds: the directive that does not fit the inferred kind.
  expect_error_at<SemanticError>("entity a\nlabel a: a\n", 1, 1);
  expect_error_at<SemanticError>("level a < b\nlevel b < a\n", 2, 7);
  expect_error_at<SyntaxError>("label x a\n", 1, 10);
  expect_error_at<SemanticError>("level L\ntuple n: M\n", 2, 10);
  expect_error_at<SemanticError>("flowtype t\nentity a\ntchannel u a a\n", 3, 10);
}

TEST(Parse, EmptyDocumentIsAnEmptyNetwork) {
  const auto doc = parse("# nothing\n");
  ASSERT_EQ(doc.kind(), DocumentKind::network);
  EXPECT_EQ(std::get<Network>(doc.payload).size(), 0u);
}

TEST(Emit, CanonicalNetwork) {
  EXPECT_EQ(emit(build_network({"b", "a"}, {{"b", "a"}, {"a", "b"}, {"a", "b"}})),
            "entity a\nentity b\nchannel a b\nchannel b a\n");
}

TEST(Emit, RoundTripEveryKind) {
  for (const char* file : {"network.flow", "labels.flow", "levels.flow", "tuples.flow", "two_flows.flow"}) {
    const auto doc = parse_file(data(file));
    const std::string text = emit(doc);
    const auto again = parse(text);
    EXPECT_TRUE(equivalent(doc, again)) << file;
    EXPECT_EQ(emit(again), text) << file;
  }
}

TEST(Emit, RoundTripRandomNetworks) {
  std::mt19937 rng(71);
  for (int round = 0; round < 200; ++round) {
    Network net = testing::random_network(rng, 1 + round % 10, 0.3);
    const auto doc = parse(emit(net));
    const auto& parsed = std::get<Network>(doc.payload);
    EXPECT_EQ(emit(parsed), emit(net));
    EXPECT_TRUE(parsed.entities().same_names(net.entities()));
    EXPECT_TRUE(isomorphic(condense(parsed), condense(net)));
  }
}

TEST(Emit, DeclarationOrderDoesNotMatter) {
  EXPECT_TRUE(equivalent(parse("entity a\nentity b\nchannel b a\n"), parse("entity b\nentity a\nchannel b a\n")));
  EXPECT_FALSE(equivalent(parse("entity a\nentity b\nchannel b a\n"), parse("entity a\nentity b\n")));
}

TEST(EmitPoset, CoversAndAllPairs) {
  const auto poset = condense(testing::eight_entities());
  const std::string covers = emit_poset(poset);
  EXPECT_NE(covers.find("class [B,F,H]\n"), std::string::npos);
  EXPECT_NE(covers.find("leq [B,F,H] [A,G]\n"), std::string::npos);
  EXPECT_EQ(covers.find("leq [B,F,H] [D]\n"), std::string::npos);
  EXPECT_NE(emit_poset(poset, true).find("leq [B,F,H] [D]\n"), std::string::npos);
}

TEST(Dot, LabeledPoset) {
  const auto poset = condense(testing::eight_entities());
  const std::string dot = emit_dot(poset, compute_labels(poset));
  EXPECT_NE(dot.find("rankdir=BT"), std::string::npos);
  for (const char* node : {"\"[A,G] : A,B,C,F,G,H\"", "\"[B,F,H] : B,F,H\"", "\"[C] : C\"",
                           "\"[D] : A,B,C,D,F,G,H\"", "\"[E] : A,B,C,E,F,G,H\""}) {
    EXPECT_NE(dot.find(node), std::string::npos) << node;
  }
  EXPECT_EQ(std::count(dot.begin(), dot.end(), '>'), 4);  // four cover edges
}

TEST(Dot, EntitiesWithoutSelfEdges) {
  const auto net = build_network({"a", "b"}, {{"a", "a"}, {"a", "b"}});
  const std::string dot = emit_dot_entities(net, compute_labels(condense(net)));
  EXPECT_EQ(dot.find("\"a\" -> \"a\""), std::string::npos);
  EXPECT_NE(dot.find("\"a\" -> \"b\""), std::string::npos);
  EXPECT_NE(emit_dot_channels(net).find("\"a\" -> \"a\""), std::string::npos);
}

}  // namespace
}  // namespace flowsec
