#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "kogito/error.hpp"
#include "kogito/graph_io.hpp"
#include "kogito/knowledge.hpp"

namespace kogito {
namespace {

KnowledgeTuple T(const std::string& h, const std::string& r,
                 std::vector<std::string> tails = {}) {
  return KnowledgeTuple(KnowledgeHead(h), r, std::move(tails));
}

TEST(KnowledgeHeadTest, RejectsBlankText) {
  EXPECT_THROW(KnowledgeHead(""), ValidationError);
  EXPECT_THROW(KnowledgeHead(" \t\n"), ValidationError);
  EXPECT_EQ(KnowledgeHead("hammer").text(), "hammer");
}

TEST(KnowledgeTupleTest, RejectsEmptyRelation) {
  EXPECT_THROW(T("h", ""), ValidationError);
}

TEST(KnowledgeTupleTest, TailOrderAndRepetitionDoNotMatter) {
  EXPECT_EQ(T("h", "r", {"a", "b"}), T("h", "r", {"b", "a"}));
  EXPECT_EQ(T("h", "r", {"a", "a", "b"}), T("h", "r", {"b", "a"}));
  EXPECT_NE(T("h", "r", {"a"}), T("h", "r", {"a", "b"}));
  EXPECT_NE(T("h", "r", {"a"}), T("h", "s", {"a"}));
  EXPECT_NE(T("h", "r", {"a"}), T("H", "r", {"a"}));
  EXPECT_NE(T("h", "r", {"a"}), T("h", "r", {"A"}));
}

TEST(KnowledgeTupleTest, EqualTuplesHashEqually) {
  KnowledgeTupleHash hash;
  EXPECT_EQ(hash(T("h", "r", {"x", "y", "x"})), hash(T("h", "r", {"y", "x"})));
}

TEST(GraphSetOpTest, UnionWithEmptyIsDeduplicatedIdentity) {
  KnowledgeGraph g{T("a", "r", {"1"}), T("b", "r"), T("a", "r", {"1"})};
  KnowledgeGraph expected{T("a", "r", {"1"}), T("b", "r")};
  EXPECT_EQ(graph_union(g, {}), expected);
}

TEST(GraphSetOpTest, DifferenceWithSelfIsEmpty) {
  KnowledgeGraph g{T("a", "r", {"1"}), T("b", "r")};
  EXPECT_TRUE(graph_difference(g, g).empty());
}

TEST(GraphSetOpTest, IntersectionFollowsTupleEquality) {
  KnowledgeGraph a{T("h", "r", {"t1"})};
  KnowledgeGraph b{T("h", "r", {"t1"}), T("h", "r", {"t2"})};
  EXPECT_EQ(a & b, KnowledgeGraph{T("h", "r", {"t1"})});
}

TEST(GraphSetOpTest, UnionOrderIsFirstOperandThenSecond) {
  KnowledgeGraph a{T("c", "r"), T("a", "r")};
  KnowledgeGraph b{T("b", "r"), T("a", "r"), T("d", "r")};
  KnowledgeGraph expected{T("c", "r"), T("a", "r"), T("b", "r"), T("d", "r")};
  EXPECT_EQ(a + b, expected);
}

TEST(GraphSetOpTest, DuplicatesAreStoredButCollapseUnderSetOps) {
  KnowledgeGraph g{T("a", "r"), T("a", "r")};
  EXPECT_EQ(g.size(), 2u);
  EXPECT_EQ(g.deduplicated().size(), 1u);
  EXPECT_EQ((g & g).size(), 1u);
  EXPECT_TRUE(g.set_equals(KnowledgeGraph{T("a", "r")}));
}

class GraphAlgebraProperty : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(GraphAlgebraProperty, LawsHold) {
  std::mt19937_64 rng(GetParam());
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = testing::random_graph(rng, 12);
    const auto b = testing::random_graph(rng, 12);
    EXPECT_TRUE((a + a).set_equals(a));
    EXPECT_TRUE((a & a).set_equals(a));
    EXPECT_TRUE((a - a).empty());
    EXPECT_TRUE(is_subset(a & b, a));
    EXPECT_TRUE(is_subset(a, a + b));
    EXPECT_TRUE((a + b).set_equals(b + a));
    EXPECT_TRUE((a & b).set_equals(b & a));
    // A = (A - B) ∪ (A ∩ B), disjointly.
    EXPECT_TRUE(((a - b) + (a & b)).set_equals(a));
    EXPECT_TRUE(((a - b) & b).empty());
    for (const auto& g : {a + b, a & b, a - b})
      EXPECT_EQ(g, g.deduplicated());
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, GraphAlgebraProperty, ::testing::Values(1, 2, 3, 4));

TEST(GraphIoTest, PipeSeparatedCsvWithoutHeader) {
  ParseOptions opts;
  opts.separator = '|';
  const auto g = parse_graph("PersonX plays piano|xNeed|to practice\n", GraphFormat::kCsv, opts);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g[0], T("PersonX plays piano", "xNeed", {"to practice"}));
}

TEST(GraphIoTest, CsvCollectsTrailingColumnsAsTails) {
  const auto g = parse_graph("h,r,t1,t2\nh2,r2\n", GraphFormat::kCsv);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0].tails(), (std::vector<std::string>{"t1", "t2"}));
  EXPECT_TRUE(g[1].tails().empty());
}

TEST(GraphIoTest, CsvHeaderIsSkipped) {
  ParseOptions opts;
  opts.header = true;
  const auto g = parse_graph("head,relation,tail\nh,r,t\n", GraphFormat::kCsv, opts);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g[0].head().text(), "h");
}

TEST(GraphIoTest, JsonlKeyMapping) {
  ParseOptions opts;
  opts.head_key = "source";
  opts.relation_key = "rel";
  opts.tails_key = "targets";
  const auto g = parse_graph(R"({"source":"s","rel":"xNeed","targets":["t"]})" "\n",
                             GraphFormat::kJsonl, opts);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g[0], T("s", "xNeed", {"t"}));
}

TEST(GraphIoTest, JsonlMissingTailsGivesEmptyList) {
  const auto g = parse_graph(R"({"head":"h","relation":"r"})", GraphFormat::kJsonl);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_TRUE(g[0].tails().empty());
}

TEST(GraphIoTest, EmptyInputGivesEmptyGraph) {
  EXPECT_TRUE(parse_graph("", GraphFormat::kCsv).empty());
  EXPECT_TRUE(parse_graph("", GraphFormat::kJsonl).empty());
  EXPECT_EQ(serialize_graph({}, GraphFormat::kJsonl), "");
  EXPECT_EQ(serialize_graph({}, GraphFormat::kCsv), "");
}

TEST(GraphIoTest, CanonicalJsonlKeyOrder) {
  KnowledgeGraph g{T("h", "r", {"t1", "t2"})};
  EXPECT_EQ(serialize_graph(g, GraphFormat::kJsonl),
            "{\"head\":\"h\",\"relation\":\"r\",\"tails\":[\"t1\",\"t2\"]}\n");
}

TEST(GraphIoTest, MalformedRecordsNameTheLine) {
  try {
    parse_graph("{\"head\":\"h\",\"relation\":\"r\"}\n{not json}\n", GraphFormat::kJsonl);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  try {
    parse_graph("h,r,t\nonly-one-column\n", GraphFormat::kCsv);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_graph("\"unterminated,r\n", GraphFormat::kCsv), ParseError);
}

TEST(GraphIoTest, UnknownFormatIsUsageError) {
  EXPECT_THROW(parse_graph_format("xml"), UsageError);
  EXPECT_EQ(parse_graph_format("csv"), GraphFormat::kCsv);
}

class RoundTripProperty : public ::testing::TestWithParam<GraphFormat> {};

TEST_P(RoundTripProperty, ParseOfSerializeIsIdentity) {
  std::mt19937_64 rng(99);
  ParseOptions opts;
  opts.separator = GetParam() == GraphFormat::kCsv ? '|' : ',';
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = testing::random_graph(rng, 10);
    const auto text = serialize_graph(g, GetParam(), opts);
    EXPECT_EQ(parse_graph(text, GetParam(), opts), g) << text;
  }
}

INSTANTIATE_TEST_SUITE_P(Formats, RoundTripProperty,
                         ::testing::Values(GraphFormat::kCsv, GraphFormat::kJsonl));

TEST(GraphIoTest, FilesRoundTripAndUnwritableSinkFails) {
  const auto path = std::filesystem::temp_directory_path() / "kogito_graph_io_test.jsonl";
  KnowledgeGraph g{T("h", "r", {"t"})};
  write_graph_file(g, path, GraphFormat::kJsonl);
  EXPECT_EQ(read_graph_file(path), g);
  std::filesystem::remove(path);
  EXPECT_THROW(write_graph_file(g, "/nonexistent-dir/x.jsonl", GraphFormat::kJsonl), IoError);
}

}  // namespace
}  // namespace kogito
