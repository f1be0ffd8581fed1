#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "kogito/error.hpp"
#include "kogito/matcher_eval.hpp"
#include "kogito/swem.hpp"

namespace kogito {
namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

TEST(EmbeddingTableTest, ParsesGloveAndWord2VecText) {
  std::istringstream glove("cat 1 0 0\ndog 0 1 0\n");
  const auto t = EmbeddingTable::parse(glove);
  EXPECT_EQ(t.dim(), 3u);
  EXPECT_EQ(t.size(), 2u);
  ASSERT_TRUE(t.find("dog"));
  EXPECT_EQ((*t.find("dog"))[1], 1.0);

  std::istringstream w2v("2 2\na 1 2\nb 3 4\n");
  EXPECT_EQ(EmbeddingTable::parse(w2v).size(), 2u);

  std::istringstream ragged("a 1 2\nb 3\n");
  EXPECT_THROW(EmbeddingTable::parse(ragged), ParseError);
  std::istringstream bad("a 1 x\n");
  EXPECT_THROW(EmbeddingTable::parse(bad), ParseError);
}

TEST(EmbeddingTableTest, MeanPoolSkipsUnknownWords) {
  EmbeddingTable t(2);
  t.add("a", std::vector<double>{1, 3});
  t.add("b", std::vector<double>{3, 5});
  const auto p = t.mean_pool({"a", "zzz", "b"});
  EXPECT_EQ(p.known, 2u);
  EXPECT_EQ(p.vector, (std::vector<double>{2, 4}));
  const auto none = t.mean_pool({"zzz"});
  EXPECT_EQ(none.known, 0u);
  EXPECT_EQ(none.vector, (std::vector<double>{0, 0}));
}

TEST(EmbeddingTableTest, CosineSimilarity) {
  const std::vector<double> a{1, 2, 3}, b{-1, -2, -3}, z{0, 0, 0}, o{3, 0, -1};
  EXPECT_EQ(cosine_similarity(a, a), 1.0);
  EXPECT_EQ(cosine_similarity(a, b), -1.0);
  EXPECT_EQ(cosine_similarity(a, z), 0.0);
  EXPECT_EQ(cosine_similarity(a, o), 0.0);
}

SwemWeights toy_weights(const EmbeddingTable& table) {
  SwemWeights w;
  w.dim = table.dim();
  w.weights = {0.5, -1.0, 2.0, 0.25, -0.75, 1.5};
  w.bias = {0.1, -0.2, 0.3};
  w.vocabulary_hash = table.vocabulary_hash();
  return w;
}

TEST(SwemMatcherTest, AllUnknownHeadGivesSigmoidOfBias) {
  auto table = std::make_shared<EmbeddingTable>(2);
  table->add("cat", std::vector<double>{1, 2});
  const SwemMatcher m(table, toy_weights(*table));
  const auto p = m.predict(KnowledgeHead("qqq zzz"));
  EXPECT_DOUBLE_EQ(p[0], sigmoid(0.1));
  EXPECT_DOUBLE_EQ(p[1], sigmoid(-0.2));
  EXPECT_DOUBLE_EQ(p[2], sigmoid(0.3));
}

TEST(SwemMatcherTest, ProbabilitiesAreInRangeAndOrderInvariant) {
  const auto data = testing::make_separable_data(16, 50, 0, 3);
  SwemTrainConfig cfg;
  cfg.dim = 16;
  cfg.epochs = 2;
  const auto m = train_swem_matcher(data.train, data.embeddings, cfg).matcher;
  for (const auto& e : data.train) {
    const auto p = m.predict(KnowledgeHead(e.head));
    for (double x : p) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 1.0);
    }
    // Reverse the word order: pooling is order-independent bit for bit.
    std::istringstream in(e.head);
    std::vector<std::string> words;
    for (std::string w; in >> w;) words.insert(words.begin(), w);
    std::string reversed;
    for (const auto& w : words) reversed += (reversed.empty() ? "" : " ") + w;
    EXPECT_EQ(m.predict(KnowledgeHead(reversed)), p) << e.head;
  }
}

TEST(SwemMatcherTest, RejectsMismatchedTable) {
  auto table = std::make_shared<EmbeddingTable>(2);
  table->add("cat", std::vector<double>{1, 2});
  auto w = toy_weights(*table);
  w.vocabulary_hash ^= 1;
  EXPECT_THROW(SwemMatcher(table, w), ValidationError);
  auto other = std::make_shared<EmbeddingTable>(3);
  other->add("cat", std::vector<double>{1, 2, 3});
  EXPECT_THROW(SwemMatcher(other, toy_weights(*table)), ValidationError);
}

TEST(SwemMatcherTest, SaveLoadRoundTrip) {
  auto table = std::make_shared<EmbeddingTable>(2);
  table->add("cat", std::vector<double>{1, 2});
  const SwemMatcher m(table, toy_weights(*table));
  const auto path = std::filesystem::temp_directory_path() / "kogito_swem_test.bin";
  m.save(path);
  const auto loaded = SwemMatcher::load(path, table);
  EXPECT_EQ(loaded.weights(), m.weights());
  std::filesystem::remove(path);

  std::istringstream garbage("not a model");
  EXPECT_THROW(read_swem_weights(garbage), ValidationError);
}

TEST(SwemTrainTest, LearnsSeparableDataDeterministically) {
  const auto data = testing::make_separable_data(kSwemDimension, 1200, 300, 11);
  SwemTrainConfig cfg;
  cfg.seed = 5;
  const auto a = train_swem_matcher(data.train, data.embeddings, cfg);
  const auto b = train_swem_matcher(data.train, data.embeddings, cfg);
  EXPECT_EQ(a.matcher.weights(), b.matcher.weights());
  ASSERT_EQ(a.epoch_losses.size(), 20u);
  EXPECT_LT(a.epoch_losses.back(), a.epoch_losses.front());

  const auto report = evaluate_matcher(MatcherKind::kModel, data.test, &a.matcher);
  EXPECT_GE(report.macro, 0.95);

  cfg.seed = 6;
  const auto c = train_swem_matcher(data.train, data.embeddings, cfg);
  EXPECT_NE(c.matcher.weights(), a.matcher.weights());
}

TEST(SwemTrainTest, Errors) {
  const auto data = testing::make_separable_data(8, 10, 0, 1);
  SwemTrainConfig cfg;
  cfg.dim = 8;
  EXPECT_THROW(train_swem_matcher(MatcherDataset{}, data.embeddings, cfg), ValidationError);
  cfg.dim = 100;
  EXPECT_THROW(train_swem_matcher(data.train, data.embeddings, cfg), ValidationError);
}

}  // namespace
}  // namespace kogito
