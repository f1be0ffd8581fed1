#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "kogito/error.hpp"
#include "kogito/metrics.hpp"
#include "kogito/model.hpp"

namespace kogito {
namespace {

using Strings = std::vector<std::string>;

// Brute force: longest common subsequence over every subsequence of `a`.
std::size_t lcs_oracle(const Strings& a, const Strings& b) {
  std::size_t best = 0;
  for (std::uint32_t mask = 0; mask < (1u << a.size()); ++mask) {
    std::size_t j = 0, len = 0;
    bool ok = true;
    for (std::size_t i = 0; i < a.size() && ok; ++i) {
      if (!(mask & (1u << i))) continue;
      while (j < b.size() && b[j] != a[i]) ++j;
      if (j == b.size()) ok = false;
      else { ++len; ++j; }
    }
    if (ok) best = std::max(best, len);
  }
  return best;
}

TEST(MetricTokensTest, LowercasesAndSplits) {
  EXPECT_EQ(metric_tokens("  The Cat\tsat\n"), (Strings{"the", "cat", "sat"}));
  EXPECT_TRUE(metric_tokens("").empty());
}

TEST(BleuTest, IdentityIsOne) {
  const Strings c = {"the cat sat on the mat", "a dog ran far away today"};
  EXPECT_NEAR(corpus_bleu(c, {{c[0]}, {c[1]}}), 1.0, 1e-6);
}

TEST(BleuTest, ClippedUnigramPrecision) {
  // "the" occurs 4 times in the candidate, once in the reference: 1/4.
  // Brevity penalty 1 since 4 > 3.
  MetricParams p;
  p.bleu_max_order = 1;
  EXPECT_NEAR(corpus_bleu({"the the the the"}, {{"the cat sat"}}, p), 0.25, 1e-6);
}

TEST(BleuTest, BrevityPenaltyUsesClosestReference) {
  MetricParams p;
  p.bleu_max_order = 1;
  // Candidate length 2; references of length 3 and 6: closest is 3.
  EXPECT_NEAR(corpus_bleu({"a b"}, {{"a b c", "a b c d e f"}}, p), std::exp(1.0 - 3.0 / 2.0),
              1e-12);
  // Tie between 1 and 3 picks the shorter: no penalty.
  EXPECT_NEAR(corpus_bleu({"a b"}, {{"a", "a b c"}}, p), 1.0, 1e-12);
}

TEST(BleuTest, ZeroPrecisionIsFloored) {
  const double s = corpus_bleu({"x y z w"}, {{"a b c d"}});
  EXPECT_GT(s, 0.0);
  EXPECT_LT(s, 1e-6);
}

TEST(RougeLTest, IdentityIsOne) {
  EXPECT_NEAR(corpus_rouge_l({"the cat sat"}, {{"the cat sat"}}), 1.0, 1e-6);
}

TEST(RougeLTest, ReorderedClauses) {
  const auto c = metric_tokens("police killed the gunman");
  const auto r = metric_tokens("the gunman killed police");
  EXPECT_EQ(lcs_oracle(c, r), 2u);
  EXPECT_EQ(lcs_length(c, r), 2u);
  // P = R = 0.5 so F is 0.5 for any beta.
  EXPECT_NEAR(corpus_rouge_l({"police killed the gunman"}, {{"the gunman killed police"}}), 0.5,
              1e-6);
}

TEST(RougeLTest, LcsMatchesBruteForce) {
  std::mt19937_64 rng(3);
  const Strings vocab = {"a", "b", "c", "d"};
  std::uniform_int_distribution<std::size_t> len(0, 9), word(0, vocab.size() - 1);
  for (int trial = 0; trial < 300; ++trial) {
    Strings a(len(rng)), b(len(rng));
    for (auto& w : a) w = vocab[word(rng)];
    for (auto& w : b) w = vocab[word(rng)];
    EXPECT_EQ(lcs_length(a, b), lcs_oracle(a, b));
  }
}

TEST(RougeLTest, RecallWeightedF) {
  // LCS 2, P = 2/2, R = 2/4. F = (1 + b^2) P R / (R + b^2 P).
  const double b2 = 1.2 * 1.2;
  const double expected = (1 + b2) * 1.0 * 0.5 / (0.5 + b2 * 1.0);
  EXPECT_NEAR(rouge_l_sentence({"a", "b"}, {"a", "x", "b", "y"}, 1.2), expected, 1e-12);
}

TEST(MeteorTest, StemMatchingAndPenalty) {
  EXPECT_EQ(meteor_stem("running"), "run");
  EXPECT_EQ(meteor_stem("tries"), "try");
  EXPECT_EQ(meteor_stem("cats"), "cat");
  EXPECT_EQ(meteor_stem("glass"), "glass");
  // "cats" matches "cat" by stem: 2 matches, one chunk.
  // Fmean = 1, penalty 0.5 (1/2)^3.
  EXPECT_NEAR(meteor_sentence({"the", "cats"}, {"the", "cat"}), 1 - 0.5 / 8, 1e-12);
  // Exact matches of length L score 1 - 0.5 / L^3.
  for (std::size_t len = 1; len <= 5; ++len) {
    Strings s(len);
    for (std::size_t i = 0; i < len; ++i) s[i] = "w" + std::to_string(i);
    EXPECT_NEAR(meteor_sentence(s, s), 1 - 0.5 / std::pow(double(len), 3), 1e-12);
  }
}

TEST(MeteorTest, FragmentationCountsChunks) {
  // Candidate a b c d vs reference c d a b: 4 matches in 2 chunks.
  // P = R = 1, penalty 0.5 (2/4)^3.
  EXPECT_NEAR(meteor_sentence({"a", "b", "c", "d"}, {"c", "d", "a", "b"}), 1 - 0.5 / 8, 1e-12);
}

TEST(CiderTest, IdentityCorpusScoresTen) {
  // Two items with no shared n-gram: every idf is log 2, each candidate
  // vector equals its reference vector, cosine 1 at all four orders.
  const Strings c = {"a cat sat on the mat", "dogs ran far away today"};
  EXPECT_NEAR(corpus_cider(c, {{c[0]}, {c[1]}}), 10.0, 1e-6);
}

TEST(CiderTest, SharedNgramsCarryNoWeight) {
  // Identical items: df = N for every n-gram, all idf weights vanish.
  EXPECT_EQ(corpus_cider({"a b", "a b"}, {{"a b"}, {"a b"}}), 0.0);
}

TEST(ScoreCorpusTest, ShapeErrors) {
  for (auto m : {Metric::kBleu, Metric::kRougeL, Metric::kMeteor, Metric::kCider}) {
    EXPECT_THROW(score_corpus(m, {"a"}, {}), ValidationError);
    EXPECT_THROW(score_corpus(m, {"a"}, {{}}), ValidationError);
  }
  EXPECT_EQ(parse_metric("rouge_l"), Metric::kRougeL);
  EXPECT_THROW(parse_metric("bert"), UsageError);
}

TEST(ScoreCorpusTest, EmptyCandidateContributesZero) {
  EXPECT_NEAR(corpus_rouge_l({"", "a b"}, {{"a"}, {"a b"}}), 0.5, 1e-12);
  EXPECT_NEAR(corpus_meteor({"", "x"}, {{"a"}, {"y"}}), 0.0, 1e-12);
}

struct Corpus {
  Strings candidates;
  References references;
};

Corpus random_corpus(std::mt19937_64& rng, std::size_t items) {
  const Strings vocab = {"the", "a", "cat", "dog", "sat", "ran", "on", "mat", "home", "to"};
  std::uniform_int_distribution<std::size_t> len(1, 7), word(0, vocab.size() - 1),
      nrefs(1, 3);
  auto sentence = [&] {
    std::string s;
    for (std::size_t i = len(rng); i > 0; --i) s += (s.empty() ? "" : " ") + vocab[word(rng)];
    return s;
  };
  Corpus c;
  for (std::size_t i = 0; i < items; ++i) {
    c.candidates.push_back(sentence());
    Strings refs;
    for (std::size_t k = nrefs(rng); k > 0; --k) refs.push_back(sentence());
    c.references.push_back(refs);
  }
  return c;
}

TEST(MetricProperty, RangesAndPermutationEquivariance) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = random_corpus(rng, 2 + trial % 6);
    std::vector<std::size_t> perm(c.candidates.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Corpus shuffled;
    for (auto i : perm) {
      shuffled.candidates.push_back(c.candidates[i]);
      shuffled.references.push_back(c.references[i]);
    }
    for (auto m : {Metric::kBleu, Metric::kRougeL, Metric::kMeteor, Metric::kCider}) {
      const double s = score_corpus(m, c.candidates, c.references);
      const double hi = m == Metric::kCider ? 10.0 : 1.0;
      EXPECT_GE(s, 0.0);
      EXPECT_LE(s, hi + 1e-9);
      if (m == Metric::kBleu)
        EXPECT_EQ(s, score_corpus(m, shuffled.candidates, shuffled.references));
      else
        EXPECT_NEAR(s, score_corpus(m, shuffled.candidates, shuffled.references), 1e-9);
    }
  }
}

TEST(MetricProperty, ExactMatchNeverLowersRougeL) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    auto c = random_corpus(rng, 1 + trial % 5);
    const double before = corpus_rouge_l(c.candidates, c.references);
    c.candidates.push_back("the cat sat");
    c.references.push_back({"the cat sat"});
    EXPECT_GE(corpus_rouge_l(c.candidates, c.references), before - 1e-12);
  }
}

TEST(EvaluateModelTest, ThreeTupleStubOracle) {
  // Stub always answers "to rest". Hand scores:
  //   tuple 0 refs {to rest}: exact.
  //   tuple 1 refs {to rest, to eat}: exact against the first.
  //   tuple 2 refs {go home}: nothing shared.
  const StubModel stub("to rest");
  KnowledgeGraph refs{
      KnowledgeTuple(KnowledgeHead("PersonX sleeps"), "xWant", {"to rest"}),
      KnowledgeTuple(KnowledgeHead("PersonX sits"), "xWant", {"to rest", "to eat"}),
      KnowledgeTuple(KnowledgeHead("PersonX leaves"), "xWant", {"go home"})};
  const auto report = evaluate_model(
      stub, refs, {Metric::kBleu, Metric::kRougeL, Metric::kMeteor, Metric::kCider});
  EXPECT_EQ(report.candidates, 3u);
  EXPECT_EQ(report.references, 4u);

  // BLEU: 6 candidate words, closest reference lengths 2+2+2, BP 1.
  // Unigrams 4/6 clipped, bigrams 2/3, no trigrams or 4-grams in the
  // candidates so those orders drop out: geometric mean 2/3.
  EXPECT_NEAR(report.scores.at("bleu"), 2.0 / 3.0, 1e-6);
  // ROUGE-L: 1, 1, 0.
  EXPECT_NEAR(report.scores.at("rouge_l"), 2.0 / 3.0, 1e-6);
  // METEOR: two-word exact match 1 - 0.5/8 twice, then 0.
  EXPECT_NEAR(report.scores.at("meteor"), 2.0 * (1 - 0.0625) / 3.0, 1e-6);
  // CIDEr, N = 3. df: to 2, rest 2, "to rest" 2, the rest 1.
  // idf(df 2) = log 1.5, idf(df 1) = log 3.
  // tuple 0: cosine 1 at n = 1, 2; empty at n = 3, 4 -> 10 * 2/4.
  // tuple 1: against "to rest" as tuple 0; against "to eat" the unigram
  // cosine is l15^2 / (sqrt(2) l15 sqrt(l15^2 + l3^2)), bigram 0.
  const double l15 = std::log(1.5), l3 = std::log(3.0);
  const double cos_eat = l15 / (std::sqrt(2.0) * std::sqrt(l15 * l15 + l3 * l3));
  const double item0 = 10.0 * 2.0 / 4.0;
  const double item1 = 10.0 * ((1 + cos_eat) / 2 + 0.5) / 4.0;
  EXPECT_NEAR(report.scores.at("cider"), (item0 + item1) / 3.0, 1e-6);
}

TEST(EvaluateModelTest, PerfectStubMaximizesBleuAndRouge) {
  const StubModel stub("to rest now");
  KnowledgeGraph refs{KnowledgeTuple(KnowledgeHead("A"), "xWant", {"to rest now"}),
                      KnowledgeTuple(KnowledgeHead("B"), "xNeed", {"to rest now"})};
  const auto r = evaluate_model(stub, refs, {Metric::kBleu, Metric::kRougeL});
  EXPECT_NEAR(r.scores.at("bleu"), 1.0, 1e-6);
  EXPECT_NEAR(r.scores.at("rouge_l"), 1.0, 1e-6);
}

TEST(EvaluateModelTest, Errors) {
  const StubModel stub;
  EXPECT_THROW(evaluate_model(stub, {}, {Metric::kBleu}), ValidationError);
  KnowledgeGraph no_tail{KnowledgeTuple(KnowledgeHead("A"), "xWant")};
  EXPECT_THROW(evaluate_model(stub, no_tail, {Metric::kBleu}), ValidationError);
}

}  // namespace
}  // namespace kogito
