#include <benchmark/benchmark.h>

#include <random>

#include "kogito/head_extraction.hpp"
#include "kogito/metrics.hpp"
#include "kogito/resplit.hpp"
#include "kogito/swem.hpp"
#include "kogito/tagger.hpp"

namespace {

using namespace kogito;

const char* const kText =
    "PersonX becomes a great basketball player. He trains every morning at the gym. "
    "His coach buys a new ball for the team.";

std::string random_sentence(std::mt19937_64& rng, std::size_t words) {
  static const char* vocab[] = {"the", "cat", "sat", "on", "mat", "a", "dog", "ran", "home", "to"};
  std::uniform_int_distribution<int> pick(0, 9);
  std::string s;
  for (std::size_t i = 0; i < words; ++i) s += (s.empty() ? "" : " ") + std::string(vocab[pick(rng)]);
  return s;
}

void BM_Tag(benchmark::State& state) {
  const auto& tagger = LexiconTagger::instance();
  for (auto _ : state) benchmark::DoNotOptimize(tagger.tag(kText));
}
BENCHMARK(BM_Tag);

void BM_ExtractHeads(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(extract_heads(kText));
}
BENCHMARK(BM_ExtractHeads);

void BM_CorpusMetric(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::vector<std::string> cands;
  References refs;
  for (int i = 0; i < state.range(0); ++i) {
    cands.push_back(random_sentence(rng, 8));
    refs.push_back({random_sentence(rng, 8), random_sentence(rng, 6)});
  }
  const auto metric = static_cast<Metric>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(score_corpus(metric, cands, refs));
  state.SetLabel(std::string(to_string(metric)));
}
BENCHMARK(BM_CorpusMetric)->ArgsProduct({{100, 1000}, {0, 1, 2, 3}});

MatcherDataset resplit_pool(std::size_t heads, std::size_t vocab) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> word(0, vocab - 1), len(1, 4), group(0, 2);
  MatcherDataset ds;
  for (std::size_t i = 0; i < heads; ++i) {
    std::string h = "item" + std::to_string(i);
    for (std::size_t k = len(rng); k > 0; --k) h += " w" + std::to_string(word(rng));
    GroupLabels l;
    l.set(kMatcherGroups[group(rng)]);
    ds.add({h, l});
  }
  return ds;
}

void BM_Resplit(benchmark::State& state) {
  const auto heads = static_cast<std::size_t>(state.range(0));
  // Uniform words; a wide vocabulary keeps the n = 2 split feasible.
  const auto pool = resplit_pool(heads, heads * 2);
  ResplitConfig cfg;
  cfg.n = 2;
  for (auto _ : state) benchmark::DoNotOptimize(resplit_dataset(pool, cfg));
}
BENCHMARK(BM_Resplit)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_SwemPredict(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  auto table = std::make_shared<EmbeddingTable>(kSwemDimension);
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> v(kSwemDimension);
    for (auto& x : v) x = gauss(rng);
    table->add("w" + std::to_string(i), v);
  }
  SwemWeights w;
  w.dim = kSwemDimension;
  w.weights.assign(kNumGroups * kSwemDimension, 0.01);
  w.bias.fill(0.0);
  w.vocabulary_hash = table->vocabulary_hash();
  const SwemMatcher m(table, w);
  const KnowledgeHead head("w1 w20 w300 w4 unknown");
  for (auto _ : state) benchmark::DoNotOptimize(m.predict(head));
}
BENCHMARK(BM_SwemPredict);

}  // namespace

BENCHMARK_MAIN();
