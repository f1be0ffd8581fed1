#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "kogito/embedding.hpp"
#include "kogito/knowledge.hpp"
#include "kogito/matcher_dataset.hpp"

namespace kogito::testing {

std::filesystem::path data_dir();
std::string read_text(const std::filesystem::path& path);

// Small alphabets so that random graphs share tuples often.
KnowledgeGraph random_graph(std::mt19937_64& rng, std::size_t max_size);

// Three disjoint keyword vocabularies, one per group. Word vectors sit
// around a per-group centroid; the dataset labels each head with the
// groups its words come from.
struct SeparableData {
  std::shared_ptr<const EmbeddingTable> embeddings;
  MatcherDataset train;
  MatcherDataset test;
};
SeparableData make_separable_data(std::size_t dim, std::size_t n_train,
                                  std::size_t n_test, std::uint64_t seed);

// Single-label heads over `vocabulary` group words (Zipf-distributed) plus
// a few stopwords.
MatcherDataset make_resplit_pool(std::size_t heads, std::size_t vocabulary,
                                 std::uint64_t seed);

// Independent check of the resplit constraint: for every (test word,
// train head) pair, counts train heads containing a non-stopword of a
// test head more than n times. Returns the number of offending words.
std::size_t count_resplit_violations(const MatcherDataset& train,
                                     const MatcherDataset& test, std::size_t n);

// Group with the largest relative distance from the mean test count.
double test_balance_error(const MatcherDataset& test);

}  // namespace kogito::testing
