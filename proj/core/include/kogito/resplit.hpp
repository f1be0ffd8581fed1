#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "kogito/matcher_dataset.hpp"
#include "kogito/text.hpp"

namespace kogito {

struct ResplitConfig {
  // Max number of training heads that may contain any non-stopword of a
  // test head (the n of D_n).
  std::size_t n = 0;
  std::uint64_t seed = 0;
  // Stop once the test set has this many heads. Defaults to
  // default_test_size(pool size).
  std::optional<std::size_t> test_size;
  std::string stopword_version = std::string(text::kStopwordListVersion);
};

// About 2% of the pool, at least one head.
std::size_t default_test_size(std::size_t pool_size);

struct ResplitResult {
  MatcherDataset train;
  MatcherDataset test;
};

// Greedy rarest-first selection. Heads are ranked by the largest document
// frequency of their non-stopwords (seeded shuffle breaks ties). On each
// turn the group with the fewest test heads picks its first admissible
// head: one whose non-stopwords would each remain in at most n training
// heads after it moves to test. Selection ends when that group has no
// admissible head or the target size is reached. Heads without
// non-stopwords stay in train.
//
// Throws ValidationError for an empty pool or a stopword version mismatch,
// InfeasibleError when no head can be moved to test.
ResplitResult resplit_dataset(const MatcherDataset& pool,
                              const ResplitConfig& config);

struct OverlapReport {
  // Fraction of test heads sharing at least one token with some training
  // head, counting non-stopwords only / all tokens.
  double overlap_without_stopwords = 0.0;
  double overlap_with_stopwords = 0.0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
};

// Throws ValidationError for an empty test set.
OverlapReport compute_overlap(const MatcherDataset& train,
                              const MatcherDataset& test);

// Largest relative deviation of a group's label count from the mean count
// over `groups` (0 = perfectly balanced).
double group_imbalance(const MatcherDataset& ds,
                       const GroupLabels& groups = GroupLabels::all());

}  // namespace kogito
