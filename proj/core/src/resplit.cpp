#include "kogito/resplit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "kogito/error.hpp"

namespace kogito {
namespace {

std::vector<std::string> unique_content_tokens(const std::string& head) {
  auto tokens = text::content_tokens(head);
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  return tokens;
}

}  // namespace

std::size_t default_test_size(std::size_t pool_size) {
  return std::max<std::size_t>(1, (pool_size * 2 + 99) / 100);
}

ResplitResult resplit_dataset(const MatcherDataset& pool,
                              const ResplitConfig& config) {
  if (pool.empty()) throw ValidationError("resplit pool is empty");
  if (config.stopword_version != text::kStopwordListVersion)
    throw ValidationError("unsupported stopword list version: " +
                          config.stopword_version);
  const std::size_t target = config.test_size.value_or(default_test_size(pool.size()));
  const std::size_t m = pool.size();

  // Word ids and per-head word lists.
  std::unordered_map<std::string, std::size_t> word_id;
  std::vector<std::vector<std::size_t>> head_words(m);
  for (std::size_t i = 0; i < m; ++i)
    for (auto& w : unique_content_tokens(pool[i].head)) {
      auto [it, _] = word_id.emplace(std::move(w), word_id.size());
      head_words[i].push_back(it->second);
    }
  // Training document frequency; every head starts in train.
  std::vector<std::size_t> df(word_id.size(), 0);
  for (const auto& words : head_words)
    for (auto w : words) ++df[w];

  std::vector<std::size_t> rarity(m, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (auto w : head_words[i]) rarity[i] = std::max(rarity[i], df[w]);

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(config.seed);
  for (std::size_t i = m; i > 1; --i) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % i;
    std::uint64_t x;
    do x = rng(); while (x >= limit);
    std::swap(order[i - 1], order[x % i]);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rarity[a] < rarity[b]; });

  std::array<std::vector<std::size_t>, kNumGroups> queues;
  for (auto i : order) {
    if (head_words[i].empty()) continue;
    for (std::size_t g = 0; g < kNumGroups; ++g)
      if (pool[i].labels[g]) queues[g].push_back(i);
  }
  const auto present = pool.label_counts();

  std::vector<char> in_test(m, 0);
  std::array<std::size_t, kNumGroups> test_counts{};
  std::size_t n_test = 0;
  auto admissible = [&](std::size_t i) {
    return std::all_of(head_words[i].begin(), head_words[i].end(),
                       [&](std::size_t w) { return df[w] - 1 <= config.n; });
  };

  while (n_test < target) {
    std::size_t group = kNumGroups;
    for (std::size_t g = 0; g < kNumGroups; ++g) {
      if (present[g] == 0) continue;
      if (group == kNumGroups || test_counts[g] < test_counts[group]) group = g;
    }
    if (group == kNumGroups) break;
    auto& queue = queues[group];
    std::erase_if(queue, [&](std::size_t i) { return in_test[i] != 0; });
    auto it = std::find_if(queue.begin(), queue.end(), admissible);
    if (it == queue.end()) break;
    const std::size_t pick = *it;
    in_test[pick] = 1;
    ++n_test;
    for (auto w : head_words[pick]) --df[w];
    for (std::size_t g = 0; g < kNumGroups; ++g) test_counts[g] += pool[pick].labels[g];
  }
  if (n_test == 0)
    throw InfeasibleError("no head can be moved to the test set with n = " +
                          std::to_string(config.n));

  ResplitResult result;
  for (std::size_t i = 0; i < m; ++i)
    (in_test[i] ? result.test : result.train).add(pool[i]);
  return result;
}

OverlapReport compute_overlap(const MatcherDataset& train,
                              const MatcherDataset& test) {
  if (test.empty()) throw ValidationError("test set is empty");
  std::unordered_set<std::string> vocab;
  for (const auto& e : train)
    for (auto& t : text::word_tokens(e.head)) vocab.insert(std::move(t));
  std::size_t with_sw = 0, without_sw = 0;
  for (const auto& e : test) {
    bool any = false, any_content = false;
    for (const auto& t : text::word_tokens(e.head)) {
      if (!vocab.contains(t)) continue;
      any = true;
      if (!text::is_stopword(t)) any_content = true;
    }
    with_sw += any;
    without_sw += any_content;
  }
  const double n = static_cast<double>(test.size());
  return {static_cast<double>(without_sw) / n, static_cast<double>(with_sw) / n,
          train.size(), test.size()};
}

double group_imbalance(const MatcherDataset& ds, const GroupLabels& groups) {
  const auto counts = ds.label_counts();
  double sum = 0;
  std::size_t used = 0;
  for (std::size_t g = 0; g < kNumGroups; ++g)
    if (groups[g]) {
      sum += static_cast<double>(counts[g]);
      ++used;
    }
  if (used == 0 || sum == 0) return 0.0;
  const double mean = sum / static_cast<double>(used);
  double worst = 0;
  for (std::size_t g = 0; g < kNumGroups; ++g)
    if (groups[g])
      worst = std::max(worst, std::abs(static_cast<double>(counts[g]) - mean) / mean);
  return worst;
}

}  // namespace kogito
