#include "fixtures.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "kogito/text.hpp"

#ifndef KOGITO_TEST_DATA_DIR
#error "KOGITO_TEST_DATA_DIR must be defined"
#endif

namespace kogito::testing {
namespace {

constexpr const char* kGroupPrefix[] = {"phys", "soc", "evt"};

std::string group_word(std::size_t group, std::size_t i) {
  return kGroupPrefix[group] + std::to_string(i);
}

std::set<std::string> tokens_of(const std::string& s) {
  std::set<std::string> out;
  std::string cur;
  for (char c : s + " ") {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (!cur.empty()) {
      out.insert(cur);
      cur.clear();
    }
  }
  return out;
}

}  // namespace

std::filesystem::path data_dir() { return KOGITO_TEST_DATA_DIR; }

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

KnowledgeGraph random_graph(std::mt19937_64& rng, std::size_t max_size) {
  static const char* heads[] = {"PersonX eats", "hammer", "a cold day", "PersonX, PersonY",
                                "quote \"q\""};
  static const char* relations[] = {"xNeed", "AtLocation", "oWant"};
  static const char* tails[] = {"to cook", "toolbox", "a,b", "line\nbreak", "t"};
  std::uniform_int_distribution<std::size_t> size_dist(0, max_size);
  std::uniform_int_distribution<std::size_t> pick5(0, 4), pick3(0, 2), ntails(0, 3);
  KnowledgeGraph g;
  const std::size_t n = size_dist(rng);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> ts;
    const std::size_t k = ntails(rng);
    for (std::size_t j = 0; j < k; ++j) ts.emplace_back(tails[pick5(rng)]);
    g.add(KnowledgeTuple(KnowledgeHead(heads[pick5(rng)]), relations[pick3(rng)],
                         std::move(ts)));
  }
  return g;
}

SeparableData make_separable_data(std::size_t dim, std::size_t n_train,
                                  std::size_t n_test, std::uint64_t seed) {
  constexpr std::size_t kWordsPerGroup = 60;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  auto table = std::make_shared<EmbeddingTable>(dim);
  for (std::size_t g = 0; g < kNumGroups; ++g) {
    std::vector<double> centroid(dim);
    for (auto& x : centroid) x = normal(rng);
    for (std::size_t i = 0; i < kWordsPerGroup; ++i) {
      std::vector<double> v(dim);
      for (std::size_t k = 0; k < dim; ++k) v[k] = centroid[k] + 0.5 * normal(rng);
      table->add(group_word(g, i), v);
    }
  }

  std::uniform_int_distribution<std::size_t> word(0, kWordsPerGroup - 1);
  std::uniform_int_distribution<std::size_t> group(0, kNumGroups - 1);
  std::uniform_int_distribution<std::size_t> length(1, 3);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::unordered_set<std::string> seen;
  auto make = [&](std::size_t count) {
    MatcherDataset ds;
    while (ds.size() < count) {
      GroupLabels labels;
      std::vector<std::string> words;
      const std::size_t first = group(rng);
      std::vector<std::size_t> groups = {first};
      if (coin(rng) < 0.2) groups.push_back((first + 1 + group(rng) % 2) % kNumGroups);
      for (auto g : groups) {
        labels.set(kMatcherGroups[g]);
        const std::size_t len = length(rng);
        for (std::size_t i = 0; i < len; ++i) words.push_back(group_word(g, word(rng)));
      }
      // Out-of-vocabulary filler is ignored by pooling.
      if (coin(rng) < 0.3) words.push_back("the");
      std::string head;
      for (const auto& w : words) head += (head.empty() ? "" : " ") + w;
      if (!seen.insert(head).second) continue;
      ds.add({head, labels});
    }
    return ds;
  };
  SeparableData out;
  out.train = make(n_train);
  out.test = make(n_test);
  out.embeddings = std::move(table);
  return out;
}

MatcherDataset make_resplit_pool(std::size_t heads, std::size_t vocabulary,
                                 std::uint64_t seed) {
  static const char* fillers[] = {"the", "a", "of", "to", "and", "in", "on", "with", "for",
                                  "at", "by", "from", "up", "about", "into", "over", "after",
                                  "is", "was", "his"};
  constexpr std::size_t kFillers = std::size(fillers);
  const std::size_t per_group = (vocabulary - kFillers) / kNumGroups;

  // Zipf(1.1) over each group's words.
  std::vector<double> weights(per_group);
  for (std::size_t r = 0; r < per_group; ++r)
    weights[r] = 1.0 / std::pow(static_cast<double>(r + 1), 1.1);
  std::discrete_distribution<std::size_t> zipf(weights.begin(), weights.end());

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> group(0, kNumGroups - 1);
  std::uniform_int_distribution<std::size_t> length(1, 3);
  std::uniform_int_distribution<std::size_t> filler(0, kFillers - 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  MatcherDataset pool;
  std::unordered_set<std::string> seen;
  while (pool.size() < heads) {
    const std::size_t g = group(rng);
    const std::size_t len = length(rng);
    std::string head;
    for (std::size_t i = 0; i < len; ++i) {
      if (!head.empty()) head += ' ';
      if (coin(rng) < 0.3) head += std::string(fillers[filler(rng)]) + ' ';
      head += group_word(g, zipf(rng));
    }
    if (!seen.insert(head).second) continue;
    GroupLabels labels;
    labels.set(kMatcherGroups[g]);
    pool.add({head, labels});
  }
  return pool;
}

std::size_t count_resplit_violations(const MatcherDataset& train,
                                     const MatcherDataset& test, std::size_t n) {
  std::vector<std::set<std::string>> train_tokens;
  for (const auto& e : train) train_tokens.push_back(tokens_of(e.head));
  std::set<std::string> offending;
  for (const auto& e : test) {
    for (const auto& w : tokens_of(e.head)) {
      if (text::is_stopword(w)) continue;
      std::size_t count = 0;
      for (const auto& toks : train_tokens) count += toks.count(w);
      if (count > n) offending.insert(w);
    }
  }
  return offending.size();
}

double test_balance_error(const MatcherDataset& test) {
  const auto counts = test.label_counts();
  double mean = 0;
  for (auto c : counts) mean += static_cast<double>(c);
  mean /= static_cast<double>(counts.size());
  if (mean == 0) return 0.0;
  double worst = 0;
  for (auto c : counts) worst = std::max(worst, std::abs(static_cast<double>(c) - mean) / mean);
  return worst;
}

}  // namespace kogito::testing
