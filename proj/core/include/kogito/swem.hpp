#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

#include "kogito/embedding.hpp"
#include "kogito/knowledge.hpp"
#include "kogito/matcher_dataset.hpp"

namespace kogito {

inline constexpr std::size_t kSwemDimension = 100;
inline constexpr std::uint32_t kSwemFormatVersion = 1;

using GroupProbabilities = std::array<double, kNumGroups>;

// Projection layer of the mean-pooled word-embedding matcher. Weights are
// row-major, one row of `dim` values per group.
struct SwemWeights {
  std::size_t dim = 0;
  std::vector<double> weights;  // kNumGroups * dim
  std::array<double, kNumGroups> bias{};
  double threshold = 0.5;
  std::uint64_t vocabulary_hash = 0;

  friend bool operator==(const SwemWeights&, const SwemWeights&) = default;
};

// Binary layout (little endian): "KSWM", u32 version, u64 vocabulary hash,
// u32 dim, u32 groups, f64 threshold, f64 weights[groups*dim], f64
// bias[groups].
void write_swem_weights(const SwemWeights& w, std::ostream& out);
SwemWeights read_swem_weights(std::istream& in);

// Trained matcher: frozen embeddings plus a projection, sigmoid per group.
class SwemMatcher {
 public:
  // Throws ValidationError when the table does not match the weights
  // (dimension or vocabulary hash).
  SwemMatcher(std::shared_ptr<const EmbeddingTable> embeddings,
              SwemWeights weights);

  static SwemMatcher load(const std::filesystem::path& model_path,
                          std::shared_ptr<const EmbeddingTable> embeddings);
  void save(const std::filesystem::path& path) const;

  GroupProbabilities predict(const KnowledgeHead& head) const;
  GroupProbabilities predict_pooled(const std::vector<double>& pooled) const;
  GroupLabels decide(const GroupProbabilities& p) const;
  GroupLabels predict_labels(const KnowledgeHead& head) const {
    return decide(predict(head));
  }

  const SwemWeights& weights() const { return weights_; }
  const EmbeddingTable& embeddings() const { return *embeddings_; }
  double threshold() const { return weights_.threshold; }

 private:
  std::shared_ptr<const EmbeddingTable> embeddings_;
  SwemWeights weights_;
};

inline GroupProbabilities predict_groups(const SwemMatcher& model,
                                         const KnowledgeHead& head) {
  return model.predict(head);
}

struct SwemTrainConfig {
  std::size_t epochs = 20;
  std::size_t batch_size = 64;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;
  double threshold = 0.5;
  std::size_t dim = kSwemDimension;
};

struct SwemTrainResult {
  SwemMatcher matcher;
  std::vector<double> epoch_losses;  // mean binary cross-entropy per epoch
};

// Adam on binary cross-entropy over the projection; embeddings stay frozen.
// Deterministic for a given seed. Throws ValidationError for an empty
// dataset or an embedding table whose dimension differs from config.dim.
SwemTrainResult train_swem_matcher(
    const MatcherDataset& train, std::shared_ptr<const EmbeddingTable> embeddings,
    const SwemTrainConfig& config = {},
    const std::function<void(std::size_t epoch, double loss)>& on_epoch = {});

}  // namespace kogito
