#include "kogito/swem.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>

#include "kogito/error.hpp"
#include "kogito/text.hpp"

namespace kogito {
namespace {

static_assert(std::endian::native == std::endian::little,
              "model files are written in host byte order");

constexpr char kMagic[4] = {'K', 'S', 'W', 'M'};

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T)))
    throw ValidationError("truncated matcher model file");
  return value;
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Numerically stable binary cross-entropy on a logit.
double bce_with_logit(double z, double y) {
  return std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<std::size_t>(x % bound);
}

void shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[uniform_index(rng, i)]);
}

}  // namespace

void write_swem_weights(const SwemWeights& w, std::ostream& out) {
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kSwemFormatVersion);
  put<std::uint64_t>(out, w.vocabulary_hash);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(w.dim));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(kNumGroups));
  put<double>(out, w.threshold);
  for (double x : w.weights) put<double>(out, x);
  for (double x : w.bias) put<double>(out, x);
  if (!out) throw IoError("failed to write matcher model");
}

SwemWeights read_swem_weights(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw ValidationError("not a matcher model file");
  const auto version = get<std::uint32_t>(in);
  if (version != kSwemFormatVersion)
    throw ValidationError("unsupported matcher model version " +
                          std::to_string(version));
  SwemWeights w;
  w.vocabulary_hash = get<std::uint64_t>(in);
  w.dim = get<std::uint32_t>(in);
  if (get<std::uint32_t>(in) != kNumGroups)
    throw ValidationError("matcher model must have 3 groups");
  w.threshold = get<double>(in);
  w.weights.resize(kNumGroups * w.dim);
  for (double& x : w.weights) x = get<double>(in);
  for (double& x : w.bias) x = get<double>(in);
  return w;
}

SwemMatcher::SwemMatcher(std::shared_ptr<const EmbeddingTable> embeddings,
                         SwemWeights weights)
    : embeddings_(std::move(embeddings)), weights_(std::move(weights)) {
  if (!embeddings_) throw ValidationError("matcher needs an embedding table");
  if (embeddings_->dim() != weights_.dim)
    throw ValidationError("embedding dimension " +
                          std::to_string(embeddings_->dim()) +
                          " does not match model dimension " +
                          std::to_string(weights_.dim));
  if (weights_.weights.size() != kNumGroups * weights_.dim)
    throw ValidationError("projection matrix has the wrong shape");
  if (embeddings_->vocabulary_hash() != weights_.vocabulary_hash)
    throw ValidationError("embedding vocabulary differs from the one the "
                          "matcher was trained with");
}

SwemMatcher SwemMatcher::load(const std::filesystem::path& model_path,
                              std::shared_ptr<const EmbeddingTable> embeddings) {
  std::ifstream in(model_path, std::ios::binary);
  if (!in) throw IoError("cannot open " + model_path.string());
  return SwemMatcher(std::move(embeddings), read_swem_weights(in));
}

void SwemMatcher::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_swem_weights(weights_, out);
}

GroupProbabilities SwemMatcher::predict_pooled(
    const std::vector<double>& pooled) const {
  GroupProbabilities p{};
  const std::size_t d = weights_.dim;
  for (std::size_t g = 0; g < kNumGroups; ++g) {
    double z = weights_.bias[g];
    for (std::size_t k = 0; k < d; ++k) z += weights_.weights[g * d + k] * pooled[k];
    p[g] = sigmoid(z);
  }
  return p;
}

GroupProbabilities SwemMatcher::predict(const KnowledgeHead& head) const {
  return predict_pooled(embeddings_->mean_pool_text(head.text()).vector);
}

GroupLabels SwemMatcher::decide(const GroupProbabilities& p) const {
  GroupLabels labels;
  for (std::size_t g = 0; g < kNumGroups; ++g)
    labels.set(kMatcherGroups[g], p[g] >= weights_.threshold);
  return labels;
}

SwemTrainResult train_swem_matcher(
    const MatcherDataset& train, std::shared_ptr<const EmbeddingTable> embeddings,
    const SwemTrainConfig& config,
    const std::function<void(std::size_t, double)>& on_epoch) {
  if (train.empty()) throw ValidationError("training set is empty");
  if (!embeddings) throw ValidationError("training needs an embedding table");
  if (embeddings->dim() != config.dim)
    throw ValidationError("embedding dimension " +
                          std::to_string(embeddings->dim()) +
                          " does not match configured dimension " +
                          std::to_string(config.dim));
  if (config.batch_size == 0) throw ValidationError("batch size must be positive");

  const std::size_t d = config.dim;
  const std::size_t n = train.size();
  std::vector<double> inputs(n * d);
  std::vector<double> targets(n * kNumGroups);
  for (std::size_t i = 0; i < n; ++i) {
    const auto pooled = embeddings->mean_pool_text(train[i].head).vector;
    std::copy(pooled.begin(), pooled.end(), inputs.begin() + i * d);
    for (std::size_t g = 0; g < kNumGroups; ++g)
      targets[i * kNumGroups + g] = train[i].labels[g] ? 1.0 : 0.0;
  }

  std::mt19937_64 rng(config.seed);
  SwemWeights w;
  w.dim = d;
  w.threshold = config.threshold;
  w.vocabulary_hash = embeddings->vocabulary_hash();
  w.weights.resize(kNumGroups * d);
  const double limit = std::sqrt(6.0 / static_cast<double>(d + kNumGroups));
  for (double& x : w.weights) x = (2.0 * uniform01(rng) - 1.0) * limit;

  const std::size_t n_params = w.weights.size() + kNumGroups;
  std::vector<double> m(n_params, 0.0), v(n_params, 0.0), grad(n_params);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> losses;
  std::uint64_t step = 0;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle(order, rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t end = std::min(n, start + config.batch_size);
      const double scale = 1.0 / static_cast<double>((end - start) * kNumGroups);
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t b = start; b < end; ++b) {
        const std::size_t i = order[b];
        const double* x = &inputs[i * d];
        for (std::size_t g = 0; g < kNumGroups; ++g) {
          double z = w.bias[g];
          for (std::size_t k = 0; k < d; ++k) z += w.weights[g * d + k] * x[k];
          const double y = targets[i * kNumGroups + g];
          epoch_loss += bce_with_logit(z, y);
          const double dz = (sigmoid(z) - y) * scale;
          for (std::size_t k = 0; k < d; ++k) grad[g * d + k] += dz * x[k];
          grad[w.weights.size() + g] += dz;
        }
      }
      ++step;
      const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(step));
      for (std::size_t p = 0; p < n_params; ++p) {
        m[p] = config.beta1 * m[p] + (1.0 - config.beta1) * grad[p];
        v[p] = config.beta2 * v[p] + (1.0 - config.beta2) * grad[p] * grad[p];
        const double update =
            config.learning_rate * (m[p] / c1) / (std::sqrt(v[p] / c2) + config.epsilon);
        if (p < w.weights.size())
          w.weights[p] -= update;
        else
          w.bias[p - w.weights.size()] -= update;
      }
    }
    epoch_loss /= static_cast<double>(n * kNumGroups);
    losses.push_back(epoch_loss);
    if (on_epoch) on_epoch(epoch, epoch_loss);
  }
  return {SwemMatcher(std::move(embeddings), std::move(w)), std::move(losses)};
}

}  // namespace kogito
