#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kogito {

// Word -> dense vector table (GloVe text format: "word v1 ... vd").
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dim) : dim_(dim) {}

  // Throws ParseError on ragged rows or non-numeric values. A leading
  // word2vec "count dim" header line is skipped.
  static EmbeddingTable parse(std::istream& in);
  static EmbeddingTable load(const std::filesystem::path& path);

  // Throws ValidationError on dimension mismatch or a duplicate word.
  void add(std::string word, std::span<const double> vector);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  bool contains(std::string_view word) const;
  std::optional<std::span<const double>> find(std::string_view word) const;
  const std::vector<std::string>& words() const { return words_; }

  // FNV-1a over the vocabulary (file order) and the dimension; identifies
  // the table a trained matcher was fit against.
  std::uint64_t vocabulary_hash() const;

  struct Pooled {
    std::vector<double> vector;  // zero vector when nothing is known
    std::size_t known = 0;       // in-vocabulary token count
  };

  // Mean over in-vocabulary tokens; unknown tokens are skipped. The result
  // does not depend on token order, bit for bit.
  Pooled mean_pool(const std::vector<std::string>& tokens) const;
  // Tokenizes with text::word_tokens first.
  Pooled mean_pool_text(std::string_view text) const;

 private:
  std::size_t dim_;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> data_;
};

// Cosine similarity; 0 when either vector is all zeros.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

}  // namespace kogito
