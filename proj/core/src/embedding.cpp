#include "kogito/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include "kogito/error.hpp"
#include "kogito/text.hpp"

namespace kogito {
namespace {

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool is_uint(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

EmbeddingTable EmbeddingTable::parse(std::istream& in) {
  std::optional<EmbeddingTable> table;
  std::string line;
  std::size_t lineno = 0;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto parts = split_spaces(line);
    if (parts.empty()) continue;
    if (!table && parts.size() == 2 && is_uint(parts[0]) && is_uint(parts[1]))
      continue;  // word2vec header
    if (parts.size() < 2)
      throw ParseError(lineno, "embedding row needs a word and values");
    const std::size_t dim = parts.size() - 1;
    if (!table) table.emplace(dim);
    if (dim != table->dim())
      throw ParseError(lineno, "expected " + std::to_string(table->dim()) +
                                   " values, got " + std::to_string(dim));
    values.assign(dim, 0.0);
    for (std::size_t k = 0; k < dim; ++k)
      if (!parse_double(parts[k + 1], values[k]))
        throw ParseError(lineno, "invalid number \"" + std::string(parts[k + 1]) + "\"");
    if (table->contains(parts[0])) continue;  // first occurrence wins
    table->add(std::string(parts[0]), values);
  }
  if (!table) throw ValidationError("embedding file is empty");
  return std::move(*table);
}

EmbeddingTable EmbeddingTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse(in);
}

void EmbeddingTable::add(std::string word, std::span<const double> vector) {
  if (vector.size() != dim_)
    throw ValidationError("embedding dimension mismatch for \"" + word + "\"");
  if (index_.contains(word))
    throw ValidationError("duplicate embedding for \"" + word + "\"");
  index_.emplace(word, words_.size());
  words_.push_back(std::move(word));
  data_.insert(data_.end(), vector.begin(), vector.end());
}

bool EmbeddingTable::contains(std::string_view word) const {
  return index_.contains(std::string(word));
}

std::optional<std::span<const double>> EmbeddingTable::find(
    std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return std::span<const double>(data_.data() + it->second * dim_, dim_);
}

std::uint64_t EmbeddingTable::vocabulary_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ULL;
  };
  for (const auto& w : words_) {
    for (unsigned char c : w) mix(c);
    mix('\n');
  }
  for (char c : std::to_string(dim_)) mix(static_cast<unsigned char>(c));
  return h;
}

EmbeddingTable::Pooled EmbeddingTable::mean_pool(
    const std::vector<std::string>& tokens) const {
  Pooled out{std::vector<double>(dim_, 0.0), 0};
  // Summing in sorted order makes the pool independent of token order.
  std::vector<const std::string*> order;
  order.reserve(tokens.size());
  for (const auto& t : tokens) order.push_back(&t);
  std::sort(order.begin(), order.end(),
            [](const std::string* a, const std::string* b) { return *a < *b; });
  for (const std::string* tp : order) {
    const std::string& t = *tp;
    auto v = find(t);
    if (!v) continue;
    for (std::size_t k = 0; k < dim_; ++k) out.vector[k] += (*v)[k];
    ++out.known;
  }
  if (out.known > 0)
    for (auto& x : out.vector) x /= static_cast<double>(out.known);
  return out;
}

EmbeddingTable::Pooled EmbeddingTable::mean_pool_text(std::string_view s) const {
  return mean_pool(text::word_tokens(s));
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t k = 0; k < a.size() && k < b.size(); ++k) {
    dot += a[k] * b[k];
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / std::sqrt(na * nb);
}

}  // namespace kogito
