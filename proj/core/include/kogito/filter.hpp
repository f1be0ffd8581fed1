#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "kogito/embedding.hpp"
#include "kogito/knowledge.hpp"
#include "kogito/relation.hpp"

namespace kogito {

struct RelevanceScore {
  double value = 0.5;    // in [0, 1]
  bool flagged = false;  // the score carries no information
  std::string note;
};

// Judges how relevant a (head, relation, tail) fact is to a context.
// Implementations must be safe to call from several threads.
class RelevanceScorer {
 public:
  virtual ~RelevanceScorer() = default;
  virtual std::string name() const = 0;
  // Scores the tuple's first tail.
  virtual RelevanceScore score(std::string_view context,
                               const KnowledgeTuple& tuple) const = 0;
  // Remote scorers get a bounded worker pool in filter_graph.
  virtual bool remote() const { return false; }
};

// (cos + 1) / 2 between the mean-pooled context and the mean-pooled
// verbalized fact. Relations missing from the registry use the default
// template.
class EmbeddingCosineScorer : public RelevanceScorer {
 public:
  EmbeddingCosineScorer(std::shared_ptr<const EmbeddingTable> embeddings,
                        std::shared_ptr<const RelationRegistry> registry);

  std::string name() const override { return "embedding"; }
  RelevanceScore score(std::string_view context,
                       const KnowledgeTuple& tuple) const override;

  // Score between two raw texts; 0.5 and flagged when either side has no
  // known token.
  RelevanceScore score_texts(std::string_view a, std::string_view b) const;
  std::string fact_text(const KnowledgeTuple& tuple) const;

 private:
  std::shared_ptr<const EmbeddingTable> embeddings_;
  std::shared_ptr<const RelationRegistry> registry_;
};

// Pluggable fact-linking classifier behind HTTP:
// POST {context, head, relation, tail} -> {"relevance": number}.
struct ScorerEndpoint {
  std::string url;  // scheme://host[:port]/path
  int max_attempts = 2;
  std::chrono::milliseconds timeout{10000};
};

class ExternalScorer : public RelevanceScorer {
 public:
  explicit ExternalScorer(ScorerEndpoint endpoint);

  std::string name() const override { return "external"; }
  // Throws TransportError when unreachable, ApiError on a bad status or
  // body. Values outside [0, 1] are clamped.
  RelevanceScore score(std::string_view context,
                       const KnowledgeTuple& tuple) const override;
  bool remote() const override { return true; }

 private:
  ScorerEndpoint endpoint_;
};

// Throws ValidationError for an empty context or a tuple without tails.
double relevance_score(std::string_view context, const KnowledgeTuple& tuple,
                       const RelevanceScorer& scorer);

struct RelevanceJudgment {
  KnowledgeTuple tuple;
  double score;
  bool keep;  // score >= threshold, or a fail-open error
  bool flagged = false;
  std::string error;  // scorer failure message, empty on success
};

struct FilterOptions {
  double threshold = 0.5;
  // Keep tuples whose scoring failed (flagged); false drops them.
  bool fail_open = true;
  std::size_t max_in_flight = 4;
};

struct FilterResult {
  KnowledgeGraph kept;  // input order
  std::vector<RelevanceJudgment> judgments;  // one per input tuple
};

// Throws ValidationError for a threshold outside [0, 1] or an empty
// context.
FilterResult filter_graph(const KnowledgeGraph& g, std::string_view context,
                          const RelevanceScorer& scorer,
                          const FilterOptions& options = {});

}  // namespace kogito
