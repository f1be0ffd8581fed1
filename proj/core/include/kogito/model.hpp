#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "kogito/completion_client.hpp"
#include "kogito/error.hpp"
#include "kogito/knowledge.hpp"
#include "kogito/relation.hpp"

namespace kogito {

struct DecodeConfig {
  int max_tokens = 24;
  double temperature = 0.0;
  std::vector<std::string> stop_sequences = {"\n"};
  int n_samples = 1;
  std::size_t max_in_flight = 4;
};

// A tuple whose tails could not be generated.
struct GenerationDiagnostic {
  std::size_t index;  // position in the input graph
  std::string kind;   // error kind, e.g. "api", "transport", "empty"
  std::string message;
};

struct GenerationResult {
  KnowledgeGraph graph;
  std::vector<GenerationDiagnostic> diagnostics;
};

// Thrown when every tuple failed to reach the backend; carries what was
// produced.
class GenerationError : public TransportError {
 public:
  GenerationError(const std::string& what, GenerationResult partial)
      : TransportError(what), partial_(std::move(partial)) {}
  const GenerationResult& partial() const { return partial_; }

 private:
  GenerationResult partial_;
};

class UnsupportedError : public ValidationError {
 public:
  using ValidationError::ValidationError;
  const char* kind() const override { return "unsupported"; }
};

// Model-agnostic knowledge model. generate() receives (head, relation)
// tuples and returns the same tuples, same order, with tails filled in;
// existing tails are replaced.
class KnowledgeModel {
 public:
  virtual ~KnowledgeModel() = default;
  virtual std::string name() const = 0;
  virtual GenerationResult generate(const KnowledgeGraph& partial,
                                    const DecodeConfig& decode) const = 0;

  virtual void train(const KnowledgeGraph& /*data*/) {
    throw UnsupportedError(name() + " does not support training");
  }
  virtual void save(const std::filesystem::path& /*path*/) const {
    throw UnsupportedError(name() + " cannot be saved");
  }
};

GenerationResult generate(const KnowledgeModel& model,
                          const KnowledgeGraph& partial,
                          const DecodeConfig& decode = {});

// Deterministic template backend. The template accepts {head} and
// {relation}.
class StubModel : public KnowledgeModel {
 public:
  static constexpr const char* kDefaultTemplate = "to <stub:{relation}:{head}>";

  explicit StubModel(std::string pattern = kDefaultTemplate);

  // Reads a file written by save().
  static StubModel load(const std::filesystem::path& path);

  std::string name() const override { return "stub"; }
  GenerationResult generate(const KnowledgeGraph& partial,
                            const DecodeConfig& decode) const override;
  void save(const std::filesystem::path& path) const override;

  std::string tail_for(const KnowledgeTuple& t) const;
  const std::string& pattern() const { return pattern_; }

 private:
  std::string pattern_;
};

// Prompts a remote completion endpoint. Relations with registered samples
// use a few-shot prompt; the rest are verbalized zero-shot.
class ApiModel : public KnowledgeModel {
 public:
  ApiModel(ApiEndpoint endpoint, std::shared_ptr<const RelationRegistry> registry);

  // Few-shot samples for one relation (all tuples must use it).
  void set_samples(const std::string& relation, KnowledgeGraph samples);

  std::string name() const override { return "api"; }
  GenerationResult generate(const KnowledgeGraph& partial,
                            const DecodeConfig& decode) const override;

  std::string prompt_for(const KnowledgeTuple& t) const;

 private:
  ApiEndpoint endpoint_;
  std::shared_ptr<const RelationRegistry> registry_;
  std::map<std::string, KnowledgeGraph> samples_;
};

}  // namespace kogito
