#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kogito/embedding.hpp"
#include "kogito/error.hpp"
#include "kogito/filter.hpp"
#include "kogito/head_extraction.hpp"
#include "kogito/knowledge.hpp"
#include "kogito/model.hpp"
#include "kogito/relation.hpp"
#include "kogito/relation_matching.hpp"
#include "kogito/swem.hpp"

namespace kogito {

enum class BackendKind { kStub, kApi };
enum class FilterKind { kOff, kEmbedding, kExternal };

std::string_view to_string(BackendKind kind);
BackendKind parse_backend_kind(std::string_view name);
std::string_view to_string(FilterKind kind);
FilterKind parse_filter_kind(std::string_view name);

struct PipelineConfig {
  ExtractorSet extractors = all_extractors();
  MatcherKind matcher = MatcherKind::kHeuristic;
  std::optional<std::filesystem::path> matcher_model;
  // Needed by the model matcher and the embedding filter.
  std::optional<std::filesystem::path> embeddings;
  std::optional<std::vector<std::string>> relations;
  std::optional<std::filesystem::path> relations_file;
  BackendKind backend = BackendKind::kStub;
  std::string stub_template = StubModel::kDefaultTemplate;
  std::string api_model;
  // Few-shot samples (graph file); tuples are grouped by relation.
  std::optional<std::filesystem::path> samples;
  DecodeConfig decode;
  FilterKind filter = FilterKind::kOff;
  double threshold = 0.5;
  bool fail_open = true;
  std::string scorer_url;
  bool dry_run = false;
  // Bypasses extraction when set.
  std::optional<std::vector<std::string>> heads;
  std::uint64_t seed = 0;
};

// Applies one key=value setting. Keys mirror the PipelineConfig fields;
// list values are comma-separated and `stop` understands \n, \t and \\.
// Throws ConfigurationError for unknown keys or malformed values.
void apply_config_entry(PipelineConfig& config, std::string_view key,
                        std::string_view value);

// Flat key=value document: one entry per line, '#' comments, blank lines
// ignored. Entries are applied on top of `base`.
PipelineConfig parse_pipeline_config(std::string_view text,
                                     PipelineConfig base = {});
PipelineConfig load_pipeline_config(const std::filesystem::path& path,
                                    PipelineConfig base = {});

// Failure inside a pipeline stage. Keeps the exit code and kind of the
// original error, which stays available through cause().
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause, std::exception_ptr ptr);
  const std::string& stage() const { return stage_; }
  ExitCode exit_code() const override { return exit_code_; }
  const char* kind() const override { return kind_.c_str(); }
  std::exception_ptr cause() const { return cause_; }

 private:
  std::string stage_;
  ExitCode exit_code_;
  std::string kind_;
  std::exception_ptr cause_;
};

struct InferResult {
  KnowledgeGraph graph;
  std::vector<ExtractedHead> heads;  // empty when heads were given
  std::vector<GenerationDiagnostic> diagnostics;
  std::vector<RelevanceJudgment> judgments;  // empty unless filtering ran
};

// Extract -> match -> generate -> filter with the resources resolved once.
class Pipeline {
 public:
  // Loads every file the configuration names. Backends and scorers are
  // only built when the run can reach them (never under dry_run).
  explicit Pipeline(PipelineConfig config);

  // Injection points for tests and embedders.
  void set_model(std::shared_ptr<const KnowledgeModel> model);
  void set_scorer(std::shared_ptr<const RelevanceScorer> scorer);

  const PipelineConfig& config() const { return config_; }
  const RelationRegistry& registry() const { return *registry_; }

  // Throws StageError naming the failing stage. An empty head set gives
  // an empty graph.
  InferResult run(std::string_view text) const;

 private:
  PipelineConfig config_;
  std::shared_ptr<RelationRegistry> registry_;
  std::shared_ptr<const EmbeddingTable> embeddings_;
  std::optional<SwemMatcher> matcher_;
  std::shared_ptr<const KnowledgeModel> model_;
  std::shared_ptr<const RelevanceScorer> scorer_;
};

KnowledgeGraph infer(std::string_view text, const PipelineConfig& config);

}  // namespace kogito
