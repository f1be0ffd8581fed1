#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kogito/head_extraction.hpp"
#include "kogito/knowledge.hpp"
#include "kogito/matcher_dataset.hpp"
#include "kogito/relation.hpp"
#include "kogito/swem.hpp"

namespace kogito {

enum class MatcherKind { kBase, kHeuristic, kModel };

std::string_view to_string(MatcherKind kind);
MatcherKind parse_matcher_kind(std::string_view name);

// A head with an optional form already known from extraction.
struct HeadInput {
  KnowledgeHead head;
  std::optional<HeadForm> form;
};

struct HeadRelationPair {
  KnowledgeHead head;
  std::string relation;
  friend bool operator==(const HeadRelationPair&, const HeadRelationPair&) = default;
};

struct MatchOptions {
  MatcherKind kind = MatcherKind::kHeuristic;
  // Restricts (and may extend to ConceptNet) the candidate relations.
  // Defaults to RelationRegistry::default_candidates().
  std::optional<std::vector<std::string>> subset;
  // Required for MatcherKind::kModel.
  const SwemMatcher* model = nullptr;
};

// Physical for noun phrases; social and event for sentences and verb
// phrases.
GroupLabels heuristic_groups(const KnowledgeHead& head,
                             std::optional<HeadForm> form = std::nullopt);

// Groups chosen by the configured matcher for one head. The model matcher
// falls back to the heuristic when no group clears the threshold.
GroupLabels matched_groups(const HeadInput& head, const MatchOptions& options);

// Pairs in head order, then registry order; duplicate pairs are dropped.
// Base pairs every candidate; heuristic and model pair the candidates in
// the matched groups. Throws ValidationError for an empty registry or an
// unknown subset name, ConfigurationError when the model matcher has no
// model.
std::vector<HeadRelationPair> match_relations(const std::vector<HeadInput>& heads,
                                              const RelationRegistry& registry,
                                              const MatchOptions& options);
std::vector<HeadRelationPair> match_relations(
    const std::vector<KnowledgeHead>& heads, const RelationRegistry& registry,
    const MatchOptions& options);

// (head, relation, []) tuples for the generation stage.
KnowledgeGraph pairs_to_graph(const std::vector<HeadRelationPair>& pairs);

}  // namespace kogito
