#include "kogito/relation_matching.hpp"

#include <unordered_set>

#include "kogito/error.hpp"

namespace kogito {

std::string_view to_string(MatcherKind kind) {
  switch (kind) {
    case MatcherKind::kBase: return "base";
    case MatcherKind::kHeuristic: return "heuristic";
    case MatcherKind::kModel: return "model";
  }
  return "base";
}

MatcherKind parse_matcher_kind(std::string_view name) {
  if (name == "base") return MatcherKind::kBase;
  if (name == "heuristic") return MatcherKind::kHeuristic;
  if (name == "model") return MatcherKind::kModel;
  throw UsageError("unknown matcher: " + std::string(name));
}

GroupLabels heuristic_groups(const KnowledgeHead& head,
                             std::optional<HeadForm> form) {
  const HeadForm f = form ? *form : classify_head_form(head);
  if (f == HeadForm::kNounPhrase) return {true, false, false};
  return {false, true, true};
}

GroupLabels matched_groups(const HeadInput& head, const MatchOptions& options) {
  switch (options.kind) {
    case MatcherKind::kBase:
      return GroupLabels::all();
    case MatcherKind::kHeuristic:
      return heuristic_groups(head.head, head.form);
    case MatcherKind::kModel: {
      if (options.model == nullptr)
        throw ConfigurationError("model matcher selected but no model loaded");
      const GroupLabels labels = options.model->predict_labels(head.head);
      return labels.any() ? labels : heuristic_groups(head.head, head.form);
    }
  }
  return {};
}

std::vector<HeadRelationPair> match_relations(const std::vector<HeadInput>& heads,
                                              const RelationRegistry& registry,
                                              const MatchOptions& options) {
  if (registry.empty()) throw ValidationError("relation registry is empty");
  if (options.kind == MatcherKind::kModel && options.model == nullptr)
    throw ConfigurationError("model matcher selected but no model loaded");

  std::vector<const KnowledgeRelation*> candidates;
  if (options.subset) {
    std::unordered_set<std::string> wanted;
    for (const auto& name : *options.subset) {
      if (!registry.contains(name))
        throw ValidationError("relation not in registry: " + name);
      wanted.insert(name);
    }
    for (const auto& r : registry.relations())
      if (wanted.contains(r.name())) candidates.push_back(&r);
  } else {
    for (const auto& name : registry.default_candidates())
      candidates.push_back(registry.find(name));
  }

  std::vector<HeadRelationPair> out;
  std::unordered_set<std::string> seen;
  for (const auto& h : heads) {
    const GroupLabels groups = matched_groups(h, options);
    for (const auto* rel : candidates) {
      // Custom relations carry no matching group; they go with every head.
      const bool take = options.kind == MatcherKind::kBase ||
                        rel->group() == RelationGroup::kCustom || groups.has(rel->group());
      if (!take) continue;
      std::string key = h.head.text();
      key.push_back('\0');
      key += rel->name();
      if (seen.insert(std::move(key)).second) out.push_back({h.head, rel->name()});
    }
  }
  return out;
}

std::vector<HeadRelationPair> match_relations(
    const std::vector<KnowledgeHead>& heads, const RelationRegistry& registry,
    const MatchOptions& options) {
  std::vector<HeadInput> inputs;
  inputs.reserve(heads.size());
  for (const auto& h : heads) inputs.push_back({h, std::nullopt});
  return match_relations(inputs, registry, options);
}

KnowledgeGraph pairs_to_graph(const std::vector<HeadRelationPair>& pairs) {
  KnowledgeGraph g;
  for (const auto& p : pairs) g.add(KnowledgeTuple(p.head, p.relation));
  return g;
}

}  // namespace kogito
