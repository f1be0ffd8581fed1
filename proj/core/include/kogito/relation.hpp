#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kogito/knowledge.hpp"

namespace kogito {

enum class RelationGroup { kPhysical, kSocial, kEvent, kCustom };

// Where a relation comes from. ConceptNet relations are registered but are
// not part of the default matching candidates.
enum class RelationSource { kAtomic2020, kConceptNet, kCustom };

std::string_view to_string(RelationGroup group);
// Throws ValidationError on unknown names.
RelationGroup parse_relation_group(std::string_view name);

struct VerbalizerInput {
  std::string_view head;
  std::string_view relation;
  std::optional<std::string_view> tail;
  std::optional<int> index;
};

using Verbalizer = std::function<std::string(const VerbalizerInput&)>;

// Builds a verbalizer from a template with {head}, {tail}, {index},
// {subject} (first word of the head) and {relation} placeholders. When the
// template has no {tail} placeholder a present tail is appended after a
// single space. Throws ValidationError on unknown placeholders.
Verbalizer template_verbalizer(std::string pattern);

inline constexpr std::string_view kDefaultTemplate = "{head} {relation} {tail}";

class KnowledgeRelation {
 public:
  KnowledgeRelation(std::string name, RelationGroup group,
                    Verbalizer verbalizer = {},
                    std::optional<std::string> instruction = std::nullopt,
                    RelationSource source = RelationSource::kCustom);

  static KnowledgeRelation from_template(
      std::string name, RelationGroup group, std::string pattern,
      std::optional<std::string> instruction = std::nullopt,
      RelationSource source = RelationSource::kCustom);

  const std::string& name() const { return name_; }
  RelationGroup group() const { return group_; }
  RelationSource source() const { return source_; }
  const std::optional<std::string>& instruction() const { return instruction_; }

  std::string verbalize(std::string_view head,
                        std::optional<std::string_view> tail = std::nullopt,
                        std::optional<int> index = std::nullopt) const;

 private:
  std::string name_;
  RelationGroup group_;
  RelationSource source_;
  Verbalizer verbalizer_;
  std::optional<std::string> instruction_;
};

// Free-function form of KnowledgeRelation::verbalize. Throws
// ValidationError for a blank head.
std::string verbalize(const KnowledgeRelation& rel, std::string_view head,
                      std::optional<std::string_view> tail = std::nullopt,
                      std::optional<int> index = std::nullopt);

// Name-unique, insertion-ordered relation inventory. Built once, then shared
// read-only.
class RelationRegistry {
 public:
  RelationRegistry() = default;

  // The 23 ATOMIC2020 relations followed by the ConceptNet relations.
  static RelationRegistry builtin();

  // Throws ConflictError when the name is taken.
  void register_relation(KnowledgeRelation rel);

  bool contains(std::string_view name) const;
  const KnowledgeRelation* find(std::string_view name) const;
  // Throws ValidationError for unknown names.
  const KnowledgeRelation& at(std::string_view name) const;

  const std::vector<KnowledgeRelation>& relations() const { return relations_; }
  std::size_t size() const { return relations_.size(); }
  bool empty() const { return relations_.empty(); }

  std::vector<std::string> names() const;
  std::vector<std::string> group_members(RelationGroup group) const;
  // ATOMIC2020 and custom relations, registry order.
  std::vector<std::string> default_candidates() const;

 private:
  std::vector<KnowledgeRelation> relations_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Returns a copy of `registry` with `rel` added.
RelationRegistry register_relation(RelationRegistry registry,
                                   KnowledgeRelation rel);

// Instruction line, one verbalized line per sample ("Situation 1" ...,
// first tail only), then the query head with the next index and no tail.
// Lines are joined by '\n' with no trailing newline.
std::string build_few_shot_prompt(const KnowledgeRelation& rel,
                                  const KnowledgeGraph& samples,
                                  const KnowledgeHead& query_head);

// Loads custom relations from JSON: either a list or {"relations": [...]}
// of {"name", "group", "template", "instruction"} objects.
std::vector<KnowledgeRelation> parse_relations_json(std::string_view text);
std::vector<KnowledgeRelation> load_relations_file(
    const std::filesystem::path& path);

}  // namespace kogito
