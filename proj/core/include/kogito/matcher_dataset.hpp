#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "kogito/knowledge.hpp"
#include "kogito/relation.hpp"

namespace kogito {

// Label order used by every matcher output: physical, social, event.
inline constexpr std::array<RelationGroup, 3> kMatcherGroups = {
    RelationGroup::kPhysical, RelationGroup::kSocial, RelationGroup::kEvent};
inline constexpr std::size_t kNumGroups = kMatcherGroups.size();

// Multi-label target over the three matcher groups.
struct GroupLabels {
  bool physical = false;
  bool social = false;
  bool event = false;

  bool any() const { return physical || social || event; }
  bool has(RelationGroup g) const;
  void set(RelationGroup g, bool value = true);
  bool operator[](std::size_t i) const { return has(kMatcherGroups[i]); }
  std::size_t count() const { return physical + social + event; }
  friend bool operator==(const GroupLabels&, const GroupLabels&) = default;

  static GroupLabels all() { return {true, true, true}; }
};

// e.g. "event, social" in physical, social, event order.
std::string to_string(const GroupLabels& labels);

struct MatcherExample {
  std::string head;
  GroupLabels labels;
};

// Labeled heads; head texts are unique and non-empty.
class MatcherDataset {
 public:
  MatcherDataset() = default;
  // Throws ValidationError on empty or duplicate heads.
  explicit MatcherDataset(std::vector<MatcherExample> examples);

  void add(MatcherExample example);
  const std::vector<MatcherExample>& examples() const { return examples_; }
  std::size_t size() const { return examples_.size(); }
  bool empty() const { return examples_.empty(); }
  const MatcherExample& operator[](std::size_t i) const { return examples_[i]; }
  auto begin() const { return examples_.begin(); }
  auto end() const { return examples_.end(); }

  // Heads carrying each label, physical/social/event order.
  std::array<std::size_t, kNumGroups> label_counts() const;

 private:
  std::vector<MatcherExample> examples_;
  std::unordered_set<std::string> heads_;
};

// jsonl: {"head": str, "labels": ["physical"|"social"|"event", ...]}
MatcherDataset parse_matcher_dataset(std::istream& in);
MatcherDataset load_matcher_dataset(const std::filesystem::path& path);
void write_matcher_dataset(const MatcherDataset& ds, std::ostream& out);
void save_matcher_dataset(const MatcherDataset& ds,
                          const std::filesystem::path& path);

// One example per distinct head: a group is positive when the head is
// connected to any relation of that group. Tuples with relations outside
// the registry or in the custom group are ignored.
MatcherDataset build_matcher_dataset(const KnowledgeGraph& graph,
                                     const RelationRegistry& registry);

}  // namespace kogito
