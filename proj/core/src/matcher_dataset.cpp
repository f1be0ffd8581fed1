#include "kogito/matcher_dataset.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "kogito/error.hpp"
#include "kogito/text.hpp"

namespace kogito {

bool GroupLabels::has(RelationGroup g) const {
  switch (g) {
    case RelationGroup::kPhysical: return physical;
    case RelationGroup::kSocial: return social;
    case RelationGroup::kEvent: return event;
    case RelationGroup::kCustom: return false;
  }
  return false;
}

void GroupLabels::set(RelationGroup g, bool value) {
  switch (g) {
    case RelationGroup::kPhysical: physical = value; break;
    case RelationGroup::kSocial: social = value; break;
    case RelationGroup::kEvent: event = value; break;
    case RelationGroup::kCustom: break;
  }
}

std::string to_string(const GroupLabels& labels) {
  std::string out;
  for (auto g : kMatcherGroups) {
    if (!labels.has(g)) continue;
    if (!out.empty()) out += ", ";
    out += to_string(g);
  }
  return out;
}

MatcherDataset::MatcherDataset(std::vector<MatcherExample> examples) {
  examples_.reserve(examples.size());
  for (auto& e : examples) add(std::move(e));
}

void MatcherDataset::add(MatcherExample example) {
  if (text::trim(example.head).empty())
    throw ValidationError("matcher example with empty head");
  if (!example.labels.any())
    throw ValidationError("matcher example without labels: " + example.head);
  if (!heads_.insert(example.head).second)
    throw ValidationError("duplicate matcher head: " + example.head);
  examples_.push_back(std::move(example));
}

std::array<std::size_t, kNumGroups> MatcherDataset::label_counts() const {
  std::array<std::size_t, kNumGroups> counts{};
  for (const auto& e : examples_)
    for (std::size_t g = 0; g < kNumGroups; ++g) counts[g] += e.labels[g];
  return counts;
}

MatcherDataset parse_matcher_dataset(std::istream& in) {
  std::vector<MatcherExample> examples;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      const auto obj = nlohmann::json::parse(line);
      MatcherExample ex{obj.at("head").get<std::string>(), {}};
      for (const auto& label : obj.at("labels")) {
        const auto g = parse_relation_group(label.get<std::string>());
        if (g == RelationGroup::kCustom)
          throw ValidationError("label must be physical, social or event");
        ex.labels.set(g);
      }
      if (!ex.labels.any()) throw ValidationError("example has no labels");
      examples.push_back(std::move(ex));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(lineno, e.what());
    } catch (const ValidationError& e) {
      throw ParseError(lineno, e.what());
    }
  }
  return MatcherDataset(std::move(examples));
}

MatcherDataset load_matcher_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_matcher_dataset(in);
}

void write_matcher_dataset(const MatcherDataset& ds, std::ostream& out) {
  for (const auto& e : ds) {
    nlohmann::ordered_json obj;
    obj["head"] = e.head;
    obj["labels"] = nlohmann::json::array();
    for (auto g : kMatcherGroups)
      if (e.labels.has(g)) obj["labels"].push_back(std::string(to_string(g)));
    out << obj.dump() << '\n';
  }
  if (!out) throw IoError("failed to write matcher dataset");
}

void save_matcher_dataset(const MatcherDataset& ds,
                          const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_matcher_dataset(ds, out);
}

MatcherDataset build_matcher_dataset(const KnowledgeGraph& graph,
                                     const RelationRegistry& registry) {
  std::vector<MatcherExample> examples;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& t : graph) {
    const auto* rel = registry.find(t.relation());
    if (rel == nullptr || rel->group() == RelationGroup::kCustom) continue;
    auto [it, inserted] = index.emplace(t.head().text(), examples.size());
    if (inserted) examples.push_back({t.head().text(), {}});
    examples[it->second].labels.set(rel->group());
  }
  return MatcherDataset(std::move(examples));
}

}  // namespace kogito
