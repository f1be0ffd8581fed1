#include "kogito/relation.hpp"

#include <array>
#include <fstream>
#include <sstream>
#include <utility>

#include <nlohmann/json.hpp>

#include "kogito/error.hpp"

namespace kogito {
namespace {

enum class Slot { kLiteral, kHead, kTail, kIndex, kSubject, kRelation };

struct Segment {
  Slot slot;
  std::string literal;
};

std::vector<Segment> compile_template(const std::string& pattern) {
  std::vector<Segment> out;
  std::string literal;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i] != '{') {
      literal.push_back(pattern[i]);
      continue;
    }
    const auto close = pattern.find('}', i);
    if (close == std::string::npos)
      throw ValidationError("unterminated placeholder in template: " + pattern);
    const std::string name = pattern.substr(i + 1, close - i - 1);
    Slot slot;
    if (name == "head") slot = Slot::kHead;
    else if (name == "tail") slot = Slot::kTail;
    else if (name == "index") slot = Slot::kIndex;
    else if (name == "subject") slot = Slot::kSubject;
    else if (name == "relation") slot = Slot::kRelation;
    else throw ValidationError("unknown template placeholder {" + name + "}");
    if (!literal.empty()) out.push_back({Slot::kLiteral, std::move(literal)});
    literal.clear();
    out.push_back({slot, {}});
    i = close;
  }
  if (!literal.empty()) out.push_back({Slot::kLiteral, std::move(literal)});
  return out;
}

std::string_view first_word(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_first_of(" \t\n", b);
  return s.substr(b, e == std::string_view::npos ? s.npos : e - b);
}

void rstrip(std::string& s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
}

struct BuiltinRelation {
  const char* name;
  RelationGroup group;
  const char* pattern;
};

// ATOMIC2020 inventory with the Physical / Event / Social grouping.
constexpr std::array<BuiltinRelation, 23> kAtomic2020 = {{
    {"ObjectUse", RelationGroup::kPhysical, "{head} is used for"},
    {"AtLocation", RelationGroup::kPhysical, "{head} is located at"},
    {"MadeUpOf", RelationGroup::kPhysical, "{head} is made up of"},
    {"HasProperty", RelationGroup::kPhysical, "{head} is"},
    {"CapableOf", RelationGroup::kPhysical, "{head} can"},
    {"Desires", RelationGroup::kPhysical, "{head} desires"},
    {"NotDesires", RelationGroup::kPhysical, "{head} does not desire"},
    {"isAfter", RelationGroup::kEvent, "{head}. Before that,"},
    {"HasSubEvent", RelationGroup::kEvent, "{head}. This includes"},
    {"isBefore", RelationGroup::kEvent, "{head}. After that,"},
    {"HinderedBy", RelationGroup::kEvent, "{head}. This would not happen if"},
    {"Causes", RelationGroup::kEvent, "{head}. This causes"},
    {"xReason", RelationGroup::kEvent, "{head}. This is because"},
    {"isFilledBy", RelationGroup::kEvent, "{head}. The blank can be filled by"},
    {"xNeed", RelationGroup::kSocial, "{head}. Before, PersonX needs"},
    {"xAttr", RelationGroup::kSocial, "{head}. PersonX is seen as"},
    {"xEffect", RelationGroup::kSocial, "{head}. As a result, PersonX"},
    {"xReact", RelationGroup::kSocial, "{head}. As a result, PersonX feels"},
    {"xWant", RelationGroup::kSocial, "{head}. After, PersonX wants"},
    {"xIntent", RelationGroup::kSocial, "{head}. PersonX did this because they wanted"},
    {"oEffect", RelationGroup::kSocial, "{head}. As a result, others"},
    {"oReact", RelationGroup::kSocial, "{head}. As a result, others feel"},
    {"oWant", RelationGroup::kSocial, "{head}. After, others want"},
}};

// ConceptNet relations not already named by ATOMIC2020. Object-centric
// relations join the physical group; sub-event, prerequisite and motivation
// relations join the event group.
constexpr std::array<BuiltinRelation, 20> kConceptNet = {{
    {"UsedFor", RelationGroup::kPhysical, "{head} is used for"},
    {"IsA", RelationGroup::kPhysical, "{head} is a"},
    {"PartOf", RelationGroup::kPhysical, "{head} is part of"},
    {"HasA", RelationGroup::kPhysical, "{head} has"},
    {"MadeOf", RelationGroup::kPhysical, "{head} is made of"},
    {"LocatedNear", RelationGroup::kPhysical, "{head} is located near"},
    {"ReceivesAction", RelationGroup::kPhysical, "{head} can be"},
    {"CreatedBy", RelationGroup::kPhysical, "{head} is created by"},
    {"DefinedAs", RelationGroup::kPhysical, "{head} is defined as"},
    {"SymbolOf", RelationGroup::kPhysical, "{head} is a symbol of"},
    {"InstanceOf", RelationGroup::kPhysical, "{head} is an instance of"},
    {"NotCapableOf", RelationGroup::kPhysical, "{head} cannot"},
    {"NotHasProperty", RelationGroup::kPhysical, "{head} is not"},
    {"RelatedTo", RelationGroup::kPhysical, "{head} is related to"},
    {"HasSubevent", RelationGroup::kEvent, "{head}. This includes"},
    {"HasFirstSubevent", RelationGroup::kEvent, "{head}. This begins with"},
    {"HasLastSubevent", RelationGroup::kEvent, "{head}. This ends with"},
    {"HasPrerequisite", RelationGroup::kEvent, "{head}. This requires"},
    {"MotivatedByGoal", RelationGroup::kEvent, "{head}. This is motivated by"},
    {"CausesDesire", RelationGroup::kEvent, "{head}. This makes someone want"},
}};

}  // namespace

std::string_view to_string(RelationGroup group) {
  switch (group) {
    case RelationGroup::kPhysical: return "physical";
    case RelationGroup::kSocial: return "social";
    case RelationGroup::kEvent: return "event";
    case RelationGroup::kCustom: return "custom";
  }
  return "custom";
}

RelationGroup parse_relation_group(std::string_view name) {
  if (name == "physical") return RelationGroup::kPhysical;
  if (name == "social") return RelationGroup::kSocial;
  if (name == "event") return RelationGroup::kEvent;
  if (name == "custom") return RelationGroup::kCustom;
  throw ValidationError("unknown relation group: " + std::string(name));
}

Verbalizer template_verbalizer(std::string pattern) {
  auto segments = compile_template(pattern);
  bool has_tail = false;
  for (const auto& s : segments) has_tail |= s.slot == Slot::kTail;
  return [segments = std::move(segments), has_tail](const VerbalizerInput& in) {
    std::string out;
    for (const auto& s : segments) {
      switch (s.slot) {
        case Slot::kLiteral: out += s.literal; break;
        case Slot::kHead: out += in.head; break;
        case Slot::kTail: if (in.tail) out += *in.tail; break;
        case Slot::kIndex: if (in.index) out += std::to_string(*in.index); break;
        case Slot::kSubject: out += first_word(in.head); break;
        case Slot::kRelation: out += in.relation; break;
      }
    }
    if (!in.tail) {
      rstrip(out);
    } else if (!has_tail) {
      out += ' ';
      out += *in.tail;
    }
    return out;
  };
}

KnowledgeRelation::KnowledgeRelation(std::string name, RelationGroup group,
                                     Verbalizer verbalizer,
                                     std::optional<std::string> instruction,
                                     RelationSource source)
    : name_(std::move(name)),
      group_(group),
      source_(source),
      verbalizer_(verbalizer ? std::move(verbalizer)
                             : template_verbalizer(std::string(kDefaultTemplate))),
      instruction_(std::move(instruction)) {
  if (name_.empty()) throw ValidationError("relation name is empty");
}

KnowledgeRelation KnowledgeRelation::from_template(
    std::string name, RelationGroup group, std::string pattern,
    std::optional<std::string> instruction, RelationSource source) {
  return KnowledgeRelation(std::move(name), group,
                           template_verbalizer(std::move(pattern)),
                           std::move(instruction), source);
}

std::string KnowledgeRelation::verbalize(std::string_view head,
                                         std::optional<std::string_view> tail,
                                         std::optional<int> index) const {
  if (first_word(head).empty())
    throw ValidationError("cannot verbalize an empty head");
  return verbalizer_(VerbalizerInput{head, name_, tail, index});
}

std::string verbalize(const KnowledgeRelation& rel, std::string_view head,
                      std::optional<std::string_view> tail,
                      std::optional<int> index) {
  return rel.verbalize(head, tail, index);
}

RelationRegistry RelationRegistry::builtin() {
  RelationRegistry reg;
  for (const auto& r : kAtomic2020)
    reg.register_relation(KnowledgeRelation::from_template(
        r.name, r.group, r.pattern, std::nullopt, RelationSource::kAtomic2020));
  for (const auto& r : kConceptNet)
    reg.register_relation(KnowledgeRelation::from_template(
        r.name, r.group, r.pattern, std::nullopt, RelationSource::kConceptNet));
  return reg;
}

void RelationRegistry::register_relation(KnowledgeRelation rel) {
  if (index_.contains(rel.name()))
    throw ConflictError("relation already registered: " + rel.name());
  index_.emplace(rel.name(), relations_.size());
  relations_.push_back(std::move(rel));
}

bool RelationRegistry::contains(std::string_view name) const {
  return index_.contains(std::string(name));
}

const KnowledgeRelation* RelationRegistry::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : &relations_[it->second];
}

const KnowledgeRelation& RelationRegistry::at(std::string_view name) const {
  if (const auto* rel = find(name)) return *rel;
  throw ValidationError("unknown relation: " + std::string(name));
}

std::vector<std::string> RelationRegistry::names() const {
  std::vector<std::string> out;
  out.reserve(relations_.size());
  for (const auto& r : relations_) out.push_back(r.name());
  return out;
}

std::vector<std::string> RelationRegistry::group_members(
    RelationGroup group) const {
  std::vector<std::string> out;
  for (const auto& r : relations_)
    if (r.group() == group) out.push_back(r.name());
  return out;
}

std::vector<std::string> RelationRegistry::default_candidates() const {
  std::vector<std::string> out;
  for (const auto& r : relations_)
    if (r.source() != RelationSource::kConceptNet) out.push_back(r.name());
  return out;
}

RelationRegistry register_relation(RelationRegistry registry,
                                   KnowledgeRelation rel) {
  registry.register_relation(std::move(rel));
  return registry;
}

std::string build_few_shot_prompt(const KnowledgeRelation& rel,
                                  const KnowledgeGraph& samples,
                                  const KnowledgeHead& query_head) {
  if (samples.empty())
    throw ValidationError("few-shot prompt needs at least one sample");
  std::string prompt;
  if (rel.instruction()) prompt = *rel.instruction() + '\n';
  int index = 1;
  for (const auto& t : samples) {
    if (t.relation() != rel.name())
      throw ValidationError("sample uses relation " + t.relation() +
                            ", expected " + rel.name());
    if (t.tails().empty())
      throw ValidationError("sample \"" + t.head().text() + "\" has no tail");
    prompt += rel.verbalize(t.head().text(), t.tails().front(), index++);
    prompt += '\n';
  }
  prompt += rel.verbalize(query_head.text(), std::nullopt, index);
  return prompt;
}

std::vector<KnowledgeRelation> parse_relations_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("invalid relations file: ") + e.what());
  }
  const nlohmann::json& list =
      doc.is_object() && doc.contains("relations") ? doc["relations"] : doc;
  if (!list.is_array())
    throw ValidationError("relations file must hold a list of relations");
  std::vector<KnowledgeRelation> out;
  try {
  for (const auto& item : list) {
    if (!item.is_object() || !item.contains("name") ||
        !item["name"].is_string())
      throw ValidationError("relation entry needs a string \"name\"");
    const auto group = parse_relation_group(item.value("group", "custom"));
    std::optional<std::string> instruction;
    if (item.contains("instruction") && item["instruction"].is_string())
      instruction = item["instruction"].get<std::string>();
    out.push_back(KnowledgeRelation::from_template(
        item["name"].get<std::string>(), group,
        item.value("template", std::string(kDefaultTemplate)), instruction));
  }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("invalid relation entry: ") + e.what());
  }
  return out;
}

std::vector<KnowledgeRelation> load_relations_file(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_relations_json(buf.str());
}

}  // namespace kogito
