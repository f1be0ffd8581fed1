#include "kogito/knowledge.hpp"

#include <algorithm>
#include <functional>
#include <unordered_set>

#include "kogito/error.hpp"

namespace kogito {
namespace {

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
  });
}

void hash_combine(std::size_t& seed, std::size_t value) {
  seed ^= value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

using TupleSet = std::unordered_set<KnowledgeTuple, KnowledgeTupleHash>;

TupleSet to_set(const KnowledgeGraph& g) {
  return TupleSet(g.begin(), g.end());
}

}  // namespace

KnowledgeHead::KnowledgeHead(std::string text) : text_(std::move(text)) {
  if (is_blank(text_)) throw ValidationError("knowledge head is empty");
}

KnowledgeTuple::KnowledgeTuple(KnowledgeHead head, std::string relation,
                               std::vector<std::string> tails)
    : head_(std::move(head)),
      relation_(std::move(relation)),
      tails_(std::move(tails)) {
  if (relation_.empty()) throw ValidationError("relation name is empty");
}

std::vector<std::string> KnowledgeTuple::tail_set() const {
  std::vector<std::string> s = tails_;
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

bool operator==(const KnowledgeTuple& a, const KnowledgeTuple& b) {
  if (a.head_ != b.head_ || a.relation_ != b.relation_) return false;
  if (a.tails_ == b.tails_) return true;
  return a.tail_set() == b.tail_set();
}

std::size_t KnowledgeTupleHash::operator()(const KnowledgeTuple& t) const {
  std::hash<std::string> h;
  std::size_t seed = h(t.head().text());
  hash_combine(seed, h(t.relation()));
  for (const auto& tail : t.tail_set()) hash_combine(seed, h(tail));
  return seed;
}

bool KnowledgeGraph::contains(const KnowledgeTuple& t) const {
  return std::find(tuples_.begin(), tuples_.end(), t) != tuples_.end();
}

KnowledgeGraph KnowledgeGraph::deduplicated() const {
  TupleSet seen;
  KnowledgeGraph out;
  for (const auto& t : tuples_) {
    if (seen.insert(t).second) out.add(t);
  }
  return out;
}

bool KnowledgeGraph::set_equals(const KnowledgeGraph& other) const {
  return to_set(*this) == to_set(other);
}

KnowledgeGraph graph_set_op(SetOp op, const KnowledgeGraph& a,
                            const KnowledgeGraph& b) {
  const TupleSet in_b = to_set(b);
  TupleSet emitted;
  KnowledgeGraph out;
  for (const auto& t : a) {
    const bool keep = op == SetOp::kUnion ||
                      (op == SetOp::kIntersection) == in_b.contains(t);
    if (keep && emitted.insert(t).second) out.add(t);
  }
  if (op == SetOp::kUnion) {
    for (const auto& t : b) {
      if (emitted.insert(t).second) out.add(t);
    }
  }
  return out;
}

bool is_subset(const KnowledgeGraph& sub, const KnowledgeGraph& super) {
  const TupleSet s = to_set(super);
  return std::all_of(sub.begin(), sub.end(),
                     [&](const KnowledgeTuple& t) { return s.contains(t); });
}

}  // namespace kogito
