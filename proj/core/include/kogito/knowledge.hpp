#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kogito {

// Subject of a knowledge tuple: an object ("hammer") or an event
// ("PersonX becomes a great basketball player").
class KnowledgeHead {
 public:
  // Throws ValidationError when `text` is blank.
  explicit KnowledgeHead(std::string text);

  const std::string& text() const { return text_; }

  friend bool operator==(const KnowledgeHead&, const KnowledgeHead&) = default;

 private:
  std::string text_;
};

// One (head, relation, tails) fact. Tails compare as a set: order and
// repetition do not affect equality.
class KnowledgeTuple {
 public:
  KnowledgeTuple(KnowledgeHead head, std::string relation,
                 std::vector<std::string> tails = {});

  const KnowledgeHead& head() const { return head_; }
  const std::string& relation() const { return relation_; }
  const std::vector<std::string>& tails() const { return tails_; }

  void set_tails(std::vector<std::string> tails) { tails_ = std::move(tails); }
  KnowledgeTuple without_tails() const { return {head_, relation_, {}}; }

  // Sorted, duplicate-free copy of the tails.
  std::vector<std::string> tail_set() const;

  friend bool operator==(const KnowledgeTuple& a, const KnowledgeTuple& b);

 private:
  KnowledgeHead head_;
  std::string relation_;
  std::vector<std::string> tails_;
};

struct KnowledgeTupleHash {
  std::size_t operator()(const KnowledgeTuple& t) const;
};

// Insertion-ordered collection of tuples. Storage keeps duplicates; the set
// operations treat the graph as a set under tuple equality and always return
// duplicate-free graphs.
class KnowledgeGraph {
 public:
  using const_iterator = std::vector<KnowledgeTuple>::const_iterator;

  KnowledgeGraph() = default;
  explicit KnowledgeGraph(std::vector<KnowledgeTuple> tuples)
      : tuples_(std::move(tuples)) {}
  KnowledgeGraph(std::initializer_list<KnowledgeTuple> tuples)
      : tuples_(tuples) {}

  void add(KnowledgeTuple t) { tuples_.push_back(std::move(t)); }

  const std::vector<KnowledgeTuple>& tuples() const { return tuples_; }
  std::vector<KnowledgeTuple>& tuples() { return tuples_; }
  std::size_t size() const { return tuples_.size(); }
  bool empty() const { return tuples_.empty(); }
  const KnowledgeTuple& operator[](std::size_t i) const { return tuples_[i]; }
  const_iterator begin() const { return tuples_.begin(); }
  const_iterator end() const { return tuples_.end(); }

  bool contains(const KnowledgeTuple& t) const;

  // First occurrence of each distinct tuple, in order.
  KnowledgeGraph deduplicated() const;

  // Set equality under tuple equality (ignores order and duplicates).
  bool set_equals(const KnowledgeGraph& other) const;

  // Sequence equality: same tuples in the same order.
  friend bool operator==(const KnowledgeGraph&, const KnowledgeGraph&) = default;

 private:
  std::vector<KnowledgeTuple> tuples_;
};

enum class SetOp { kUnion, kIntersection, kDifference };

// Result order follows `a`, then `b` for elements only in `b` (union).
KnowledgeGraph graph_set_op(SetOp op, const KnowledgeGraph& a,
                            const KnowledgeGraph& b);

inline KnowledgeGraph graph_union(const KnowledgeGraph& a,
                                  const KnowledgeGraph& b) {
  return graph_set_op(SetOp::kUnion, a, b);
}
inline KnowledgeGraph graph_intersection(const KnowledgeGraph& a,
                                         const KnowledgeGraph& b) {
  return graph_set_op(SetOp::kIntersection, a, b);
}
inline KnowledgeGraph graph_difference(const KnowledgeGraph& a,
                                       const KnowledgeGraph& b) {
  return graph_set_op(SetOp::kDifference, a, b);
}

inline KnowledgeGraph operator+(const KnowledgeGraph& a,
                                const KnowledgeGraph& b) {
  return graph_union(a, b);
}
inline KnowledgeGraph operator&(const KnowledgeGraph& a,
                                const KnowledgeGraph& b) {
  return graph_intersection(a, b);
}
inline KnowledgeGraph operator-(const KnowledgeGraph& a,
                                const KnowledgeGraph& b) {
  return graph_difference(a, b);
}

// True when every distinct tuple of `sub` is in `super`.
bool is_subset(const KnowledgeGraph& sub, const KnowledgeGraph& super);

}  // namespace kogito
