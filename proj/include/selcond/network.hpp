#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace selcond {

/// Position of a node in declaration order. Names live in the network.
using NodeIndex = std::size_t;

/// Conditional probability table of a binary node.
///
/// `rows[r]` is Pr[node = 1 | parents = r], where r is the binary number
/// formed by the parent values with `parents.front()` as the most
/// significant bit. A prior node has no parents and a single row.
struct Cpt {
  std::vector<NodeIndex> parents;
  std::vector<double> rows;

  friend bool operator==(const Cpt&, const Cpt&) = default;
};

class Assignment;

/// Immutable DAG of binary nodes. Validated on construction; the
/// topological order and child lists are cached.
class BeliefNetwork {
 public:
  /// Throws ParseError (DuplicateNode, UndeclaredParent, WrongRowCount,
  /// ProbabilityOutOfRange, CycleDetected) when the parts do not form a
  /// valid network.
  BeliefNetwork(std::string name, std::vector<std::string> node_names,
                std::vector<Cpt> cpts);

  const std::string& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return names_.size(); }

  const std::string& node_name(NodeIndex i) const { return names_.at(i); }
  std::optional<NodeIndex> find(std::string_view name) const;
  /// Like find() but throws Error(UnknownNode).
  NodeIndex index_of(std::string_view name) const;

  const Cpt& cpt(NodeIndex i) const { return cpts_.at(i); }
  std::span<const NodeIndex> parents(NodeIndex i) const {
    return cpts_.at(i).parents;
  }
  std::span<const NodeIndex> children(NodeIndex i) const {
    return children_.at(i);
  }
  bool is_prior(NodeIndex i) const { return cpts_.at(i).parents.empty(); }

  std::span<const NodeIndex> topological_order() const noexcept {
    return topo_;
  }

  friend bool operator==(const BeliefNetwork& a, const BeliefNetwork& b) {
    return a.name_ == b.name_ && a.names_ == b.names_ && a.cpts_ == b.cpts_;
  }

 private:
  std::string name_;
  std::vector<std::string> names_;
  std::vector<Cpt> cpts_;
  std::vector<std::vector<NodeIndex>> children_;
  std::vector<NodeIndex> topo_;
};

/// Partial or full binding of nodes to {0, 1}, sized to one network.
class Assignment {
 public:
  static constexpr std::int8_t kUnbound = -1;

  Assignment() = default;
  explicit Assignment(std::size_t node_count)
      : values_(node_count, kUnbound) {}

  std::size_t node_count() const noexcept { return values_.size(); }

  bool is_bound(NodeIndex i) const { return values_.at(i) != kUnbound; }
  int value(NodeIndex i) const { return values_.at(i); }
  /// Raw value without bounds check; kUnbound when unbound.
  std::int8_t operator[](NodeIndex i) const noexcept { return values_[i]; }

  Assignment& bind(NodeIndex i, int v);
  Assignment& unbind(NodeIndex i);

  std::size_t bound_count() const noexcept;
  bool is_full() const noexcept { return bound_count() == values_.size(); }
  bool empty() const noexcept { return bound_count() == 0; }
  std::vector<NodeIndex> bound_nodes() const;

  /// True iff every node bound in `other` carries the same value here.
  bool agrees_with(const Assignment& other) const;
  bool disjoint_from(const Assignment& other) const;
  /// Union of two assignments; throws Error(ConflictingBinding) when they
  /// bind a node to different values.
  Assignment merged(const Assignment& other) const;

  std::span<const std::int8_t> values() const noexcept { return values_; }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<std::int8_t> values_;
};

/// Parses the `.bnet` text format. Throws ParseError.
BeliefNetwork parse_network(std::string_view text);
/// Reads and parses a `.bnet` file; a missing file is a SyntaxError at line 0.
BeliefNetwork load_network(const std::string& path);
std::string serialize_network(const BeliefNetwork& net);

/// Parses `Name=0,Other=1`. Duplicate or conflicting names throw
/// Error(ConflictingBinding); unknown names Error(UnknownNode); anything
/// else malformed Error(InvalidArgument). An empty string is the empty
/// assignment.
Assignment parse_assignment(const BeliefNetwork& net, std::string_view text);
std::string format_assignment(const BeliefNetwork& net, const Assignment& a);

/// Row of `node`'s CPT selected by the parent values in `a`. All parents
/// must be bound (Error(MissingParentBinding) otherwise).
std::size_t cpt_row_index(const BeliefNetwork& net, NodeIndex node,
                          const Assignment& a);

double conditional_row(const BeliefNetwork& net, NodeIndex node,
                       int node_value, const Assignment& parent_assignment);

/// Product of the conditional probabilities; `full` must bind every node.
double joint_probability(const BeliefNetwork& net, const Assignment& full);

/// Index of the instantiation of `nodes` found in `a`, first node most
/// significant. Every node must be bound.
std::size_t instantiation_index(std::span<const NodeIndex> nodes,
                                const Assignment& a);
/// Binds `nodes` in `a` to the instantiation numbered `index`.
void bind_instantiation(std::span<const NodeIndex> nodes, std::size_t index,
                        Assignment& a);

}  // namespace selcond
