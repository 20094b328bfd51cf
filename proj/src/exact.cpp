#include "selcond/exact.hpp"

#include <string>
#include <vector>

#include "selcond/error.hpp"

namespace selcond {

namespace {

void guard_size(const BeliefNetwork& net) {
  if (net.size() > kMaxExactNodes) {
    throw Error(ErrorCode::NetworkTooLarge,
                "exact enumeration is limited to " +
                    std::to_string(kMaxExactNodes) + " nodes, network has " +
                    std::to_string(net.size()));
  }
}

// Calls f(full) for every completion of `partial`. Free nodes are taken in
// topological order and the completion counter runs with the last free
// node as its least significant bit, so the visiting order is fixed.
template <typename F>
void for_each_completion(const BeliefNetwork& net, const Assignment& partial,
                         F&& f) {
  std::vector<NodeIndex> free_nodes;
  for (NodeIndex i : net.topological_order()) {
    if (!partial.is_bound(i)) free_nodes.push_back(i);
  }
  Assignment full = partial;
  const std::uint64_t count = std::uint64_t{1} << free_nodes.size();
  for (std::uint64_t c = 0; c < count; ++c) {
    bind_instantiation(free_nodes, c, full);
    f(full);
  }
}

}  // namespace

OracleResult enumerate_marginal(const BeliefNetwork& net,
                                const Assignment& partial) {
  guard_size(net);
  if (partial.node_count() != net.size()) {
    throw Error(ErrorCode::InvalidArgument, "assignment size mismatch");
  }
  OracleResult out;
  for_each_completion(net, partial, [&](const Assignment& full) {
    out.value += joint_probability(net, full);
    ++out.enumerated_terms;
  });
  return out;
}

double exact_conditional(const BeliefNetwork& net, const Assignment& target,
                         const Assignment& evidence) {
  guard_size(net);
  if (!target.disjoint_from(evidence)) {
    throw Error(ErrorCode::OverlappingAssignments,
                "target and evidence bind a common node");
  }
  return exact_marginal(net, target.merged(evidence)) /
         exact_marginal(net, evidence);
}

Eigen::VectorXd exact_distribution_over(const BeliefNetwork& net,
                                        std::span<const NodeIndex> nodes) {
  guard_size(net);
  if (nodes.size() > kMaxExactSetSize) {
    throw Error(ErrorCode::NetworkTooLarge,
                "distribution over more than " +
                    std::to_string(kMaxExactSetSize) + " nodes");
  }
  Eigen::VectorXd dist =
      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(std::size_t{1} << nodes.size()));
  for_each_completion(net, Assignment(net.size()), [&](const Assignment& full) {
    dist[static_cast<Eigen::Index>(instantiation_index(nodes, full))] +=
        joint_probability(net, full);
  });
  return dist;
}

}  // namespace selcond
