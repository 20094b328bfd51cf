#pragma once

#include <span>
#include <vector>

#include "selcond/network.hpp"

namespace selcond {

/// Extremes of Pr[node = value | parents] over the parent configurations
/// consistent with the bound parents.
struct NodeBounds {
  double lo = 1.0;
  double hi = 0.0;
};

struct NodeDependence {
  NodeBounds bounds;  // for node value 1
  double lambda = 1.0;
};

struct DependenceReport {
  std::vector<NodeDependence> per_node;
  double dependence_value = 1.0;  // product of squared lambdas
  Assignment conditioning;        // evidence plus any conditioning nodes
};

/// Inputs to the runtime model 2^|S| D^4 + 2^|S| / phi_min.
struct CostEstimate {
  double subproblem_term = 1.0;
  double weight_term = 1.0;
  double phi_min_bound = 1.0;
};

NodeBounds node_bounds(const BeliefNetwork& net, NodeIndex node,
                       int node_value, const Assignment& fixed);

/// Ratio of extreme conditional probabilities of `node` given `fixed`:
///  - unbound node: max(hi/lo, (1-lo)/(1-hi));
///  - bound to 1: hi/lo; bound to 0: (1-lo)/(1-hi);
///  - prior node, or every parent bound: 1.
double lambda(const BeliefNetwork& net, NodeIndex node, const Assignment& fixed);

DependenceReport dependence_value(const BeliefNetwork& net,
                                  const Assignment& fixed);

/// Dependence value that holds uniformly for all 2^|S| subproblems obtained
/// by instantiating `conditioning` on top of `evidence`. Non-members take the
/// largest lambda over the instantiations of their parents in S; members of S
/// use the unbound-node formula since each subproblem fixes them both ways.
DependenceReport conditioned_dependence(const BeliefNetwork& net,
                                        const Assignment& evidence,
                                        std::span<const NodeIndex> conditioning);

/// prod over S of min(l_i, 1 - u_i) with unconditioned bounds; never exceeds
/// the smallest instantiation probability of S.
double phi_min_lower_bound(const BeliefNetwork& net,
                           std::span<const NodeIndex> nodes);

CostEstimate predicted_cost(const BeliefNetwork& net, const Assignment& evidence,
                            std::span<const NodeIndex> conditioning);

/// phi / (1 + epsilon) <= mu <= phi * (1 + epsilon)
bool satisfies_ras(double phi, double mu, double epsilon);

}  // namespace selcond
