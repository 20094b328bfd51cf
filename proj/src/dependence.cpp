#include "selcond/dependence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "selcond/error.hpp"

namespace selcond {

namespace {

// A parent-row r is consistent with `fixed` when every bound parent carries
// the bit r assigns to it.
bool row_consistent(std::span<const NodeIndex> parents, std::size_t row,
                    const Assignment& fixed) {
  const std::size_t k = parents.size();
  for (std::size_t j = 0; j < k; ++j) {
    const std::int8_t v = fixed[parents[j]];
    if (v == Assignment::kUnbound) continue;
    if (static_cast<std::size_t>(v) != ((row >> (k - 1 - j)) & 1U)) return false;
  }
  return true;
}

bool all_parents_bound(const BeliefNetwork& net, NodeIndex node,
                       const Assignment& fixed) {
  return std::all_of(net.parents(node).begin(), net.parents(node).end(),
                     [&](NodeIndex p) { return fixed.is_bound(p); });
}

double lambda_from_bounds(const NodeBounds& b, std::int8_t node_value) {
  const double up = b.hi / b.lo;
  const double down = (1.0 - b.lo) / (1.0 - b.hi);
  if (node_value == 1) return up;
  if (node_value == 0) return down;
  return std::max(up, down);
}

void check_size(const BeliefNetwork& net, const Assignment& a) {
  if (a.node_count() != net.size()) {
    throw Error(ErrorCode::InvalidArgument, "assignment size mismatch");
  }
}

}  // namespace

NodeBounds node_bounds(const BeliefNetwork& net, NodeIndex node,
                       int node_value, const Assignment& fixed) {
  check_size(net, fixed);
  const Cpt& t = net.cpt(node);
  NodeBounds b;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (!row_consistent(t.parents, r, fixed)) continue;
    const double p = node_value == 1 ? t.rows[r] : 1.0 - t.rows[r];
    b.lo = std::min(b.lo, p);
    b.hi = std::max(b.hi, p);
  }
  return b;
}

double lambda(const BeliefNetwork& net, NodeIndex node, const Assignment& fixed) {
  check_size(net, fixed);
  if (net.is_prior(node) || all_parents_bound(net, node, fixed)) return 1.0;
  return lambda_from_bounds(node_bounds(net, node, 1, fixed), fixed[node]);
}

DependenceReport dependence_value(const BeliefNetwork& net,
                                  const Assignment& fixed) {
  check_size(net, fixed);
  DependenceReport report;
  report.conditioning = fixed;
  report.per_node.reserve(net.size());
  for (NodeIndex i = 0; i < net.size(); ++i) {
    NodeDependence d{node_bounds(net, i, 1, fixed), lambda(net, i, fixed)};
    report.dependence_value *= d.lambda * d.lambda;
    report.per_node.push_back(d);
  }
  return report;
}

DependenceReport conditioned_dependence(const BeliefNetwork& net,
                                        const Assignment& evidence,
                                        std::span<const NodeIndex> conditioning) {
  check_size(net, evidence);
  std::vector<bool> in_s(net.size(), false);
  Assignment with_s = evidence;
  for (NodeIndex s : conditioning) {
    if (evidence.is_bound(s)) {
      throw Error(ErrorCode::OverlappingSets,
                  "conditioning node '" + net.node_name(s) + "' is evidence");
    }
    in_s.at(s) = true;
    with_s.bind(s, 0);
  }

  DependenceReport report;
  report.conditioning = with_s;
  report.per_node.reserve(net.size());
  for (NodeIndex i = 0; i < net.size(); ++i) {
    // Only the parents of i that lie in S vary across subproblems.
    std::vector<NodeIndex> varying;
    for (NodeIndex p : net.parents(i)) {
      if (in_s[p]) varying.push_back(p);
    }
    Assignment fixed = with_s;
    if (in_s[i]) fixed.unbind(i);

    NodeDependence worst{node_bounds(net, i, 1, fixed), 1.0};
    worst.lambda = 0.0;
    const std::size_t configs = std::size_t{1} << varying.size();
    for (std::size_t c = 0; c < configs; ++c) {
      bind_instantiation(varying, c, fixed);
      const double l = lambda(net, i, fixed);
      if (l > worst.lambda) {
        worst.lambda = l;
        worst.bounds = node_bounds(net, i, 1, fixed);
      }
    }
    report.dependence_value *= worst.lambda * worst.lambda;
    report.per_node.push_back(worst);
  }
  return report;
}

double phi_min_lower_bound(const BeliefNetwork& net,
                           std::span<const NodeIndex> nodes) {
  const Assignment none(net.size());
  double bound = 1.0;
  for (NodeIndex i : nodes) {
    const NodeBounds b = node_bounds(net, i, 1, none);
    bound *= std::min(b.lo, 1.0 - b.hi);
  }
  return bound;
}

CostEstimate predicted_cost(const BeliefNetwork& net, const Assignment& evidence,
                            std::span<const NodeIndex> conditioning) {
  const double d = conditioned_dependence(net, evidence, conditioning).dependence_value;
  const double subproblems = std::ldexp(1.0, static_cast<int>(conditioning.size()));
  CostEstimate cost;
  cost.phi_min_bound = phi_min_lower_bound(net, conditioning);
  cost.subproblem_term = subproblems * std::pow(d, 4);
  cost.weight_term = subproblems / cost.phi_min_bound;
  return cost;
}

bool satisfies_ras(double phi, double mu, double epsilon) {
  return phi / (1.0 + epsilon) <= mu && mu <= phi * (1.0 + epsilon);
}

}  // namespace selcond
