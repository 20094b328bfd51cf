#pragma once

#include <cstdint>
#include <span>

#include <Eigen/Core>

#include "selcond/network.hpp"

namespace selcond {

// Brute-force inference by enumerating completions. Deliberately naive: it is
// the ground truth that every sampler and identity in this project is
// checked against.

inline constexpr std::size_t kMaxExactNodes = 25;
inline constexpr std::size_t kMaxExactSetSize = 20;

struct OracleResult {
  double value = 0.0;
  std::uint64_t enumerated_terms = 0;  // 2^(unbound nodes)
};

/// Sum of joint_probability over every completion of `partial`.
OracleResult enumerate_marginal(const BeliefNetwork& net,
                                const Assignment& partial);

inline double exact_marginal(const BeliefNetwork& net,
                             const Assignment& partial) {
  return enumerate_marginal(net, partial).value;
}

/// Pr[target | evidence]; target and evidence must be disjoint.
double exact_conditional(const BeliefNetwork& net, const Assignment& target,
                         const Assignment& evidence);

/// Entry i is Pr[nodes = instantiation i], first node most significant.
Eigen::VectorXd exact_distribution_over(const BeliefNetwork& net,
                                        std::span<const NodeIndex> nodes);

}  // namespace selcond
