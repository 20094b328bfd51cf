#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "selcond/dirichlet.hpp"
#include "selcond/network.hpp"
#include "selcond/random.hpp"

namespace selcond {

enum class GeneratorKind { rejection, gibbs };

/// How conditioned trials are produced.
///
/// `rejection` is exact: forward samples that disagree with the condition
/// are discarded. Condition nodes whose ancestors are all in the condition
/// are clamped instead of sampled, which leaves the accepted distribution
/// unchanged. `gibbs` runs `burn_in_sweeps` full single-site sweeps from a
/// clamped forward pass and returns the last state (approximate).
struct TrialGenerator {
  GeneratorKind kind = GeneratorKind::rejection;
  std::uint64_t burn_in_sweeps = 1;
  std::uint64_t rejection_cap = 10'000'000;
};

/// Fraction-of-successes estimate with its certification targets.
struct RasEstimate {
  double value = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t consistent = 0;
  std::uint64_t forward_passes = 0;  // includes rejected passes
};

struct DistributionEstimate {
  Eigen::VectorXd mu;
  std::uint64_t trials = 0;
};

/// Trial cap used by estimate_conditional_fraction when none is given.
inline constexpr std::uint64_t kDefaultFractionSampleCap = 100'000'000;

/// One forward sample of every node in topological order.
Assignment logic_sample(const BeliefNetwork& net, RandomSource& rng);

/// Reusable generator of full assignments consistent with a condition.
class ConditionedSampler {
 public:
  ConditionedSampler(const BeliefNetwork& net, Assignment condition,
                     TrialGenerator generator);

  /// Returns a reference to an internal buffer, valid until the next draw.
  /// Throws Error(RejectionBudgetExceeded) when the rejection kind exhausts
  /// its attempt cap.
  const Assignment& draw(RandomSource& rng);

  std::uint64_t forward_passes() const noexcept { return forward_passes_; }

 private:
  bool forward_pass(RandomSource& rng);
  void gibbs_sweep(RandomSource& rng);

  const BeliefNetwork* net_;
  Assignment condition_;
  TrialGenerator generator_;
  std::vector<bool> clamped_;
  std::vector<NodeIndex> free_nodes_;  // unbound, topological order
  Assignment state_;
  std::uint64_t forward_passes_ = 0;
};

Assignment conditioned_trial(const BeliefNetwork& net,
                             const Assignment& condition,
                             const TrialGenerator& generator, RandomSource& rng);

/// Logic-samples the network until the Dirichlet stopping rule certifies the
/// distribution over the instantiations of `nodes` (index convention of
/// exact_distribution_over). Default cap: 10x the worst-case bound at
/// phi_min_lower_bound. Throws Error(SampleBudgetExceeded).
DistributionEstimate estimate_distribution_over(
    const BeliefNetwork& net, std::span<const NodeIndex> nodes, double epsilon,
    double delta, Prior prior, RandomSource& rng,
    std::optional<std::uint64_t> sample_cap = std::nullopt);

/// Fraction of conditioned trials consistent with `target`, stopped by the
/// rule on the two-category (consistent, inconsistent) posterior.
RasEstimate estimate_conditional_fraction(
    const BeliefNetwork& net, const Assignment& target,
    const Assignment& condition, double epsilon, double delta,
    const TrialGenerator& generator, RandomSource& rng,
    Prior prior = Prior::unbiased,
    std::optional<std::uint64_t> sample_cap = std::nullopt);

}  // namespace selcond
