#include "selcond/simulation.hpp"

#include <algorithm>
#include <string>

#include "selcond/dependence.hpp"
#include "selcond/error.hpp"

namespace selcond {

namespace {

double row_value(const BeliefNetwork& net, NodeIndex node, const Assignment& a) {
  std::size_t row = 0;
  for (NodeIndex p : net.parents(node)) {
    row = (row << 1) | static_cast<std::size_t>(a[p]);
  }
  return net.cpt(node).rows[row];
}

void check_probabilities(double epsilon, double delta) {
  if (!(epsilon > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  }
  if (!(delta > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "delta must be positive");
  }
}

}  // namespace

Assignment logic_sample(const BeliefNetwork& net, RandomSource& rng) {
  Assignment a(net.size());
  for (NodeIndex i : net.topological_order()) {
    a.bind(i, rng.bernoulli(row_value(net, i, a)) ? 1 : 0);
  }
  return a;
}

// ---------------------------------------------------------------------------
// ConditionedSampler

ConditionedSampler::ConditionedSampler(const BeliefNetwork& net,
                                       Assignment condition,
                                       TrialGenerator generator)
    : net_(&net), condition_(std::move(condition)), generator_(generator),
      clamped_(net.size(), false), state_(condition_) {
  if (condition_.node_count() != net.size()) {
    throw Error(ErrorCode::InvalidArgument, "condition size mismatch");
  }
  if (generator_.kind == GeneratorKind::gibbs && generator_.burn_in_sweeps < 1) {
    throw Error(ErrorCode::InvalidArgument, "gibbs needs at least one sweep");
  }
  for (NodeIndex i : net.topological_order()) {
    clamped_[i] = condition_.is_bound(i) &&
                  std::all_of(net.parents(i).begin(), net.parents(i).end(),
                              [&](NodeIndex p) { return bool(clamped_[p]); });
    if (!condition_.is_bound(i)) free_nodes_.push_back(i);
  }
}

bool ConditionedSampler::forward_pass(RandomSource& rng) {
  ++forward_passes_;
  const BeliefNetwork& net = *net_;
  const bool reject = generator_.kind == GeneratorKind::rejection;
  for (NodeIndex i : net.topological_order()) {
    if (clamped_[i]) {
      state_.bind(i, condition_[i]);
      continue;
    }
    const int v = rng.bernoulli(row_value(net, i, state_)) ? 1 : 0;
    if (condition_.is_bound(i) && v != condition_[i]) {
      if (reject) return false;
      state_.bind(i, condition_[i]);
      continue;
    }
    state_.bind(i, v);
  }
  return true;
}

void ConditionedSampler::gibbs_sweep(RandomSource& rng) {
  const BeliefNetwork& net = *net_;
  for (NodeIndex i : free_nodes_) {
    double weight[2];
    for (int v = 0; v < 2; ++v) {
      state_.bind(i, v);
      const double p1 = row_value(net, i, state_);
      double w = v == 1 ? p1 : 1.0 - p1;
      for (NodeIndex c : net.children(i)) {
        const double q1 = row_value(net, c, state_);
        w *= state_[c] == 1 ? q1 : 1.0 - q1;
      }
      weight[v] = w;
    }
    state_.bind(i, rng.uniform() * (weight[0] + weight[1]) < weight[1] ? 1 : 0);
  }
}

const Assignment& ConditionedSampler::draw(RandomSource& rng) {
  if (generator_.kind == GeneratorKind::rejection) {
    for (std::uint64_t attempt = 0; attempt < generator_.rejection_cap; ++attempt) {
      if (forward_pass(rng)) return state_;
    }
    throw Error(ErrorCode::RejectionBudgetExceeded,
                "no trial consistent with the condition after " +
                    std::to_string(generator_.rejection_cap) + " attempts");
  }
  forward_pass(rng);
  for (std::uint64_t s = 0; s < generator_.burn_in_sweeps; ++s) gibbs_sweep(rng);
  return state_;
}

Assignment conditioned_trial(const BeliefNetwork& net,
                             const Assignment& condition,
                             const TrialGenerator& generator, RandomSource& rng) {
  ConditionedSampler sampler(net, condition, generator);
  return sampler.draw(rng);
}

// ---------------------------------------------------------------------------
// Stopping-rule estimators

DistributionEstimate estimate_distribution_over(
    const BeliefNetwork& net, std::span<const NodeIndex> nodes, double epsilon,
    double delta, Prior prior, RandomSource& rng,
    std::optional<std::uint64_t> sample_cap) {
  check_probabilities(epsilon, delta);
  if (nodes.size() > 20) {
    throw Error(ErrorCode::InvalidArgument, "at most 20 conditioning nodes");
  }
  if (nodes.empty()) {
    return {Eigen::VectorXd::Ones(1), 0};
  }
  const std::uint64_t k = std::uint64_t{1} << nodes.size();
  std::uint64_t cap;
  if (sample_cap) {
    cap = *sample_cap;
  } else {
    const std::uint64_t bound = worst_case_sample_bound(
        nodes.size(), epsilon, delta, phi_min_lower_bound(net, nodes));
    cap = bound > UINT64_MAX / 10 ? UINT64_MAX : 10 * bound;
  }
  cap = std::max(cap, k);

  DirichletPosterior posterior(k, prior);
  CheckpointSchedule schedule(k, cap);
  Assignment sample(net.size());
  std::uint64_t drawn = 0;
  for (;;) {
    for (; drawn < schedule.next(); ++drawn) {
      for (NodeIndex i : net.topological_order()) {
        sample.bind(i, rng.bernoulli(row_value(net, i, sample)) ? 1 : 0);
      }
      posterior.observe(instantiation_index(nodes, sample));
    }
    if (should_stop(posterior, epsilon, delta)) break;
    if (schedule.at_cap()) {
      throw Error(ErrorCode::SampleBudgetExceeded,
                  "weight estimation not certified within " +
                      std::to_string(cap) + " samples");
    }
    schedule.advance();
  }
  return {posterior.mu(), drawn};
}

RasEstimate estimate_conditional_fraction(
    const BeliefNetwork& net, const Assignment& target,
    const Assignment& condition, double epsilon, double delta,
    const TrialGenerator& generator, RandomSource& rng, Prior prior,
    std::optional<std::uint64_t> sample_cap) {
  check_probabilities(epsilon, delta);
  if (!target.disjoint_from(condition)) {
    throw Error(ErrorCode::OverlappingAssignments,
                "target and condition bind a common node");
  }
  const std::uint64_t cap =
      std::max<std::uint64_t>(sample_cap.value_or(kDefaultFractionSampleCap), 2);

  ConditionedSampler sampler(net, condition, generator);
  DirichletPosterior posterior(2, prior);
  CheckpointSchedule schedule(2, cap);
  std::uint64_t drawn = 0;
  for (;;) {
    for (; drawn < schedule.next(); ++drawn) {
      posterior.observe(sampler.draw(rng).agrees_with(target) ? 0 : 1);
    }
    if (should_stop(posterior, epsilon, delta)) break;
    if (schedule.at_cap()) {
      throw Error(ErrorCode::SampleBudgetExceeded,
                  "fraction estimate not certified within " +
                      std::to_string(cap) + " trials");
    }
    schedule.advance();
  }
  RasEstimate out;
  out.value = posterior.mu(0);
  out.epsilon = epsilon;
  out.delta = delta;
  out.trials = drawn;
  out.consistent = posterior.counts()[0];
  out.forward_passes = sampler.forward_passes();
  return out;
}

}  // namespace selcond
