#include "selcond/reformulation.hpp"

#include <algorithm>
#include <cmath>

namespace selcond {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::direct: return "direct";
    case Strategy::selective: return "selective";
    case Strategy::automatic: return "auto";
  }
  return "auto";
}

std::optional<Strategy> strategy_from_string(std::string_view s) {
  if (s == "direct") return Strategy::direct;
  if (s == "selective") return Strategy::selective;
  if (s == "auto") return Strategy::automatic;
  return std::nullopt;
}

std::string_view to_string(GreedyStop s) {
  switch (s) {
    case GreedyStop::no_eligible_candidate: return "no_eligible_candidate";
    case GreedyStop::terms_comparable: return "terms_comparable";
    case GreedyStop::size_cap: return "size_cap";
  }
  return "no_eligible_candidate";
}

// ---------------------------------------------------------------------------
// Conditioning-set search

GreedySelection greedy_select(const BeliefNetwork& net,
                              const Assignment& evidence, double exponent,
                              std::size_t max_size,
                              std::span<const NodeIndex> excluded) {
  if (!(exponent >= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "greedy exponent must be >= 1");
  }
  GreedySelection out;
  std::vector<NodeIndex>& s = out.conditioning;
  std::vector<bool> taken(net.size(), false);
  for (NodeIndex i = 0; i < net.size(); ++i) taken[i] = evidence.is_bound(i);
  for (NodeIndex i : excluded) taken[i] = true;

  for (;;) {
    const DependenceReport report = conditioned_dependence(net, evidence, s);

    std::optional<GreedyStep> best;
    for (NodeIndex i = 0; i < net.size(); ++i) {
      const double lam = report.per_node[i].lambda;
      if (lam <= 1.0) continue;
      std::vector<NodeIndex> unbound;
      for (NodeIndex p : net.parents(i)) {
        if (!taken[p]) unbound.push_back(p);
      }
      if (unbound.empty()) continue;
      const double lhs = std::ldexp(1.0, static_cast<int>(unbound.size()));
      const double rhs = std::pow(lam, exponent);
      if (!(lhs < rhs)) continue;
      const double ratio = rhs / lhs;
      if (!best || ratio > best->candidate_ratio) {
        best = GreedyStep{.node = i,
                          .added = std::move(unbound),
                          .lambda_before = lam,
                          .candidate_ratio = ratio,
                          .threshold_test_lhs = lhs,
                          .threshold_test_rhs = rhs};
      }
    }
    if (!best) {
      out.trace.stop = GreedyStop::no_eligible_candidate;
      break;
    }
    const CostEstimate before = predicted_cost(net, evidence, s);
    if (before.weight_term >= before.subproblem_term) {
      out.trace.stop = GreedyStop::terms_comparable;
      break;
    }
    if (s.size() + best->added.size() > max_size) {
      out.trace.stop = GreedyStop::size_cap;
      break;
    }
    for (NodeIndex p : best->added) {
      s.push_back(p);
      taken[p] = true;
    }
    best->cost_before = before;
    best->cost_after = predicted_cost(net, evidence, s);
    out.trace.steps.push_back(std::move(*best));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Decomposition and recombination

std::vector<Subproblem> decompose(const BeliefNetwork& net,
                                  const Assignment& query,
                                  const Assignment& evidence,
                                  std::span<const NodeIndex> conditioning) {
  for (NodeIndex s : conditioning) {
    if (query.is_bound(s) || evidence.is_bound(s)) {
      throw Error(ErrorCode::OverlappingSets,
                  "conditioning node '" + net.node_name(s) +
                      "' is also bound by the query or evidence");
    }
  }
  if (!query.disjoint_from(evidence)) {
    throw Error(ErrorCode::OverlappingSets, "query and evidence overlap");
  }
  const std::size_t count = std::size_t{1} << conditioning.size();
  std::vector<Subproblem> out;
  out.reserve(count);
  const Assignment numerator = query.merged(evidence);
  for (std::size_t i = 0; i < count; ++i) {
    Assignment inst(net.size());
    bind_instantiation(conditioning, i, inst);
    out.push_back({i, std::move(inst), numerator, evidence});
  }
  return out;
}

double combine_weighted(const Eigen::VectorXd& values,
                        const Eigen::VectorXd& weights) {
  if (values.size() != weights.size()) {
    throw Error(ErrorCode::LengthMismatch, "values and weights differ in length");
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (weights[i] < 0.0) {
      throw Error(ErrorCode::InvalidArgument, "weights must be nonnegative");
    }
    sum += values[i] * weights[i];
  }
  return sum;
}

RatioResult bayes_ratio(double numerator, double denominator) {
  if (!(denominator > 0.0)) {
    throw Error(ErrorCode::ZeroDenominator, "Bayes ratio with zero denominator");
  }
  const double r = numerator / denominator;
  if (r > 1.0) return {1.0, true};
  if (r < 0.0) return {0.0, true};
  return {r, false};
}

ErrorBudget split_error_budget(double epsilon, double delta,
                               std::size_t conditioning_size) {
  const double stage_eps = std::pow(1.0 + epsilon, 0.25) - 1.0;
  return {.epsilon_weights = stage_eps,
          .delta_weights = delta / 2.0,
          .epsilon_subproblem = stage_eps,
          .delta_subproblem =
              delta / (4.0 * std::ldexp(1.0, static_cast<int>(conditioning_size)))};
}

// ---------------------------------------------------------------------------
// End-to-end inference

namespace {

TrialGenerator make_generator(const BeliefNetwork& net,
                              const Assignment& condition,
                              const InferenceConfig& config) {
  TrialGenerator g;
  g.kind = config.generator;
  g.rejection_cap = config.rejection_cap;
  if (g.kind == GeneratorKind::gibbs) {
    if (config.burn_in_sweeps) {
      g.burn_in_sweeps = *config.burn_in_sweeps;
    } else {
      const double d = dependence_value(net, condition).dependence_value;
      g.burn_in_sweeps =
          static_cast<std::uint64_t>(std::ceil(std::min(std::pow(d, 4), 1e6)));
    }
  }
  return g;
}

bool is_budget_error(const Error& e) {
  return e.code() == ErrorCode::SampleBudgetExceeded ||
         e.code() == ErrorCode::RejectionBudgetExceeded;
}

}  // namespace

InferenceResult infer(const BeliefNetwork& net, const Assignment& query,
                      const Assignment& evidence, double epsilon, double delta,
                      Strategy strategy, const InferenceConfig& config,
                      std::uint64_t seed) {
  if (query.node_count() != net.size() || evidence.node_count() != net.size()) {
    throw Error(ErrorCode::InvalidArgument, "assignment size mismatch");
  }
  if (query.empty()) {
    throw Error(ErrorCode::InvalidArgument, "query binds no node");
  }
  if (!query.disjoint_from(evidence)) {
    throw Error(ErrorCode::OverlappingSets, "query and evidence overlap");
  }
  if (!(epsilon > 0.0) || !(delta > 0.0 && delta <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "need epsilon > 0 and delta in (0, 1]");
  }

  InferenceResult r;
  r.epsilon = epsilon;
  r.delta = delta;
  r.seed = seed;
  r.dependence_before = dependence_value(net, evidence).dependence_value;
  r.cost_before = predicted_cost(net, evidence, {});
  r.dependence_after = r.dependence_before;
  r.cost_after = r.cost_before;
  r.weights = Eigen::VectorXd::Ones(1);

  if (strategy != Strategy::direct) {
    const std::vector<NodeIndex> query_nodes = query.bound_nodes();
    GreedySelection sel = greedy_select(net, evidence, config.greedy_exponent,
                                        config.max_conditioning, query_nodes);
    r.trace = std::move(sel.trace);
    if (strategy == Strategy::selective || !sel.conditioning.empty()) {
      r.strategy = Strategy::selective;
      r.conditioning = std::move(sel.conditioning);
    }
  }

  const RandomSource master(seed);
  try {
    if (r.strategy == Strategy::direct) {
      RandomSource rng = master.split(1);
      RasEstimate est = estimate_conditional_fraction(
          net, query, evidence, epsilon, delta,
          make_generator(net, evidence, config), rng, config.prior,
          config.sample_cap);
      r.trials_total = est.trials;
      r.numerator = est.value;
      r.denominator = 1.0;
      r.estimate = est.value;
      r.subproblems.push_back({Assignment(net.size()), est, std::nullopt});
      return r;
    }

    const ErrorBudget budget =
        split_error_budget(epsilon, delta, r.conditioning.size());
    r.dependence_after =
        conditioned_dependence(net, evidence, r.conditioning).dependence_value;
    r.cost_after = predicted_cost(net, evidence, r.conditioning);

    RandomSource weight_rng = master.split(0);
    DistributionEstimate w = estimate_distribution_over(
        net, r.conditioning, budget.epsilon_weights, budget.delta_weights,
        config.prior, weight_rng, config.sample_cap);
    r.weights = w.mu;
    r.weight_trials = w.trials;
    r.trials_total = w.trials;

    const auto subproblems = decompose(net, query, evidence, r.conditioning);
    const auto count = static_cast<Eigen::Index>(subproblems.size());
    Eigen::VectorXd numerators(count);
    Eigen::VectorXd denominators = Eigen::VectorXd::Ones(count);
    for (const Subproblem& sp : subproblems) {
      const TrialGenerator gen = make_generator(net, sp.instantiation, config);
      SubproblemEstimate est{sp.instantiation, {}, std::nullopt};
      RandomSource num_rng = master.split(1 + 2 * sp.index);
      est.numerator = estimate_conditional_fraction(
          net, sp.numerator_target, sp.instantiation, budget.epsilon_subproblem,
          budget.delta_subproblem, gen, num_rng, config.prior, config.sample_cap);
      r.trials_total += est.numerator.trials;
      numerators[static_cast<Eigen::Index>(sp.index)] = est.numerator.value;
      if (!evidence.empty()) {
        RandomSource den_rng = master.split(2 + 2 * sp.index);
        est.denominator = estimate_conditional_fraction(
            net, sp.denominator_target, sp.instantiation,
            budget.epsilon_subproblem, budget.delta_subproblem, gen, den_rng,
            config.prior, config.sample_cap);
        r.trials_total += est.denominator->trials;
        denominators[static_cast<Eigen::Index>(sp.index)] = est.denominator->value;
      }
      r.subproblems.push_back(std::move(est));
    }

    r.numerator = combine_weighted(numerators, r.weights);
    r.denominator = combine_weighted(denominators, r.weights);
    const RatioResult ratio = bayes_ratio(r.numerator, r.denominator);
    r.estimate = ratio.value;
    r.clamped = ratio.clamped;
    return r;
  } catch (const Error& e) {
    if (is_budget_error(e)) throw InferenceBudgetExceeded(e.what(), std::move(r));
    throw;
  }
}

}  // namespace selcond
