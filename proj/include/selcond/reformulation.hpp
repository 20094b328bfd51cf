#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "selcond/dependence.hpp"
#include "selcond/dirichlet.hpp"
#include "selcond/error.hpp"
#include "selcond/network.hpp"
#include "selcond/simulation.hpp"

namespace selcond {

/// One accepted step of the greedy conditioning-set search.
struct GreedyStep {
  NodeIndex node;                 // node whose unbound parents were added
  std::vector<NodeIndex> added;   // those parents, in parent-list order
  double lambda_before = 1.0;     // lambda of `node` before the step
  double candidate_ratio = 0.0;   // lambda^r / 2^|added|
  double threshold_test_lhs = 0;  // 2^|added|
  double threshold_test_rhs = 0;  // lambda^r
  CostEstimate cost_before;
  CostEstimate cost_after;
};

/// Why the greedy search stopped.
enum class GreedyStop { no_eligible_candidate, terms_comparable, size_cap };

struct GreedyTrace {
  std::vector<GreedyStep> steps;
  GreedyStop stop = GreedyStop::no_eligible_candidate;
};

struct GreedySelection {
  std::vector<NodeIndex> conditioning;
  GreedyTrace trace;
};

/// Greedy selection of the conditioning set. At each step every node with
/// lambda > 1 proposes its parents not yet in S or the evidence (u'); it is
/// eligible when 2^|u'| < lambda^exponent, and the eligible u' with the largest
/// lambda^exponent / 2^|u'| is added (ties go to the earlier-declared node).
/// Stops when nothing is eligible, when the weight term of the cost model
/// reaches the subproblem term, or when S would grow beyond max_size.
/// Nodes in `excluded` (infer passes the query nodes) never enter S.
GreedySelection greedy_select(const BeliefNetwork& net,
                              const Assignment& evidence, double exponent = 1.0,
                              std::size_t max_size = 12,
                              std::span<const NodeIndex> excluded = {});

/// Instantiation I_i of S with the targets of its two inferences.
struct Subproblem {
  std::size_t index = 0;
  Assignment instantiation;
  Assignment numerator_target;    // query and evidence
  Assignment denominator_target;  // evidence
};

std::vector<Subproblem> decompose(const BeliefNetwork& net,
                                  const Assignment& query,
                                  const Assignment& evidence,
                                  std::span<const NodeIndex> conditioning);

/// sum_i values[i] * weights[i], accumulated in index order.
double combine_weighted(const Eigen::VectorXd& values,
                        const Eigen::VectorXd& weights);

struct RatioResult {
  double value = 0.0;
  bool clamped = false;
};

/// numerator / denominator clamped to [0, 1]; clamping is flagged.
RatioResult bayes_ratio(double numerator, double denominator);

enum class Strategy { direct, selective, automatic };

struct InferenceConfig {
  double greedy_exponent = 1.0;
  std::size_t max_conditioning = 12;
  Prior prior = Prior::unbiased;
  GeneratorKind generator = GeneratorKind::rejection;
  /// Gibbs sweeps per trial; when unset, ceil(min(D_condition^4, 1e6)).
  std::optional<std::uint64_t> burn_in_sweeps;
  std::uint64_t rejection_cap = 10'000'000;
  /// Overrides every stage's default trial cap.
  std::optional<std::uint64_t> sample_cap;
};

/// Per-stage error targets derived from the overall (epsilon, delta).
struct ErrorBudget {
  double epsilon_weights = 0.0;
  double delta_weights = 0.0;
  double epsilon_subproblem = 0.0;
  double delta_subproblem = 0.0;
};

/// epsilon_s = epsilon_w = (1+eps)^(1/4) - 1, delta_w = delta/2,
/// delta_s = delta / (4 * 2^|S|).
ErrorBudget split_error_budget(double epsilon, double delta,
                               std::size_t conditioning_size);

struct SubproblemEstimate {
  Assignment instantiation;
  RasEstimate numerator;
  std::optional<RasEstimate> denominator;  // absent without evidence
};

struct InferenceResult {
  double estimate = 0.0;
  bool clamped = false;
  double epsilon = 0.0;
  double delta = 0.0;
  Strategy strategy = Strategy::direct;  // strategy actually run
  std::vector<NodeIndex> conditioning;
  GreedyTrace trace;
  Eigen::VectorXd weights;               // mu over instantiations of S
  std::uint64_t weight_trials = 0;
  std::vector<SubproblemEstimate> subproblems;
  double numerator = 0.0;
  double denominator = 1.0;
  double dependence_before = 1.0;
  double dependence_after = 1.0;
  CostEstimate cost_before;
  CostEstimate cost_after;
  std::uint64_t trials_total = 0;
  std::uint64_t seed = 0;
};

/// Budget exhaustion inside infer(); carries everything computed so far.
class InferenceBudgetExceeded : public Error {
 public:
  InferenceBudgetExceeded(const std::string& what, InferenceResult partial)
      : Error(ErrorCode::SampleBudgetExceeded, what),
        partial_(std::move(partial)) {}
  const InferenceResult& partial() const noexcept { return partial_; }

 private:
  InferenceResult partial_;
};

/// Estimates Pr[query | evidence] to relative error epsilon with confidence
/// 1 - delta.
///
/// Selective: picks S greedily, estimates the weights Pr[I_i] by logic
/// sampling, estimates Pr[query, evidence | I_i] and Pr[evidence | I_i] per
/// instantiation, combines both sums with the shared weights and returns
/// their ratio. Direct: one fraction estimate with the evidence as condition.
/// Automatic: selective iff the greedy search returns a nonempty S.
///
/// Stream layout under `seed`: stream 0 drives the weight phase; subproblem
/// i uses streams 1 + 2i (numerator) and 2 + 2i (denominator); the direct
/// strategy uses stream 1.
InferenceResult infer(const BeliefNetwork& net, const Assignment& query,
                      const Assignment& evidence, double epsilon, double delta,
                      Strategy strategy, const InferenceConfig& config,
                      std::uint64_t seed);

std::string_view to_string(Strategy s);
std::optional<Strategy> strategy_from_string(std::string_view s);
std::string_view to_string(GreedyStop s);

}  // namespace selcond
