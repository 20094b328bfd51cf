#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace selcond {

/// Informationless Dirichlet priors: zero pseudocounts (unbiased) or one
/// pseudocount per category (uniform over the simplex).
enum class Prior { unbiased, uniform };

/// Dirichlet posterior over K category probabilities. Parameters are
/// alpha_i = counts_i + pseudocount, N = sum alpha_i, mu_i = alpha_i / N.
class DirichletPosterior {
 public:
  /// K >= 2.
  DirichletPosterior(std::size_t categories, Prior prior = Prior::unbiased);

  std::size_t categories() const noexcept { return counts_.size(); }
  Prior prior() const noexcept { return prior_; }
  std::span<const std::uint64_t> counts() const noexcept { return counts_; }

  double pseudocount() const noexcept {
    return prior_ == Prior::uniform ? 1.0 : 0.0;
  }
  /// alpha_i
  double parameter(std::size_t i) const {
    return static_cast<double>(counts_.at(i)) + pseudocount();
  }
  /// Observed samples only.
  std::uint64_t observations() const noexcept { return observations_; }
  /// Effective total N including pseudocounts.
  double total() const noexcept {
    return static_cast<double>(observations_) +
           pseudocount() * static_cast<double>(counts_.size());
  }
  /// Posterior mean; all zeros when N = 0.
  Eigen::VectorXd mu() const;
  double mu(std::size_t i) const;

  /// In-place update; throws Error(CategoryOutOfRange).
  void observe(std::size_t category);

  /// Accumulates a batch of observations.
  void observe_counts(std::span<const std::uint64_t> counts);

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t observations_ = 0;
  Prior prior_;
};

/// Value-semantics update: returns a copy with one more observation.
DirichletPosterior posterior_update(DirichletPosterior posterior,
                                    std::size_t category);

/// Posterior mean and variance mu_i (1 - mu_i) / (N + 1) of category i.
std::pair<double, double> mean_and_variance(const DirichletPosterior& posterior,
                                            std::size_t i);

/// Log density of the posterior at a simplex point.
double log_density(const DirichletPosterior& posterior,
                   std::span<const double> phi);

/// I_x(a, b), the Beta(a, b) CDF at x.
double regularized_incomplete_beta(double a, double b, double x);

/// Union bound on the posterior mass outside the relative-error box
/// mu/(1+eps) <= phi <= mu(1+eps), summed over per-category Beta marginals.
/// Returns 1 when some category has a zero parameter.
double failure_probability_bound(const DirichletPosterior& posterior,
                                 double epsilon);

/// Every category observed at least once and the failure bound <= delta.
bool should_stop(const DirichletPosterior& posterior, double epsilon,
                 double delta);

/// ceil(2^s / (eps^2 phi_min) * ln(2/delta)), saturating; 0 when the
/// logarithm is not positive.
std::uint64_t worst_case_sample_bound(std::size_t conditioning_size,
                                      double epsilon, double delta,
                                      double phi_min);

/// Sample counts at which the stopping rule is evaluated: K, then growth by
/// half at each step, clamped to a cap.
class CheckpointSchedule {
 public:
  static constexpr double kGrowth = 1.5;

  CheckpointSchedule(std::uint64_t categories, std::uint64_t cap)
      : next_(std::min(categories, cap)), cap_(cap) {}

  std::uint64_t next() const noexcept { return next_; }
  bool at_cap() const noexcept { return next_ >= cap_; }
  void advance() noexcept;

 private:
  std::uint64_t next_;
  std::uint64_t cap_;
};

}  // namespace selcond
