#include "selcond/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "selcond/error.hpp"

namespace selcond {

DirichletPosterior::DirichletPosterior(std::size_t categories, Prior prior)
    : counts_(categories, 0), prior_(prior) {
  if (categories < 2) {
    throw Error(ErrorCode::InvalidArgument,
                "a Dirichlet posterior needs at least two categories");
  }
}

Eigen::VectorXd DirichletPosterior::mu() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(counts_.size()));
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = mu(i);
  }
  return out;
}

double DirichletPosterior::mu(std::size_t i) const {
  const double n = total();
  return n > 0.0 ? parameter(i) / n : 0.0;
}

void DirichletPosterior::observe(std::size_t category) {
  if (category >= counts_.size()) {
    throw Error(ErrorCode::CategoryOutOfRange,
                "category " + std::to_string(category) + " out of range [0, " +
                    std::to_string(counts_.size()) + ")");
  }
  ++counts_[category];
  ++observations_;
}

void DirichletPosterior::observe_counts(std::span<const std::uint64_t> counts) {
  if (counts.size() != counts_.size()) {
    throw Error(ErrorCode::CategoryOutOfRange, "count vector has wrong length");
  }
  for (std::size_t i = 0; i < counts.size(); ++i) {
    counts_[i] += counts[i];
    observations_ += counts[i];
  }
}

DirichletPosterior posterior_update(DirichletPosterior posterior,
                                    std::size_t category) {
  posterior.observe(category);
  return posterior;
}

std::pair<double, double> mean_and_variance(const DirichletPosterior& posterior,
                                            std::size_t i) {
  const double n = posterior.total();
  if (n < 1.0) {
    throw Error(ErrorCode::EmptyPosterior, "posterior has no mass yet");
  }
  if (i >= posterior.categories()) {
    throw Error(ErrorCode::CategoryOutOfRange, "category out of range");
  }
  const double m = posterior.mu(i);
  return {m, m * (1.0 - m) / (n + 1.0)};
}

double log_density(const DirichletPosterior& posterior,
                   std::span<const double> phi) {
  const std::size_t k = posterior.categories();
  if (phi.size() != k) {
    throw Error(ErrorCode::InvalidSimplexPoint, "point has wrong dimension");
  }
  double sum = 0.0;
  for (double p : phi) {
    if (!(p > 0.0)) {
      throw Error(ErrorCode::InvalidSimplexPoint, "point must be interior");
    }
    sum += p;
  }
  if (std::fabs(sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidSimplexPoint, "point does not sum to 1");
  }
  double log_norm = std::lgamma(posterior.total());
  double log_kernel = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double a = posterior.parameter(i);
    if (a < 1.0) {
      throw Error(ErrorCode::UndefinedDensity,
                  "every Dirichlet parameter must be at least 1");
    }
    log_norm -= std::lgamma(a);
    log_kernel += (a - 1.0) * std::log(phi[i]);
  }
  return log_norm + log_kernel;
}

double failure_probability_bound(const DirichletPosterior& posterior,
                                 double epsilon) {
  const double n = posterior.total();
  if (n < 1.0) {
    throw Error(ErrorCode::EmptyPosterior, "posterior has no mass yet");
  }
  if (!(epsilon > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  }
  double bound = 0.0;
  for (std::size_t i = 0; i < posterior.categories(); ++i) {
    const double a = posterior.parameter(i);
    const double b = n - a;
    if (a <= 0.0) return 1.0;
    if (b <= 0.0) continue;  // marginal is a point mass at 1
    const double m = a / n;
    bound += regularized_incomplete_beta(a, b, m / (1.0 + epsilon));
    const double upper = m * (1.0 + epsilon);
    if (upper < 1.0) bound += 1.0 - regularized_incomplete_beta(a, b, upper);
    if (bound >= 1.0) return 1.0;
  }
  return std::clamp(bound, 0.0, 1.0);
}

bool should_stop(const DirichletPosterior& posterior, double epsilon,
                 double delta) {
  const auto counts = posterior.counts();
  if (std::any_of(counts.begin(), counts.end(),
                  [](std::uint64_t c) { return c == 0; })) {
    return false;
  }
  return failure_probability_bound(posterior, epsilon) <= delta;
}

std::uint64_t worst_case_sample_bound(std::size_t conditioning_size,
                                      double epsilon, double delta,
                                      double phi_min) {
  if (!(phi_min > 0.0) || phi_min > 1.0) {
    throw Error(ErrorCode::NonPositivePhiMin, "phi_min must lie in (0, 1]");
  }
  if (!(epsilon > 0.0) || !(delta > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "epsilon and delta must be positive");
  }
  const double log_term = std::log(2.0 / delta);
  if (log_term <= 0.0) return 0;
  const double n = std::ldexp(1.0, static_cast<int>(conditioning_size)) /
                   (epsilon * epsilon * phi_min) * log_term;
  const double ceiling = std::ceil(n);
  if (!(ceiling < 1.8e19)) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(ceiling);
}

void CheckpointSchedule::advance() noexcept {
  const double grown = std::ceil(static_cast<double>(next_) * kGrowth);
  std::uint64_t n = grown >= static_cast<double>(cap_)
                        ? cap_
                        : static_cast<std::uint64_t>(grown);
  n = std::max(n, next_ + 1);
  next_ = std::min(n, cap_);
}

}  // namespace selcond
