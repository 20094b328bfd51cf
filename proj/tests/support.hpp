#pragma once

// Shared fixtures and independent oracles for the test suites. Nothing here
// calls into the code paths it is used to check.

#include <cmath>
#include <string>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "selcond/network.hpp"
#include "selcond/random.hpp"

namespace selcond::testing {

inline constexpr const char* kNetA = R"(network net_a
node A
prior A : 0.3
node B
parents B : A
cpt B : 0.2 0.9
)";

inline constexpr const char* kNetC = R"(network net_c
node A
prior A : 0.5
node B
parents B : A
cpt B : 0.1 0.9
node C
parents C : B
cpt C : 0.2 0.8
)";

inline BeliefNetwork net_a() { return parse_network(kNetA); }
inline BeliefNetwork net_c() { return parse_network(kNetC); }

inline BeliefNetwork single_node(double p = 0.5) {
  return BeliefNetwork("single", {"Z"}, {Cpt{{}, {p}}});
}

inline Assignment bind(const BeliefNetwork& net, std::string_view text) {
  return parse_assignment(net, text);
}

struct RandomNetworkShape {
  std::size_t min_nodes = 2;
  std::size_t max_nodes = 12;
  std::size_t max_parents = 2;
  double lo = 0.05;
  double hi = 0.95;
  /// Probability that a node with candidates gets no parent at all.
  double arcless_weight = 0.0;
};

inline std::size_t uniform_index(RandomSource& rng, std::size_t n) {
  return static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
}

/// Random DAG: node i draws up to max_parents distinct parents among
/// nodes 0..i-1; CPT rows uniform in [lo, hi].
inline BeliefNetwork random_network(RandomSource& rng,
                                    const RandomNetworkShape& shape = {}) {
  const std::size_t n =
      shape.min_nodes + uniform_index(rng, shape.max_nodes - shape.min_nodes + 1);
  std::vector<std::string> names;
  std::vector<Cpt> cpts;
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back("X" + std::to_string(i));
    Cpt t;
    std::size_t k = uniform_index(rng, std::min(i, shape.max_parents) + 1);
    if (rng.uniform() < shape.arcless_weight) k = 0;
    while (t.parents.size() < k) {
      const NodeIndex p = uniform_index(rng, i);
      bool seen = false;
      for (NodeIndex q : t.parents) seen = seen || q == p;
      if (!seen) t.parents.push_back(p);
    }
    for (std::size_t r = 0; r < (std::size_t{1} << k); ++r) {
      t.rows.push_back(shape.lo + (shape.hi - shape.lo) * rng.uniform());
    }
    cpts.push_back(std::move(t));
  }
  return BeliefNetwork("random", std::move(names), std::move(cpts));
}

/// Chain X0 -> X1 -> ... or a random tree (each node one parent).
inline BeliefNetwork random_tree(RandomSource& rng, std::size_t n, bool chain) {
  std::vector<std::string> names;
  std::vector<Cpt> cpts;
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back("T" + std::to_string(i));
    Cpt t;
    if (i > 0) t.parents.push_back(chain ? i - 1 : uniform_index(rng, i));
    for (std::size_t r = 0; r < (std::size_t{1} << t.parents.size()); ++r) {
      t.rows.push_back(0.05 + 0.9 * rng.uniform());
    }
    cpts.push_back(std::move(t));
  }
  return BeliefNetwork(chain ? "chain" : "tree", std::move(names), std::move(cpts));
}

/// Random partial assignment binding each node with probability p_bind.
inline Assignment random_assignment(RandomSource& rng, std::size_t n,
                                    double p_bind) {
  Assignment a(n);
  for (NodeIndex i = 0; i < n; ++i) {
    if (rng.uniform() < p_bind) a.bind(i, rng.bernoulli(0.5) ? 1 : 0);
  }
  return a;
}

/// Beta(a, b) CDF at x by quadrature of the unnormalized density on [0, x]
/// and [x, 1]; the normalizer is their sum, so no gamma function is used.
inline double beta_cdf_quadrature(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  boost::math::quadrature::tanh_sinh<double> integrator(15);
  // Densities are scaled by their value at the mode to keep magnitudes sane.
  const double mode = (a > 1.0 && b > 1.0) ? (a - 1.0) / (a + b - 2.0) : 0.5;
  const double shift = (a - 1.0) * std::log(mode) + (b - 1.0) * std::log1p(-mode);
  // Both pieces put their singular endpoint at 0, where t is exact.
  auto near_zero = [&](double t) {
    return std::exp((a - 1.0) * std::log(t) + (b - 1.0) * std::log1p(-t) - shift);
  };
  auto near_one = [&](double s) {
    return std::exp((a - 1.0) * std::log1p(-s) + (b - 1.0) * std::log(s) - shift);
  };
  const double lower = integrator.integrate(near_zero, 0.0, x, 1e-15);
  const double upper = integrator.integrate(near_one, 0.0, 1.0 - x, 1e-15);
  return lower / (lower + upper);
}

/// Binomial tail identity for integer shapes:
/// I_x(a, b) = sum_{j=a}^{a+b-1} C(a+b-1, j) x^j (1-x)^(a+b-1-j).
inline double beta_cdf_binomial(int a, int b, double x) {
  const int n = a + b - 1;
  double sum = 0.0;
  for (int j = a; j <= n; ++j) {
    double c = 1.0;
    for (int k = 1; k <= j; ++k) c = c * (n - j + k) / k;
    sum += c * std::pow(x, j) * std::pow(1.0 - x, n - j);
  }
  return sum;
}

}  // namespace selcond::testing
