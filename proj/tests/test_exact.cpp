#include "doctest.h"
#include "selcond/error.hpp"
#include "selcond/exact.hpp"
#include "support.hpp"

using namespace selcond;
using namespace selcond::testing;

TEST_CASE("exact marginals on NET-A") {
  const BeliefNetwork net = net_a();
  // 0.7 * 0.2 + 0.3 * 0.9
  CHECK(exact_marginal(net, bind(net, "B=1")) == doctest::Approx(0.41).epsilon(1e-14));
  CHECK(exact_marginal(net, Assignment(2)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(exact_marginal(net, bind(net, "A=1,B=1")) == doctest::Approx(0.27).epsilon(1e-15));

  const OracleResult r = enumerate_marginal(net, bind(net, "B=1"));
  CHECK(r.enumerated_terms == 2);
  CHECK(enumerate_marginal(net, Assignment(2)).enumerated_terms == 4);
}

TEST_CASE("exact conditionals") {
  const BeliefNetwork a = net_a();
  CHECK(exact_conditional(a, bind(a, "A=1"), bind(a, "B=1")) ==
        doctest::Approx(27.0 / 41.0).epsilon(1e-14));
  CHECK(exact_conditional(a, bind(a, "A=1"), Assignment(2)) == doctest::Approx(0.3));
  const BeliefNetwork c = net_c();
  CHECK(exact_conditional(c, bind(c, "C=1"), Assignment(3)) == doctest::Approx(0.5));

  try {
    exact_conditional(a, bind(a, "A=1"), bind(a, "A=1"));
    FAIL("expected OverlappingAssignments");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OverlappingAssignments);
  }
}

TEST_CASE("exact distributions over node sets") {
  const BeliefNetwork a = net_a();
  const std::vector<NodeIndex> just_a{0};
  const Eigen::VectorXd da = exact_distribution_over(a, just_a);
  REQUIRE(da.size() == 2);
  CHECK(da[0] == doctest::Approx(0.7));
  CHECK(da[1] == doctest::Approx(0.3));

  const Eigen::VectorXd empty = exact_distribution_over(a, {});
  REQUIRE(empty.size() == 1);
  CHECK(empty[0] == doctest::Approx(1.0));

  const BeliefNetwork c = net_c();
  const std::vector<NodeIndex> ab{0, 1};
  const Eigen::VectorXd dc = exact_distribution_over(c, ab);
  REQUIRE(dc.size() == 4);
  CHECK(dc[0] == doctest::Approx(0.45));
  CHECK(dc[1] == doctest::Approx(0.05));
  CHECK(dc[2] == doctest::Approx(0.05));
  CHECK(dc[3] == doctest::Approx(0.45));
}

TEST_CASE("size guard") {
  std::vector<std::string> names;
  std::vector<Cpt> cpts;
  for (int i = 0; i < 26; ++i) {
    names.push_back("N" + std::to_string(i));
    cpts.push_back(Cpt{{}, {0.5}});
  }
  const BeliefNetwork big("big", names, cpts);
  try {
    exact_marginal(big, Assignment(26));
    FAIL("expected NetworkTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NetworkTooLarge);
  }
}

TEST_CASE("oracle properties on random networks") {
  RandomSource rng(21);
  for (int k = 0; k < 40; ++k) {
    const BeliefNetwork net = random_network(rng);
    const std::size_t n = net.size();

    std::vector<NodeIndex> subset;
    for (NodeIndex i = 0; i < n; ++i) {
      if (rng.bernoulli(0.4)) subset.push_back(i);
    }
    const Eigen::VectorXd dist = exact_distribution_over(net, subset);
    CHECK(std::fabs(dist.sum() - 1.0) < 1e-9);
    CHECK(dist.minCoeff() > 0.0);

    // chain rule
    const Assignment evidence = random_assignment(rng, n, 0.3);
    Assignment target(n);
    for (NodeIndex i = 0; i < n; ++i) {
      if (!evidence.is_bound(i) && rng.bernoulli(0.3)) target.bind(i, rng.bernoulli(0.5));
    }
    const double joint = exact_marginal(net, target.merged(evidence));
    const double chained =
        exact_conditional(net, target, evidence) * exact_marginal(net, evidence);
    CHECK(std::fabs(joint - chained) < 1e-12);
  }
}
