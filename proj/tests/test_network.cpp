#include "doctest.h"
#include "selcond/error.hpp"
#include "selcond/exact.hpp"
#include "support.hpp"

using namespace selcond;
using namespace selcond::testing;

namespace {

ErrorCode parse_error_code(const std::string& text) {
  try {
    parse_network(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a parse error");
  return ErrorCode::InvalidArgument;
}

std::size_t parse_error_line(const std::string& text) {
  try {
    parse_network(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("NET-A parses with declaration order and parent list") {
  const BeliefNetwork net = net_a();
  REQUIRE(net.size() == 2);
  CHECK(net.name() == "net_a");
  CHECK(net.node_name(0) == "A");
  CHECK(net.node_name(1) == "B");
  CHECK(net.is_prior(0));
  REQUIRE(net.parents(1).size() == 1);
  CHECK(net.parents(1)[0] == 0);
  CHECK(net.cpt(1).rows == std::vector<double>{0.2, 0.9});
  CHECK(net.children(0).size() == 1);
}

TEST_CASE("parse errors") {
  SUBCASE("row count") {
    CHECK(parse_error_code("network x\nnode A\nprior A : 0.5\nnode B\n"
                           "parents B : A\ncpt B : 0.2\n") ==
          ErrorCode::WrongRowCount);
  }
  SUBCASE("probability of exactly one") {
    CHECK(parse_error_code("network x\nnode A\nprior A : 1.0\n") ==
          ErrorCode::ProbabilityOutOfRange);
  }
  SUBCASE("probability of zero") {
    CHECK(parse_error_code("network x\nnode A\nprior A : 0\n") ==
          ErrorCode::ProbabilityOutOfRange);
  }
  SUBCASE("undeclared parent") {
    CHECK(parse_error_code("network x\nnode B\nparents B : A\ncpt B : 0.1 0.2\n") ==
          ErrorCode::UndeclaredParent);
  }
  SUBCASE("duplicate node") {
    CHECK(parse_error_code("network x\nnode A\nprior A : 0.5\nnode A\nprior A : 0.5\n") ==
          ErrorCode::DuplicateNode);
  }
  SUBCASE("self loop") {
    CHECK(parse_error_code("network x\nnode A\nparents A : A\ncpt A : 0.1 0.2\n") ==
          ErrorCode::CycleDetected);
  }
  SUBCASE("syntax error carries its line number") {
    const std::string text = "network x\n# comment\nnode A\nprior A 0.5\n";
    CHECK(parse_error_code(text) == ErrorCode::SyntaxError);
    CHECK(parse_error_line(text) == 4);
  }
  SUBCASE("missing table") {
    CHECK(parse_error_code("network x\nnode A\nnode B\nprior B : 0.5\n") ==
          ErrorCode::SyntaxError);
  }
  SUBCASE("prior on a node with parents") {
    CHECK(parse_error_code("network x\nnode A\nprior A : 0.5\nnode B\n"
                           "parents B : A\nprior B : 0.5\n") ==
          ErrorCode::SyntaxError);
  }
}

TEST_CASE("cycles are rejected by the constructor") {
  std::vector<Cpt> cpts{Cpt{{1}, {0.1, 0.2}}, Cpt{{0}, {0.3, 0.4}}};
  try {
    BeliefNetwork("loop", {"A", "B"}, cpts);
    FAIL("expected CycleDetected");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CycleDetected);
  }
}

TEST_CASE("comments, blank lines and extra spaces are ignored") {
  const BeliefNetwork net = parse_network(
      "# header\nnetwork   spaced  \n\nnode A   # trailing\nprior A :   0.25\n");
  CHECK(net.size() == 1);
  CHECK(net.cpt(0).rows[0] == 0.25);
}

TEST_CASE("serialization") {
  SUBCASE("single node body") {
    const std::string text = serialize_network(single_node());
    CHECK(text == "network single\nnode Z\nprior Z : 0.5\n");
  }
  SUBCASE("chain order is preserved") {
    const std::string text = serialize_network(net_c());
    const auto a = text.find("node A");
    const auto b = text.find("node B");
    const auto c = text.find("node C");
    CHECK(a < b);
    CHECK(b < c);
  }
  SUBCASE("round trip on random networks, full precision") {
    RandomSource rng(11);
    for (int k = 0; k < 50; ++k) {
      const BeliefNetwork net = random_network(rng);
      CHECK(parse_network(serialize_network(net)) == net);
    }
    CHECK(parse_network(serialize_network(net_a())) == net_a());
  }
}

TEST_CASE("joint probability") {
  const BeliefNetwork net = net_a();
  // hand products 0.3 * 0.9 and 0.7 * 0.8
  CHECK(joint_probability(net, bind(net, "A=1,B=1")) == doctest::Approx(0.27).epsilon(1e-15));
  CHECK(joint_probability(net, bind(net, "A=0,B=0")) == doctest::Approx(0.56).epsilon(1e-15));
  const BeliefNetwork z = single_node();
  CHECK(joint_probability(z, bind(z, "Z=1")) == 0.5);
  try {
    joint_probability(net, bind(net, "A=1"));
    FAIL("expected IncompleteAssignment");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IncompleteAssignment);
  }
}

TEST_CASE("conditional rows") {
  const BeliefNetwork net = net_a();
  CHECK(conditional_row(net, 1, 1, bind(net, "A=1")) == 0.9);
  CHECK(conditional_row(net, 1, 0, bind(net, "A=1")) == doctest::Approx(0.1));
  CHECK(conditional_row(net, 0, 1, Assignment(2)) == 0.3);
  try {
    conditional_row(net, 1, 1, Assignment(2));
    FAIL("expected MissingParentBinding");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingParentBinding);
  }
}

TEST_CASE("row index uses the first parent as most significant bit") {
  const BeliefNetwork net = parse_network(
      "network x\nnode P\nprior P : 0.5\nnode Q\nprior Q : 0.5\n"
      "node R\nparents R : P Q\ncpt R : 0.1 0.2 0.3 0.4\n");
  CHECK(conditional_row(net, 2, 1, bind(net, "P=0,Q=1")) == 0.2);
  CHECK(conditional_row(net, 2, 1, bind(net, "P=1,Q=0")) == 0.3);
}

TEST_CASE("full joint sums to one and is strictly positive") {
  RandomSource rng(3);
  for (int k = 0; k < 30; ++k) {
    const BeliefNetwork net = random_network(rng);
    double total = 0.0;
    Assignment full(net.size());
    std::vector<NodeIndex> all(net.size());
    for (NodeIndex i = 0; i < net.size(); ++i) all[i] = i;
    for (std::size_t c = 0; c < (std::size_t{1} << net.size()); ++c) {
      bind_instantiation(all, c, full);
      const double p = joint_probability(net, full);
      CHECK(p > 0.0);
      total += p;
    }
    CHECK(std::fabs(total - 1.0) < 1e-9);
  }
}

TEST_CASE("assignment parsing") {
  const BeliefNetwork net = net_c();
  const Assignment a = bind(net, "A=1, C=0");
  CHECK(a.value(0) == 1);
  CHECK_FALSE(a.is_bound(1));
  CHECK(a.value(2) == 0);
  CHECK(format_assignment(net, a) == "A=1,C=0");
  CHECK(bind(net, "").empty());

  auto code_of = [&](std::string_view text) {
    try {
      parse_assignment(net, text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::SyntaxError;
  };
  CHECK(code_of("A=1,A=0") == ErrorCode::ConflictingBinding);
  CHECK(code_of("A=1,A=1") == ErrorCode::ConflictingBinding);
  CHECK(code_of("Q=1") == ErrorCode::UnknownNode);
  CHECK(code_of("A=2") == ErrorCode::InvalidArgument);
  CHECK(code_of("A") == ErrorCode::InvalidArgument);
}
