#include "selcond/report.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>

#include "selcond/exact.hpp"

namespace selcond {

using nlohmann::json;

std::string_view to_string(Prior p) {
  return p == Prior::uniform ? "uniform" : "unbiased";
}

std::string_view to_string(GeneratorKind g) {
  return g == GeneratorKind::gibbs ? "gibbs" : "rejection";
}

namespace {

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json names_json(const BeliefNetwork& net, std::span<const NodeIndex> nodes) {
  json out = json::array();
  for (NodeIndex i : nodes) out.push_back(net.node_name(i));
  return out;
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json cost_json(const CostEstimate& c) {
  return {{"subproblem_term", c.subproblem_term},
          {"weight_term", c.weight_term},
          {"phi_min_bound", c.phi_min_bound}};
}

json estimate_json(const RasEstimate& e) {
  return {{"value", e.value},       {"epsilon", e.epsilon},
          {"delta", e.delta},       {"trials", e.trials},
          {"consistent", e.consistent}, {"forward_passes", e.forward_passes}};
}

json trace_json(const BeliefNetwork& net, const GreedyTrace& trace) {
  json steps = json::array();
  for (const GreedyStep& s : trace.steps) {
    steps.push_back({{"node", net.node_name(s.node)},
                     {"parents_added", names_json(net, s.added)},
                     {"lambda_before", s.lambda_before},
                     {"candidate_ratio", s.candidate_ratio},
                     {"test_lhs", s.threshold_test_lhs},
                     {"test_rhs", s.threshold_test_rhs},
                     {"cost_before", cost_json(s.cost_before)},
                     {"cost_after", cost_json(s.cost_after)}});
  }
  return {{"steps", steps}, {"stop", to_string(trace.stop)}};
}

json config_json(const InferenceConfig& c) {
  return {{"greedy_exponent", c.greedy_exponent},
          {"max_s", c.max_conditioning},
          {"prior", to_string(c.prior)},
          {"generator", to_string(c.generator)},
          {"burn_in_sweeps", optional_json(c.burn_in_sweeps)},
          {"rejection_cap", c.rejection_cap},
          {"sample_cap", optional_json(c.sample_cap)}};
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

RunReport execute(const RunRequest& request) {
  const BeliefNetwork net = parse_network(request.network_text);
  const Assignment query = parse_assignment(net, request.query);
  const Assignment evidence = parse_assignment(net, request.evidence);

  RunReport report;
  report.request = request;
  const auto start = std::chrono::steady_clock::now();
  try {
    report.result = infer(net, query, evidence, request.epsilon, request.delta,
                          request.strategy, request.config, request.seed);
  } catch (const InferenceBudgetExceeded& e) {
    report.result = e.partial();
    report.budget_exceeded = true;
    report.message = e.what();
  }
  report.wall_clock_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - start)
                             .count();

  if (request.exact) {
    const double truth = exact_conditional(net, query, evidence);
    report.oracle = truth;
    if (!report.budget_exceeded) {
      report.satisfies_ras =
          satisfies_ras(truth, report.result.estimate, request.epsilon);
    }
    const auto& s = report.result.conditioning;
    report.phi_min_true = exact_distribution_over(net, s).minCoeff();
  }
  return report;
}

json to_json(const RunReport& report) {
  const RunRequest& q = report.request;
  const InferenceResult& r = report.result;
  const BeliefNetwork net = parse_network(q.network_text);

  json subproblems = json::array();
  for (const SubproblemEstimate& s : r.subproblems) {
    subproblems.push_back(
        {{"instantiation", format_assignment(net, s.instantiation)},
         {"numerator", estimate_json(s.numerator)},
         {"denominator",
          s.denominator ? estimate_json(*s.denominator) : json(nullptr)}});
  }

  return {
      {"tool", "selcond"},
      {"version", kToolVersion},
      {"status", report.budget_exceeded ? "budget_exceeded" : "ok"},
      {"message", report.message},
      {"inputs",
       {{"network_path", q.network_path},
        {"network_text", q.network_text},
        {"query", q.query},
        {"evidence", q.evidence},
        {"epsilon", q.epsilon},
        {"delta", q.delta},
        {"strategy", to_string(q.strategy)},
        {"seed", q.seed},
        {"exact", q.exact},
        {"config", config_json(q.config)}}},
      {"strategy_used", to_string(r.strategy)},
      {"estimate", r.estimate},
      {"clamped", r.clamped},
      {"epsilon", r.epsilon},
      {"delta", r.delta},
      {"selected_S", names_json(net, r.conditioning)},
      {"mu_S", vector_json(r.weights)},
      {"weight_trials", r.weight_trials},
      {"subproblem_estimates", subproblems},
      {"numerator", r.numerator},
      {"denominator", r.denominator},
      {"dependence_before", r.dependence_before},
      {"dependence_after", r.dependence_after},
      {"cost_before", cost_json(r.cost_before)},
      {"cost_after", cost_json(r.cost_after)},
      {"greedy_trace", trace_json(net, r.trace)},
      {"trials_total", r.trials_total},
      {"seed", r.seed},
      {"wall_clock_ms", report.wall_clock_ms},
      {"oracle", optional_json(report.oracle)},
      {"satisfies_ras", optional_json(report.satisfies_ras)},
      {"phi_min_true", optional_json(report.phi_min_true)},
  };
}

RunRequest request_from_json(const json& report) {
  const json& in = report.at("inputs");
  RunRequest q;
  q.network_path = in.at("network_path").get<std::string>();
  q.network_text = in.at("network_text").get<std::string>();
  q.query = in.at("query").get<std::string>();
  q.evidence = in.at("evidence").get<std::string>();
  q.epsilon = in.at("epsilon").get<double>();
  q.delta = in.at("delta").get<double>();
  const auto strategy = strategy_from_string(in.at("strategy").get<std::string>());
  if (!strategy) throw Error(ErrorCode::InvalidArgument, "unknown strategy in report");
  q.strategy = *strategy;
  q.seed = in.at("seed").get<std::uint64_t>();
  q.exact = in.at("exact").get<bool>();

  const json& c = in.at("config");
  q.config.greedy_exponent = c.at("greedy_exponent").get<double>();
  q.config.max_conditioning = c.at("max_s").get<std::size_t>();
  q.config.prior =
      c.at("prior").get<std::string>() == "uniform" ? Prior::uniform : Prior::unbiased;
  q.config.generator = c.at("generator").get<std::string>() == "gibbs"
                           ? GeneratorKind::gibbs
                           : GeneratorKind::rejection;
  if (!c.at("burn_in_sweeps").is_null()) {
    q.config.burn_in_sweeps = c.at("burn_in_sweeps").get<std::uint64_t>();
  }
  q.config.rejection_cap = c.at("rejection_cap").get<std::uint64_t>();
  if (!c.at("sample_cap").is_null()) {
    q.config.sample_cap = c.at("sample_cap").get<std::uint64_t>();
  }
  return q;
}

std::string format_text(const RunReport& report) {
  const json j = to_json(report);
  std::ostringstream out;
  out << "status:        " << j["status"].get<std::string>() << "\n";
  if (report.budget_exceeded) out << "message:       " << report.message << "\n";
  out << "query:         Pr[" << report.request.query;
  if (!report.request.evidence.empty()) out << " | " << report.request.evidence;
  out << "]\n";
  out << "estimate:      " << fmt(report.result.estimate)
      << (report.result.clamped ? " (clamped)" : "") << "\n";
  out << "epsilon/delta: " << fmt(report.result.epsilon) << " / "
      << fmt(report.result.delta) << "\n";
  out << "strategy:      " << j["strategy_used"].get<std::string>() << "\n";
  out << "selected S:    " << j["selected_S"].dump() << "\n";
  out << "weights mu_S:  " << j["mu_S"].dump() << "\n";
  out << "D before/after: " << fmt(report.result.dependence_before) << " / "
      << fmt(report.result.dependence_after) << "\n";
  out << "cost before:   2^|S| D^4 = " << fmt(report.result.cost_before.subproblem_term)
      << ", 2^|S|/phi_M = " << fmt(report.result.cost_before.weight_term) << "\n";
  out << "cost after:    2^|S| D^4 = " << fmt(report.result.cost_after.subproblem_term)
      << ", 2^|S|/phi_M = " << fmt(report.result.cost_after.weight_term) << "\n";
  out << "trials:        " << report.result.trials_total << "\n";
  out << "seed:          " << report.result.seed << "\n";
  out << "wall clock:    " << fmt(report.wall_clock_ms) << " ms\n";
  if (report.oracle) {
    out << "oracle:        " << fmt(*report.oracle) << "\n";
    if (report.satisfies_ras) {
      out << "within (1+eps): " << (*report.satisfies_ras ? "yes" : "no") << "\n";
    }
    out << "phi_M (true):  " << fmt(*report.phi_min_true) << "\n";
  }
  return out.str();
}

json analyze_json(const BeliefNetwork& net, const AnalyzeRequest& req) {
  const Assignment evidence = parse_assignment(net, req.evidence);
  const DependenceReport dep = dependence_value(net, evidence);
  json nodes = json::array();
  for (NodeIndex i = 0; i < net.size(); ++i) {
    const NodeDependence& d = dep.per_node[i];
    nodes.push_back({{"node", net.node_name(i)},
                     {"l", d.bounds.lo},
                     {"u", d.bounds.hi},
                     {"lambda", d.lambda}});
  }
  const GreedySelection sel =
      greedy_select(net, evidence, req.greedy_exponent, req.max_conditioning);
  const double after =
      conditioned_dependence(net, evidence, sel.conditioning).dependence_value;
  json out = {{"network", net.name()},
              {"evidence", req.evidence},
              {"nodes", nodes},
              {"dependence_value", dep.dependence_value},
              {"selected_S", names_json(net, sel.conditioning)},
              {"greedy_trace", trace_json(net, sel.trace)},
              {"dependence_before", dep.dependence_value},
              {"dependence_after", after},
              {"cost_before", cost_json(predicted_cost(net, evidence, {}))},
              {"cost_after", cost_json(predicted_cost(net, evidence, sel.conditioning))},
              {"phi_min_true", nullptr}};
  if (req.exact) {
    out["phi_min_true"] = exact_distribution_over(net, sel.conditioning).minCoeff();
  }
  return out;
}

std::string format_analysis(const json& a) {
  std::ostringstream out;
  out << "network " << a["network"].get<std::string>();
  if (!a["evidence"].get<std::string>().empty()) {
    out << "  evidence " << a["evidence"].get<std::string>();
  }
  out << "\n\n";
  out << "node          l            u            lambda\n";
  for (const auto& n : a["nodes"]) {
    char line[160];
    std::snprintf(line, sizeof line, "%-12s  %-11.6g  %-11.6g  %.6g\n",
                  n["node"].get<std::string>().c_str(), n["l"].get<double>(),
                  n["u"].get<double>(), n["lambda"].get<double>());
    out << line;
  }
  out << "\nD = " << fmt(a["dependence_value"].get<double>()) << "\n\n";
  out << "greedy conditioning set S = " << a["selected_S"].dump() << "\n";
  int k = 1;
  for (const auto& s : a["greedy_trace"]["steps"]) {
    out << "  step " << k++ << ": parents of " << s["node"].get<std::string>()
        << " " << s["parents_added"].dump() << "  lambda=" << fmt(s["lambda_before"])
        << "  2^|u'|=" << fmt(s["test_lhs"]) << " < lambda^r=" << fmt(s["test_rhs"])
        << "  ratio=" << fmt(s["candidate_ratio"]) << "  2^|S|D^4: "
        << fmt(s["cost_before"]["subproblem_term"]) << " -> "
        << fmt(s["cost_after"]["subproblem_term"]) << "\n";
  }
  out << "  stop: " << a["greedy_trace"]["stop"].get<std::string>() << "\n\n";
  out << "D before " << fmt(a["dependence_before"]) << ", after "
      << fmt(a["dependence_after"]) << "\n";
  out << "cost before: 2^|S| D^4 = " << fmt(a["cost_before"]["subproblem_term"])
      << ", 2^|S|/phi_M = " << fmt(a["cost_before"]["weight_term"]) << "\n";
  out << "cost after:  2^|S| D^4 = " << fmt(a["cost_after"]["subproblem_term"])
      << ", 2^|S|/phi_M = " << fmt(a["cost_after"]["weight_term"])
      << " (phi_M bound " << fmt(a["cost_after"]["phi_min_bound"]) << ")\n";
  if (!a["phi_min_true"].is_null()) {
    out << "phi_M (true) " << fmt(a["phi_min_true"]) << "\n";
  }
  return out.str();
}

}  // namespace selcond
