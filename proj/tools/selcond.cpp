// selcond: selective-conditioning inference for binary belief networks.
//
// Exit status: 0 ok, 2 usage, 3 network file/parse, 4 runtime, 5 sample
// budget exceeded (a partial report is still printed).

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "selcond/report.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 2, kParse = 3, kRuntime = 4, kBudget = 5 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw selcond::ParseError(selcond::ErrorCode::SyntaxError, 0,
                              "cannot open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Assignment syntax errors are usage errors; everything else is a runtime
// failure.
bool is_usage(const selcond::Error& e) {
  using selcond::ErrorCode;
  switch (e.code()) {
    case ErrorCode::UnknownNode:
    case ErrorCode::ConflictingBinding:
    case ErrorCode::InvalidArgument:
    case ErrorCode::OverlappingSets:
    case ErrorCode::OverlappingAssignments:
      return true;
    default:
      return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate inference in binary belief networks by selective conditioning"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(selcond::kToolVersion));

  // analyze
  std::string an_network;
  std::string an_report = "text";
  selcond::AnalyzeRequest an;
  auto* analyze = app.add_subcommand("analyze", "dependence values and greedy conditioning set");
  analyze->add_option("--network", an_network, ".bnet file")->required();
  analyze->add_option("--evidence", an.evidence, "evidence, e.g. B=1,C=0");
  analyze->add_option("--greedy-exponent", an.greedy_exponent, "exponent on lambda in the greedy tests")
      ->check(CLI::Range(1.0, 64.0));
  analyze->add_option("--max-s", an.max_conditioning, "largest conditioning set");
  analyze->add_flag("--exact", an.exact, "also report the true phi_M by enumeration");
  analyze->add_option("--report", an_report, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  // infer
  selcond::RunRequest req;
  std::string in_report = "text";
  std::string strategy = "auto";
  std::string prior = "unbiased";
  std::string generator = "rejection";
  std::string replay;
  std::optional<std::uint64_t> burn_in;
  std::optional<std::uint64_t> sample_cap;
  auto* infer = app.add_subcommand("infer", "estimate Pr[query | evidence]");
  infer->add_option("--network", req.network_path, ".bnet file");
  infer->add_option("--query", req.query, "query, e.g. A=1");
  infer->add_option("--evidence", req.evidence, "evidence, e.g. B=1");
  infer->add_option("--epsilon", req.epsilon, "relative error (> 0)")->capture_default_str();
  infer->add_option("--delta", req.delta, "failure probability in (0, 1]")->capture_default_str();
  infer->add_option("--seed", req.seed, "random seed")->capture_default_str();
  infer->add_option("--strategy", strategy, "auto, direct or selective")
      ->check(CLI::IsMember({"auto", "direct", "selective"}));
  infer->add_option("--greedy-exponent", req.config.greedy_exponent, "exponent on lambda in the greedy tests")
      ->check(CLI::Range(1.0, 64.0));
  infer->add_option("--max-s", req.config.max_conditioning, "largest conditioning set");
  infer->add_option("--prior", prior, "unbiased or uniform")
      ->check(CLI::IsMember({"unbiased", "uniform"}));
  infer->add_option("--generator", generator, "rejection or gibbs")
      ->check(CLI::IsMember({"rejection", "gibbs"}));
  infer->add_option("--burn-in", burn_in, "gibbs sweeps per trial");
  infer->add_option("--rejection-cap", req.config.rejection_cap, "attempts per rejection trial");
  infer->add_option("--sample-cap", sample_cap, "trial cap for every stopping rule");
  infer->add_flag("--exact", req.exact, "compare against exact enumeration");
  infer->add_option("--report", in_report, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  infer->add_option("--replay", replay, "re-run the inputs recorded in a JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (analyze->parsed()) {
    selcond::BeliefNetwork net = [&] {
      try {
        return selcond::load_network(an_network);
      } catch (const selcond::Error& e) {
        std::cerr << "selcond: " << an_network << ": " << e.what() << "\n";
        std::exit(kParse);
      }
    }();
    try {
      const auto result = selcond::analyze_json(net, an);
      if (an_report == "json") {
        std::cout << result.dump(2) << "\n";
      } else {
        std::cout << selcond::format_analysis(result);
      }
      return kOk;
    } catch (const selcond::Error& e) {
      std::cerr << "selcond: " << e.what() << "\n";
      return is_usage(e) ? kUsage : kRuntime;
    }
  }

  // infer
  try {
    if (!replay.empty()) {
      nlohmann::json recorded;
      try {
        recorded = nlohmann::json::parse(read_file(replay));
        req = selcond::request_from_json(recorded);
      } catch (const std::exception& e) {
        std::cerr << "selcond: " << replay << ": " << e.what() << "\n";
        return kParse;
      }
    } else {
      if (req.network_path.empty() || req.query.empty()) {
        throw UsageError("infer needs --network and --query (or --replay)");
      }
      if (!(req.epsilon > 0.0)) throw UsageError("--epsilon must be positive");
      if (!(req.delta > 0.0 && req.delta <= 1.0)) {
        throw UsageError("--delta must lie in (0, 1]");
      }
      req.strategy = *selcond::strategy_from_string(strategy);
      req.config.prior =
          prior == "uniform" ? selcond::Prior::uniform : selcond::Prior::unbiased;
      req.config.generator = generator == "gibbs" ? selcond::GeneratorKind::gibbs
                                                  : selcond::GeneratorKind::rejection;
      req.config.burn_in_sweeps = burn_in;
      req.config.sample_cap = sample_cap;
      try {
        req.network_text = read_file(req.network_path);
        (void)selcond::parse_network(req.network_text);
      } catch (const selcond::Error& e) {
        std::cerr << "selcond: " << req.network_path << ": " << e.what() << "\n";
        return kParse;
      }
    }
  } catch (const UsageError& e) {
    std::cerr << "selcond: " << e.what() << "\n";
    return kUsage;
  }

  try {
    const selcond::RunReport report = selcond::execute(req);
    if (in_report == "json") {
      std::cout << selcond::to_json(report).dump(2) << "\n";
    } else {
      std::cout << selcond::format_text(report);
    }
    if (report.budget_exceeded) {
      std::cerr << "selcond: " << report.message << "\n";
      return kBudget;
    }
    return kOk;
  } catch (const selcond::Error& e) {
    std::cerr << "selcond: " << e.what() << "\n";
    return is_usage(e) ? kUsage : kRuntime;
  } catch (const std::exception& e) {
    std::cerr << "selcond: " << e.what() << "\n";
    return kRuntime;
  }
}
