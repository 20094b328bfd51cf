#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"
#include "selcond/reformulation.hpp"

namespace selcond {

inline constexpr std::string_view kToolVersion = "0.1.0";
/// Seed used when none is given. Never derived from the clock.
inline constexpr std::uint64_t kDefaultSeed = 0x5E1EC7EDULL;

/// Everything needed to reproduce an `infer` run.
struct RunRequest {
  std::string network_path;
  std::string network_text;  // authoritative; the path is informational
  std::string query;
  std::string evidence;
  double epsilon = 0.1;
  double delta = 0.05;
  Strategy strategy = Strategy::automatic;
  InferenceConfig config;
  std::uint64_t seed = kDefaultSeed;
  bool exact = false;
};

struct RunReport {
  RunRequest request;
  InferenceResult result;
  bool budget_exceeded = false;
  std::string message;  // set when budget_exceeded
  double wall_clock_ms = 0.0;
  std::optional<double> oracle;
  std::optional<bool> satisfies_ras;
  std::optional<double> phi_min_true;
};

/// Parses the request's network and assignments and runs infer(). Budget
/// exhaustion is reported in the returned report, not thrown; every other
/// error propagates.
RunReport execute(const RunRequest& request);

nlohmann::json to_json(const RunReport& report);
/// Reads the `inputs` object of a report produced by to_json.
RunRequest request_from_json(const nlohmann::json& report);
std::string format_text(const RunReport& report);

struct AnalyzeRequest {
  std::string evidence;
  double greedy_exponent = 1.0;
  std::size_t max_conditioning = 12;
  bool exact = false;
};

nlohmann::json analyze_json(const BeliefNetwork& net, const AnalyzeRequest& req);
std::string format_analysis(const nlohmann::json& analysis);

std::string_view to_string(Prior p);
std::string_view to_string(GeneratorKind g);

}  // namespace selcond
