#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "adaptdim/error.hpp"

namespace adaptdim::cli {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kVersion = "0.1.0";

/// Schema violation in an experiment config (exit code 2).
class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Distribution given inline or by example name; kept in its input form so
/// configs round-trip.
struct DistributionConfig {
  json value;
};

struct KGammaParams {
  std::optional<std::string> spectrum_file;
  std::optional<std::vector<double>> spectrum;
  double gamma = 1.0;
  std::optional<double> alpha;
};

struct LimitCertParams {
  std::string points_file;
  std::size_t k = 0;
};

struct ShatterCheckParams {
  std::string points_file;
  double gamma = 1.0;
  std::size_t cap = 20;
  bool witnesses = false;
};

struct FatDimParams {
  std::string points_file;
  double gamma = 1.0;
  std::size_t max_subset = 10;
};

struct EigenProbParams {
  DistributionConfig distribution;
  double gamma = 1.0;
  std::vector<std::size_t> m_grid;
  std::size_t trials = 200;
};

struct MUnderlineParams {
  DistributionConfig distribution;
  double gamma = 1.0;
  std::size_t m_max = 100;
  std::size_t trials = 200;
};

struct EdgeCheckParams {
  DistributionConfig distribution;
  double beta = 0.25;
  std::size_t trials = 20;
};

struct LearnCurveParams {
  DistributionConfig distribution;
  double gamma = 1.0;
  std::vector<std::size_t> m_grid;
  std::size_t trials = 50;
  std::string learner = "erm_heuristic";
  std::string reference = "margin";
};

struct SampleComplexityParams {
  LearnCurveParams curve;
  double epsilon = 0.15;
};

struct ReproduceParams {
  double budget_seconds = 600.0;
};

using CommandParams = std::variant<KGammaParams, LimitCertParams, ShatterCheckParams, FatDimParams, EigenProbParams,
                                   MUnderlineParams, EdgeCheckParams, LearnCurveParams, SampleComplexityParams,
                                   ReproduceParams>;

struct ExperimentConfig {
  std::string command;
  int schema_version = kSchemaVersion;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::string out = "out";
  CommandParams params;
};

struct ExperimentReport {
  std::string command;
  std::string inputs_digest;
  std::vector<std::string> outputs;
  json summary = json::object();
  double wall_clock_seconds = 0.0;
  std::string version = kVersion;
  std::uint64_t seed = 0;
  bool complete = true;
};

const std::vector<std::string>& commands();

/// Validates `j` against the schema of `command`; unknown fields, a wrong
/// schema_version and out-of-range values throw ConfigError.
ExperimentConfig parse_config(const std::string& command, const json& j);
json to_json(const ExperimentConfig& config);
json to_json(const ExperimentReport& report);

/// Dispatches to the owning module, writes CSV/JSON outputs and report.json
/// into config.out.
ExperimentReport run(const ExperimentConfig& config);

/// Full command-line entry point; returns the process exit code
/// (0 ok, 2 config error, 3 runtime error).
int main_entry(int argc, char** argv);

}  // namespace adaptdim::cli
