#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tvcons/graph.hpp"

namespace tvcons {

// Configuration of one reproducible experiment. The on-disk form is JSON;
// README.md documents every key and its default.

struct GraphConfig {
  std::string generator = "complete";  ///< complete | path | cycle | erdos_renyi | edge_list
  Index n = 0;
  double p = 0.5;
  std::uint64_t seed = 0;
  std::string path;  ///< edge-list file, relative paths resolve against the config file
};

struct OutlierConfig {
  Index count = 0;
  double low = 0.0;
  double high = 0.0;
};

struct DataConfig {
  std::vector<double> values;  ///< explicit x0; when empty the seeded distribution is used
  double low = 0.0;
  double high = 1.0;
  std::uint64_t seed = 0;
  OutlierConfig outliers;
};

struct LambdaConfig {
  std::optional<double> value;
  /// lambda = multiplier * (critical lambda for average, lambda_0 upper bound for median).
  std::optional<double> critical_multiplier;
};

struct EngineConfig {
  std::string name;
  std::string type = "admm";  ///< admm | subgradient | gossip
  double rho = 1.0;
  double gamma0 = 1.0;
  double exponent = 1.0;
  std::int64_t max_iterations = 2000;
  double disagreement_tolerance = 0.0;
  double change_tolerance = 0.0;
  std::int64_t record_every = 1;
};

struct StubbornConfig {
  std::vector<Vertex> vertices;
  std::vector<double> values;  ///< one per vertex, or a single value shared by all
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  GraphConfig graph;
  std::string objective = "quadratic";  ///< quadratic (average) | absolute (median)
  DataConfig data;
  LambdaConfig lambda;
  std::vector<EngineConfig> engines;
  StubbornConfig stubborn;
  std::string output_dir = "out";
  std::filesystem::path base_dir;  ///< directory of the config file, not serialized
};

/// Parses and validates; every default is materialized. Throws ConfigError
/// naming the offending field, or the line and column of a syntax error.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const ExperimentConfig& config);

struct Scenario {
  Graph graph;
  NodeFieldd x0;  ///< stubborn entries already overwritten by their pinned values
  VertexSet stubborn;
  double lambda = 0;
};

/// Builds the graph, initial field and lambda. Throws ConfigError on
/// inconsistent input such as stubborn ids outside V.
Scenario build_scenario(const ExperimentConfig& config);

struct ExperimentResult {
  nlohmann::json summary;
  std::vector<std::filesystem::path> csv_paths;
  bool anomaly = false;
};

/// Runs every engine, writes <output_dir>/<engine>.csv and <output_dir>/summary.json.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace tvcons
