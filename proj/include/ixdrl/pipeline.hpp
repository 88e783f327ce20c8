#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ixdrl/gbdt.hpp"
#include "ixdrl/gridworld.hpp"
#include "ixdrl/interestingness.hpp"

namespace ixdrl {

inline constexpr const char* kToolVersion = "0.1.0";

enum class Stage { Gen, Analyze, Cluster, Explain, Report };
std::string_view to_string(Stage s);

// Exit statuses of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitGated = 3;

struct GenOptions {
  int width = 10;
  int height = 10;
  std::vector<grid::ScenarioFamily> families = {grid::ScenarioFamily::NearGoal,
                                                grid::ScenarioFamily::FarGoalHazards};
  std::size_t traces_per_family = 100;
  std::size_t episodes = 20000;
  double alpha_v = 0.1;
  double alpha_p = 0.1;
  double discount = 0.95;
};

struct ClusterOptions {
  std::optional<double> band = 0.1;  // unset = exact full DTW
  std::size_t k_min = 2;
  std::optional<std::size_t> k_max;  // default min(20, n - 1)
  std::size_t min_cluster_size = 2;
  bool base_dims_only = false;
};

struct ExplainOptions {
  double split = 0.8;
  double gate_mae = 0.15;
  double iqr_factor = 1.5;
  std::size_t top_k = 10;
  bool allow_gated = false;
  std::vector<std::string> dimensions;  // empty = every frame variable
  GBDTParams gbdt;
};

struct RunConfig {
  std::filesystem::path dataset;   // trace JSONL; defaults to <out>/dataset.jsonl
  std::filesystem::path manifest;  // defaults to the sidecar of `dataset`
  std::filesystem::path out = "ixdrl_out";
  std::uint64_t seed = 0;
  unsigned jobs = 0;  // 0 = hardware concurrency
  AnalysisConfig analysis;
  GenOptions gen;
  ClusterOptions cluster;
  ExplainOptions explain;

  std::filesystem::path dataset_path() const;
  std::filesystem::path manifest_path() const;
};

/// Runs the requested stages in pipeline order, writing each stage's
/// artifacts plus run_summary_<stage>.json under config.out. Errors are
/// reported on `log` and mapped onto the exit statuses above.
int run_pipeline(const RunConfig& config, const std::vector<Stage>& stages, std::ostream& log);

/// Full command-line entry point (subcommands gen/analyze/cluster/explain/report/run).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ixdrl
