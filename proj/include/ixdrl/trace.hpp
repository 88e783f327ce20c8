#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ixdrl {

/// Describes the action factors, observation features and discount shared by
/// every trace in a dataset. Stored as a sidecar JSON file next to the traces.
struct Manifest {
  std::string schema_version = "1";
  std::vector<std::string> factor_names;
  std::vector<std::vector<std::string>> actions_per_factor;
  std::vector<std::string> feature_names;
  double discount = 1.0;
  std::optional<std::pair<double, double>> reward_range_override;

  std::size_t factor_count() const { return factor_names.size(); }
  std::size_t feature_count() const { return feature_names.size(); }

  /// Throws Error(InvalidArgument) when an invariant is broken.
  void validate() const;

  bool operator==(const Manifest&) const = default;
};

/// One timestep of interaction data.
struct Step {
  std::string trace_id;
  std::size_t t = 0;
  std::vector<double> features;
  std::vector<int> action;               // one chosen index per factor
  std::vector<std::vector<double>> dists;  // one probability vector per factor
  double value = 0.0;
  double reward = 0.0;
  bool done = false;

  bool operator==(const Step&) const = default;
};

struct Trace {
  std::string trace_id;
  std::vector<Step> steps;
  std::optional<std::string> outcome_tag;

  std::size_t length() const { return steps.size(); }

  bool operator==(const Trace&) const = default;
};

struct Dataset {
  Manifest manifest;
  std::vector<Trace> traces;

  std::size_t step_count() const;

  bool operator==(const Dataset&) const = default;
};

struct DatasetStats {
  double value_min = 0.0;
  double value_max = 0.0;
  double reward_min = 0.0;
  double reward_max = 0.0;
  std::size_t trace_count = 0;
  double length_mean = 0.0;
  double length_std = 0.0;  // population standard deviation

  double reward_range() const { return reward_max - reward_min; }
};

/// Checks a probability vector against the 1e-6 tolerance and renormalizes it
/// in place. Returns an error message, or an empty string when valid.
std::string check_and_normalize_dist(std::vector<double>& dist);

/// Validates every step of every trace against the manifest and the trace
/// invariants, renormalizing dists. Throws Error on the first violation.
void validate_dataset(Dataset& dataset);

/// `<dir>/<stem>.manifest.json` for a trace file `<dir>/<stem>.jsonl`.
std::filesystem::path sidecar_manifest_path(const std::filesystem::path& trace_path);

Manifest load_manifest(const std::filesystem::path& path);
void write_manifest(const Manifest& manifest, const std::filesystem::path& path);

Dataset load_dataset(const std::filesystem::path& trace_path,
                     const std::filesystem::path& manifest_path);
inline Dataset load_dataset(const std::filesystem::path& trace_path) {
  return load_dataset(trace_path, sidecar_manifest_path(trace_path));
}

void write_dataset(const Dataset& dataset, const std::filesystem::path& trace_path,
                   const std::filesystem::path& manifest_path);
inline void write_dataset(const Dataset& dataset, const std::filesystem::path& trace_path) {
  write_dataset(dataset, trace_path, sidecar_manifest_path(trace_path));
}

/// Serializes one step as a single JSONL line (no trailing newline).
std::string step_to_jsonl(const Step& step, const std::optional<std::string>& outcome_tag);

DatasetStats dataset_stats(const Dataset& dataset);

}  // namespace ixdrl
