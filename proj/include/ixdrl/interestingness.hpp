#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ixdrl/trace.hpp"

namespace ixdrl {

struct AnalysisConfig {
  double rho = 100.0;        // slope scaling for goal conduciveness
  bool online_mode = false;  // normalize value with running per-trace extrema
  bool clamp = true;         // clamp incongruity into [-1, 1]

  void validate() const;
};

namespace dim {
inline constexpr std::string_view kValue = "value";
inline constexpr std::string_view kGoalConduciveness = "goal_conduciveness";
inline constexpr std::string_view kIncongruity = "incongruity";
inline constexpr std::string_view kConfidenceMean = "confidence_mean";
inline constexpr std::string_view kRiskinessMean = "riskiness_mean";

/// The five dimensions that do not depend on a particular action factor.
inline constexpr std::string_view kBase[] = {kValue, kGoalConduciveness, kIncongruity, kConfidenceMean,
                                             kRiskinessMean};
}  // namespace dim

/// Per-trace block of the frame: a row-major [length x variables] table.
struct TraceInterestingness {
  std::string trace_id;
  std::size_t length = 0;
  std::vector<double> values;
  std::vector<double> v01;  // normalized value in [0, 1], one per step

  double at(std::size_t t, std::size_t var, std::size_t var_count) const { return values[t * var_count + var]; }
};

struct InterestingnessFrame {
  std::vector<std::string> variables;  // column order of the CSV export
  std::vector<TraceInterestingness> traces;

  std::size_t variable_count() const { return variables.size(); }
  /// Index of a named variable; throws Error(DimensionUnknown).
  std::size_t variable_index(std::string_view name) const;
  double at(std::size_t trace, std::size_t t, std::size_t var) const {
    return traces[trace].at(t, var, variables.size());
  }
  std::size_t step_count() const;
};

/// Variable names for a factored action space: the five base dimensions then,
/// when there is more than one factor, confidence_<f> and riskiness_<f> per
/// factor. A single factor adds no per-factor columns since they equal the means.
std::vector<std::string> variable_names(const std::vector<std::string>& factor_names);

/// Min-max scaled value per step, using dataset-wide extrema. A degenerate
/// range maps every step to 0.5.
std::vector<std::vector<double>> normalize_values(const Dataset& dataset, const DatasetStats& stats);

/// Causal variant: step t is scaled with the extrema of steps 0..t of its trace.
std::vector<std::vector<double>> normalize_values_online(const Dataset& dataset);

double value_dim(double v01);

/// 1 - 2 * Pielou evenness. Single-action factors report 1.
double confidence_dim(std::span<const double> dist);

/// `window` holds the normalized values ending at t (at most the last three
/// are used). One entry means t = 0 and yields 0.
double goal_conduciveness_dim(std::span<const double> window, double rho);

/// One-step TD error r_t + gamma V(s_t) - V(s_{t-1}) divided by the reward
/// range. Zero when the range is zero.
double incongruity_dim(double reward, double gamma, double value_t, double value_prev, double reward_range,
                       bool clamp = true);

/// 2 (p(1) - p(2)) - 1 using the two largest probabilities.
double riskiness_dim(std::span<const double> dist);

InterestingnessFrame analyze_dataset(const Dataset& dataset, const AnalysisConfig& config, unsigned jobs = 1);

}  // namespace ixdrl
