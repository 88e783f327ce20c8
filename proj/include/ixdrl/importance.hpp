#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ixdrl/gbdt.hpp"
#include "ixdrl/interestingness.hpp"
#include "ixdrl/shap.hpp"
#include "ixdrl/trace.hpp"

namespace ixdrl {

inline constexpr double kDefaultGateMae = 0.15;

/// Pools (features, dimension value) over every step of every trace and splits
/// the rows uniformly at random; round(split_fraction * N) rows go to training.
std::pair<DesignSet, DesignSet> build_design_matrix(const Dataset& dataset, const InterestingnessFrame& frame,
                                                    std::string_view dimension, double split_fraction,
                                                    std::uint64_t seed);

struct ModelMetrics {
  double mae = 0.0;
  double rmse = 0.0;
  double threshold = kDefaultGateMae;
  bool gated_in = false;  // mae <= threshold
};

ModelMetrics evaluate_model(const GBDTModel& model, const DesignSet& test, double gate_mae = kDefaultGateMae);

struct FeatureImportance {
  std::string feature;
  std::size_t index = 0;
  double mean_abs_shap = 0.0;
  std::size_t rank = 0;  // 1-based
};

struct DensityPoint {
  std::string feature;
  std::size_t row_id = 0;
  double shap = 0.0;
  double feature_value = 0.0;
};

struct GlobalImportance {
  std::vector<FeatureImportance> ranking;  // mean |phi| descending, ties by feature index
  std::vector<DensityPoint> density;       // rows x top features, feature-major
};

GlobalImportance global_importance(const GBDTModel& model, const DesignSet& test, std::size_t top_n = 10,
                                   unsigned jobs = 1);

enum class OutlierDirection { High, Low };
std::string_view to_string(OutlierDirection d);

struct OutlierRecord {
  std::string trace_id;
  std::size_t trace = 0;  // index into the frame / dataset
  std::size_t t = 0;
  std::string dimension;
  double value = 0.0;
  OutlierDirection direction = OutlierDirection::High;
  double lower = 0.0;
  double upper = 0.0;
};

/// Quantile of an ascending-sorted sample, linearly interpolating between
/// order statistics at position q * (n - 1).
double quantile_sorted(const std::vector<double>& sorted, double q);

/// [Q1 - f * IQR, Q3 + f * IQR] of the sample.
std::pair<double, double> iqr_fences(std::vector<double> values, double factor);

/// Steps whose value lies strictly outside the IQR fences of the pooled sample.
std::vector<OutlierRecord> find_outliers(const InterestingnessFrame& frame, std::string_view dimension,
                                         double iqr_factor = 1.5);

struct Contribution {
  std::string feature;
  double value = 0.0;
  double phi = 0.0;
};

struct LocalExplanation {
  OutlierRecord outlier;
  double base_value = 0.0;
  double prediction = 0.0;
  std::vector<Contribution> contributions;  // top_k by |phi|, descending
  double remainder = 0.0;                   // sum of the remaining phi
};

/// Waterfall-style attribution for each outlier. Throws ModelGatedOut when the
/// model failed its accuracy gate, unless `allow_gated` is set.
std::vector<LocalExplanation> local_explanations(const GBDTModel& model, const ModelMetrics& metrics,
                                                 const Dataset& dataset, const std::vector<OutlierRecord>& outliers,
                                                 std::size_t top_k = 10, bool allow_gated = false,
                                                 unsigned jobs = 1);

}  // namespace ixdrl
