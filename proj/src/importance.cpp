#include "ixdrl/importance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ixdrl/common.hpp"

namespace ixdrl {

namespace {

// Indices sorted by |v| descending; equal magnitudes keep index order.
std::vector<std::size_t> order_by_magnitude(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return std::abs(v[a]) > std::abs(v[b]); });
  return idx;
}

}  // namespace

std::pair<DesignSet, DesignSet> build_design_matrix(const Dataset& dataset, const InterestingnessFrame& frame,
                                                    std::string_view dimension, double split_fraction,
                                                    std::uint64_t seed) {
  const std::size_t var = frame.variable_index(dimension);
  if (!(split_fraction > 0.0 && split_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "split fraction must lie strictly between 0 and 1");
  }
  if (frame.traces.size() != dataset.traces.size()) {
    throw Error(ErrorCode::InvalidArgument, "frame and dataset disagree on the number of traces");
  }
  std::vector<DesignSet::Origin> rows;
  for (std::size_t i = 0; i < dataset.traces.size(); ++i) {
    if (frame.traces[i].length != dataset.traces[i].length()) {
      throw Error(ErrorCode::InvalidArgument, "frame and dataset disagree on trace '" + dataset.traces[i].trace_id + "'");
    }
    for (std::size_t t = 0; t < dataset.traces[i].length(); ++t) rows.push_back({i, t});
  }
  std::mt19937_64 rng(seed);
  std::shuffle(rows.begin(), rows.end(), rng);
  const auto n_train = static_cast<std::size_t>(std::llround(split_fraction * static_cast<double>(rows.size())));

  DesignSet train, test;
  train.feature_names = test.feature_names = dataset.manifest.feature_names;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& o = rows[r];
    DesignSet& dst = r < n_train ? train : test;
    dst.push_row(dataset.traces[o.trace].steps[o.t].features, frame.at(o.trace, o.t, var), o);
  }
  return {std::move(train), std::move(test)};
}

ModelMetrics evaluate_model(const GBDTModel& model, const DesignSet& test, double gate_mae) {
  if (test.size() == 0) throw Error(ErrorCode::EmptyTestSet, "no test rows");
  double abs_sum = 0.0, sq_sum = 0.0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const double err = model.predict(test.row(i)) - test.y[i];
    abs_sum += std::abs(err);
    sq_sum += err * err;
  }
  ModelMetrics m;
  const auto n = static_cast<double>(test.size());
  m.mae = abs_sum / n;
  m.rmse = std::sqrt(sq_sum / n);
  m.threshold = gate_mae;
  m.gated_in = m.mae <= gate_mae;
  return m;
}

GlobalImportance global_importance(const GBDTModel& model, const DesignSet& test, std::size_t top_n, unsigned jobs) {
  const std::size_t nf = model.feature_count();
  std::vector<ShapVector> shap(test.size());
  parallel_for(test.size(), jobs, [&](std::size_t i) { shap[i] = tree_shap(model, test.row(i)); });

  std::vector<double> mean_abs(nf, 0.0);
  for (const auto& s : shap) {
    for (std::size_t f = 0; f < nf; ++f) mean_abs[f] += std::abs(s.phi[f]);
  }
  if (!shap.empty()) {
    for (double& v : mean_abs) v /= static_cast<double>(shap.size());
  }

  GlobalImportance out;
  const auto order = order_by_magnitude(mean_abs);
  for (std::size_t r = 0; r < order.size(); ++r) {
    const std::size_t f = order[r];
    out.ranking.push_back(FeatureImportance{model.feature_names[f], f, mean_abs[f], r + 1});
  }
  const std::size_t top = std::min(top_n, nf);
  for (std::size_t r = 0; r < top; ++r) {
    const std::size_t f = order[r];
    for (std::size_t i = 0; i < shap.size(); ++i) {
      out.density.push_back(DensityPoint{model.feature_names[f], i, shap[i].phi[f], test.row(i)[f]});
    }
  }
  return out;
}

std::string_view to_string(OutlierDirection d) { return d == OutlierDirection::High ? "high" : "low"; }

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw Error(ErrorCode::InvalidArgument, "quantile of an empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::pair<double, double> iqr_fences(std::vector<double> values, double factor) {
  if (!(factor > 0.0)) throw Error(ErrorCode::InvalidArgument, "IQR factor must be positive");
  std::sort(values.begin(), values.end());
  const double q1 = quantile_sorted(values, 0.25);
  const double q3 = quantile_sorted(values, 0.75);
  const double iqr = q3 - q1;
  return {q1 - factor * iqr, q3 + factor * iqr};
}

std::vector<OutlierRecord> find_outliers(const InterestingnessFrame& frame, std::string_view dimension,
                                         double iqr_factor) {
  const std::size_t var = frame.variable_index(dimension);
  std::vector<double> pooled;
  pooled.reserve(frame.step_count());
  for (std::size_t i = 0; i < frame.traces.size(); ++i) {
    for (std::size_t t = 0; t < frame.traces[i].length; ++t) pooled.push_back(frame.at(i, t, var));
  }
  if (pooled.empty()) throw Error(ErrorCode::InvalidArgument, "frame has no steps");
  const auto [lower, upper] = iqr_fences(pooled, iqr_factor);

  std::vector<OutlierRecord> out;
  for (std::size_t i = 0; i < frame.traces.size(); ++i) {
    for (std::size_t t = 0; t < frame.traces[i].length; ++t) {
      const double v = frame.at(i, t, var);
      if (v > upper || v < lower) {
        out.push_back(OutlierRecord{frame.traces[i].trace_id, i, t, std::string(dimension), v,
                                    v > upper ? OutlierDirection::High : OutlierDirection::Low, lower, upper});
      }
    }
  }
  return out;
}

std::vector<LocalExplanation> local_explanations(const GBDTModel& model, const ModelMetrics& metrics,
                                                 const Dataset& dataset, const std::vector<OutlierRecord>& outliers,
                                                 std::size_t top_k, bool allow_gated, unsigned jobs) {
  if (!metrics.gated_in && !allow_gated) {
    throw Error(ErrorCode::ModelGatedOut, "model MAE " + format_double(metrics.mae) + " exceeds the gate " +
                                              format_double(metrics.threshold));
  }
  std::vector<LocalExplanation> out(outliers.size());
  parallel_for(outliers.size(), jobs, [&](std::size_t k) {
    const OutlierRecord& o = outliers[k];
    if (o.trace >= dataset.traces.size() || o.t >= dataset.traces[o.trace].length()) {
      throw Error(ErrorCode::InvalidArgument, "outlier refers to a step outside the dataset");
    }
    const auto& x = dataset.traces[o.trace].steps[o.t].features;
    const ShapVector sv = tree_shap(model, x);
    LocalExplanation& e = out[k];
    e.outlier = o;
    e.base_value = sv.base_value;
    e.prediction = model.predict(x);
    const auto order = order_by_magnitude(sv.phi);
    const std::size_t shown = std::min(top_k, order.size());
    for (std::size_t r = 0; r < order.size(); ++r) {
      const std::size_t f = order[r];
      if (r < shown) {
        e.contributions.push_back(Contribution{model.feature_names[f], x[f], sv.phi[f]});
      } else {
        e.remainder += sv.phi[f];
      }
    }
  });
  return out;
}

}  // namespace ixdrl
