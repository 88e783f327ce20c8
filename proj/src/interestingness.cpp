#include "ixdrl/interestingness.hpp"

#include <algorithm>
#include <cmath>

#include "ixdrl/common.hpp"

namespace ixdrl {

namespace {

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

double scale01(double v, double lo, double hi) {
  if (!(hi > lo)) return 0.5;
  return std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
}

}  // namespace

void AnalysisConfig::validate() const {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw Error(ErrorCode::InvalidArgument, "rho must be positive");
}

std::size_t InterestingnessFrame::variable_index(std::string_view name) const {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i] == name) return i;
  }
  throw Error(ErrorCode::DimensionUnknown, "no interestingness variable named '" + std::string(name) + "'");
}

std::size_t InterestingnessFrame::step_count() const {
  std::size_t n = 0;
  for (const auto& tr : traces) n += tr.length;
  return n;
}

std::vector<std::string> variable_names(const std::vector<std::string>& factor_names) {
  std::vector<std::string> names(std::begin(dim::kBase), std::end(dim::kBase));
  if (factor_names.size() > 1) {
    for (const auto& f : factor_names) {
      names.push_back("confidence_" + f);
      names.push_back("riskiness_" + f);
    }
  }
  return names;
}

std::vector<std::vector<double>> normalize_values(const Dataset& dataset, const DatasetStats& stats) {
  std::vector<std::vector<double>> out;
  out.reserve(dataset.traces.size());
  for (const auto& tr : dataset.traces) {
    auto& row = out.emplace_back();
    row.reserve(tr.steps.size());
    for (const auto& s : tr.steps) row.push_back(scale01(s.value, stats.value_min, stats.value_max));
  }
  return out;
}

std::vector<std::vector<double>> normalize_values_online(const Dataset& dataset) {
  std::vector<std::vector<double>> out;
  out.reserve(dataset.traces.size());
  for (const auto& tr : dataset.traces) {
    auto& row = out.emplace_back();
    row.reserve(tr.steps.size());
    double lo = 0.0, hi = 0.0;
    for (std::size_t t = 0; t < tr.steps.size(); ++t) {
      const double v = tr.steps[t].value;
      lo = t == 0 ? v : std::min(lo, v);
      hi = t == 0 ? v : std::max(hi, v);
      row.push_back(scale01(v, lo, hi));
    }
  }
  return out;
}

double value_dim(double v01) { return clamp_unit(2.0 * v01 - 1.0); }

double confidence_dim(std::span<const double> dist) {
  const std::size_t n = dist.size();
  if (n <= 1) return 1.0;
  // An all-equal vector is exactly uniform; skip the logs so it lands on -1.
  if (std::all_of(dist.begin(), dist.end(), [&](double p) { return p == dist[0]; })) return -1.0;
  double entropy = 0.0;
  for (double p : dist) {
    if (p > 0.0) entropy -= p * std::log(p);
  }
  const double evenness = std::clamp(entropy / std::log(static_cast<double>(n)), 0.0, 1.0);
  return clamp_unit(1.0 - 2.0 * evenness);
}

double goal_conduciveness_dim(std::span<const double> window, double rho) {
  const std::size_t n = window.size();
  if (n <= 1) return 0.0;
  double slope;
  if (n == 2) {
    slope = window[1] - window[0];
  } else {
    // (3 v_t - 4 v_{t-1} + v_{t-2}) / 2 written on differences so flat windows give exactly 0
    slope = (3.0 * (window[n - 1] - window[n - 2]) - (window[n - 2] - window[n - 3])) / 2.0;
  }
  return std::sin(std::atan(rho * slope));
}

double incongruity_dim(double reward, double gamma, double value_t, double value_prev, double reward_range,
                       bool clamp) {
  if (!(reward_range > 0.0)) return 0.0;
  const double td = reward + gamma * value_t - value_prev;
  const double scaled = td / reward_range;
  return clamp ? clamp_unit(scaled) : scaled;
}

double riskiness_dim(std::span<const double> dist) {
  if (dist.size() <= 1) return 1.0;
  double first = -1.0, second = -1.0;
  for (double p : dist) {
    if (p > first) {
      second = first;
      first = p;
    } else if (p > second) {
      second = p;
    }
  }
  return clamp_unit(2.0 * (first - second) - 1.0);
}

InterestingnessFrame analyze_dataset(const Dataset& dataset, const AnalysisConfig& config, unsigned jobs) {
  config.validate();
  if (dataset.traces.empty()) throw Error(ErrorCode::EmptyDataset, "dataset has no traces");

  const Manifest& m = dataset.manifest;
  const DatasetStats stats = dataset_stats(dataset);
  const auto v01 = config.online_mode ? normalize_values_online(dataset) : normalize_values(dataset, stats);
  const double reward_range = stats.reward_range();
  const std::size_t factors = m.factor_count();

  InterestingnessFrame frame;
  frame.variables = variable_names(m.factor_names);
  frame.traces.resize(dataset.traces.size());
  const std::size_t nv = frame.variables.size();
  const bool per_factor = factors > 1;

  parallel_for(dataset.traces.size(), jobs, [&](std::size_t i) {
    const Trace& tr = dataset.traces[i];
    TraceInterestingness& out = frame.traces[i];
    out.trace_id = tr.trace_id;
    out.length = tr.steps.size();
    out.v01 = v01[i];
    out.values.assign(out.length * nv, 0.0);
    for (std::size_t t = 0; t < out.length; ++t) {
      const Step& s = tr.steps[t];
      double* row = out.values.data() + t * nv;
      row[0] = value_dim(out.v01[t]);
      const std::size_t w0 = t >= 2 ? t - 2 : 0;
      row[1] = goal_conduciveness_dim(std::span<const double>(out.v01).subspan(w0, t - w0 + 1), config.rho);
      row[2] = t == 0 ? 0.0
                      : incongruity_dim(s.reward, m.discount, s.value, tr.steps[t - 1].value, reward_range,
                                        config.clamp);
      double conf_sum = 0.0, risk_sum = 0.0;
      for (std::size_t f = 0; f < factors; ++f) {
        const double c = confidence_dim(s.dists[f]);
        const double r = riskiness_dim(s.dists[f]);
        conf_sum += c;
        risk_sum += r;
        if (per_factor) {
          row[5 + 2 * f] = c;
          row[6 + 2 * f] = r;
        }
      }
      row[3] = clamp_unit(conf_sum / static_cast<double>(factors));
      row[4] = clamp_unit(risk_sum / static_cast<double>(factors));
    }
  });
  return frame;
}

}  // namespace ixdrl
