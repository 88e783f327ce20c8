#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ixdrl/interestingness.hpp"

namespace ixdrl {

/// Non-owning view of a multivariate sequence stored row-major.
struct SeriesView {
  std::span<const double> data;
  std::size_t dim = 1;

  std::size_t length() const { return dim == 0 ? 0 : data.size() / dim; }
  const double* row(std::size_t i) const { return data.data() + i * dim; }
};

/// Owning multivariate sequence.
struct Series {
  std::vector<double> data;
  std::size_t dim = 1;

  SeriesView view() const { return {data, dim}; }
  std::size_t length() const { return dim == 0 ? 0 : data.size() / dim; }
};

/// Exact dynamic-time-warping cost with a Euclidean per-step cost. When `band`
/// is set, cells with |i - j| > max(ceil(band * max(n, m)), |n - m|) are
/// excluded (Sakoe-Chiba). Throws EmptySequence / DimensionMismatch.
double dtw_distance(SeriesView a, SeriesView b, std::optional<double> band = std::nullopt);

/// Symmetric pairwise distance matrix with a zero diagonal.
struct DistanceMatrix {
  std::vector<std::string> trace_ids;
  std::size_t n = 0;
  std::vector<double> d;  // row-major n x n

  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t size) : n(size), d(size * size, 0.0) {}

  double operator()(std::size_t i, std::size_t j) const { return d[i * n + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    d[i * n + j] = v;
    d[j * n + i] = v;
  }
  bool operator==(const DistanceMatrix&) const = default;
};

/// All n(n-1)/2 DTW distances; every pair is computed independently so the
/// result does not depend on `jobs`.
DistanceMatrix distance_matrix(const std::vector<Series>& series, const std::vector<std::string>& trace_ids,
                               std::optional<double> band = std::nullopt, unsigned jobs = 1);

/// Extracts each trace of the frame as a sequence over the given variable
/// indices (all variables when empty).
std::vector<Series> frame_series(const InterestingnessFrame& frame, const std::vector<std::size_t>& variables = {});

}  // namespace ixdrl
