#include "ixdrl/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ixdrl/common.hpp"

namespace ixdrl {

namespace {

inline double euclidean(const double* a, const double* b, std::size_t dim) {
  double acc = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    const double diff = a[k] - b[k];
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

}  // namespace

double dtw_distance(SeriesView a, SeriesView b, std::optional<double> band) {
  if (a.dim == 0 || b.dim == 0 || a.data.empty() || b.data.empty()) {
    throw Error(ErrorCode::EmptySequence, "DTW needs two non-empty sequences");
  }
  if (a.dim != b.dim) {
    throw Error(ErrorCode::DimensionMismatch,
                "sequence dimensions differ: " + std::to_string(a.dim) + " vs " + std::to_string(b.dim));
  }
  if (a.data.size() % a.dim != 0 || b.data.size() % b.dim != 0) {
    throw Error(ErrorCode::DimensionMismatch, "sequence storage is not a multiple of its dimension");
  }
  if (band && !(*band > 0.0 && *band <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "band must lie in (0, 1]");
  }

  const std::size_t n = a.length();
  const std::size_t m = b.length();
  const std::size_t gap = n > m ? n - m : m - n;
  std::size_t width = std::max(n, m);
  if (band) {
    width = static_cast<std::size_t>(std::ceil(*band * static_cast<double>(std::max(n, m))));
    width = std::max(width, gap);
  }

  constexpr double inf = std::numeric_limits<double>::infinity();
  // Two rolling rows indexed 0..m; column 0 is the virtual boundary.
  std::vector<double> prev(m + 1, inf), cur(m + 1, inf);
  prev[0] = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t lo = i > width ? i - width : 1;
    const std::size_t hi = std::min(m, i + width);
    cur[lo - 1] = inf;
    const double* ai = a.row(i - 1);
    for (std::size_t j = lo; j <= hi; ++j) {
      const double best = std::min({prev[j], cur[j - 1], prev[j - 1]});
      cur[j] = euclidean(ai, b.row(j - 1), a.dim) + best;
    }
    if (hi + 1 <= m) cur[hi + 1] = inf;
    std::swap(prev, cur);
    cur[0] = inf;
  }
  return prev[m];
}

DistanceMatrix distance_matrix(const std::vector<Series>& series, const std::vector<std::string>& trace_ids,
                               std::optional<double> band, unsigned jobs) {
  const std::size_t n = series.size();
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "distance matrix needs at least two traces");
  if (trace_ids.size() != n) throw Error(ErrorCode::InvalidArgument, "one trace id per series is required");

  DistanceMatrix dm(n);
  dm.trace_ids = trace_ids;
  // Row i owns pairs (i, j > i). Rows are handed out in index order, so the
  // longest rows start first.
  parallel_for(n - 1, jobs, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) dm.set(i, j, dtw_distance(series[i].view(), series[j].view(), band));
  });
  return dm;
}

std::vector<Series> frame_series(const InterestingnessFrame& frame, const std::vector<std::size_t>& variables) {
  std::vector<std::size_t> vars = variables;
  if (vars.empty()) {
    vars.resize(frame.variable_count());
    for (std::size_t v = 0; v < vars.size(); ++v) vars[v] = v;
  }
  const std::size_t nv = frame.variable_count();
  std::vector<Series> out;
  out.reserve(frame.traces.size());
  for (const auto& tr : frame.traces) {
    Series s;
    s.dim = vars.size();
    s.data.reserve(tr.length * vars.size());
    for (std::size_t t = 0; t < tr.length; ++t) {
      for (std::size_t v : vars) s.data.push_back(tr.at(t, v, nv));
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace ixdrl
