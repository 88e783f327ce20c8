#include "ixdrl/clustering.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <tuple>

#include "ixdrl/common.hpp"

namespace ixdrl {

namespace {

struct PairKey {
  double d = std::numeric_limits<double>::infinity();
  std::size_t lo = std::numeric_limits<std::size_t>::max();
  std::size_t hi = std::numeric_limits<std::size_t>::max();

  bool operator<(const PairKey& o) const { return std::tie(d, lo, hi) < std::tie(o.d, o.lo, o.hi); }
};

std::size_t count_distinct(const std::vector<std::size_t>& labels) {
  std::vector<std::size_t> sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  return static_cast<std::size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

}  // namespace

Dendrogram agglomerate(const DistanceMatrix& dm) {
  const std::size_t n = dm.n;
  Dendrogram dend;
  dend.leaves = n;
  if (n < 2) return dend;

  // Lance-Williams update for complete linkage over "slots": slot s holds the
  // cluster whose current id is ids[s].
  std::vector<double> d = dm.d;
  std::vector<std::size_t> ids(n), sizes(n, 1);
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  std::vector<bool> active(n, true);
  std::vector<PairKey> nn_key(n);
  std::vector<std::size_t> nn_slot(n, n);

  auto key_of = [&](std::size_t i, std::size_t j) {
    return PairKey{d[i * n + j], std::min(ids[i], ids[j]), std::max(ids[i], ids[j])};
  };
  auto refresh = [&](std::size_t i) {
    nn_key[i] = PairKey{};
    nn_slot[i] = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || !active[j]) continue;
      const PairKey k = key_of(i, j);
      if (k < nn_key[i]) {
        nn_key[i] = k;
        nn_slot[i] = j;
      }
    }
  };
  for (std::size_t i = 0; i < n; ++i) refresh(i);

  dend.merges.reserve(n - 1);
  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (active[i] && nn_slot[i] < n && (best == n || nn_key[i] < nn_key[best])) best = i;
    }
    std::size_t keep = best, gone = nn_slot[best];
    if (gone < keep) std::swap(keep, gone);

    const PairKey chosen = nn_key[best];
    dend.merges.push_back(Merge{chosen.lo, chosen.hi, chosen.d, sizes[keep] + sizes[gone]});

    active[gone] = false;
    sizes[keep] += sizes[gone];
    ids[keep] = n + step;
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == keep) continue;
      const double merged = std::max(d[k * n + keep], d[k * n + gone]);
      d[k * n + keep] = merged;
      d[keep * n + k] = merged;
    }
    // Complete-linkage distances only grow, so untouched caches stay minimal.
    refresh(keep);
    for (std::size_t k = 0; k < n; ++k) {
      if (active[k] && k != keep && (nn_slot[k] == keep || nn_slot[k] == gone)) refresh(k);
    }
  }
  return dend;
}

std::vector<std::size_t> cut_dendrogram(const Dendrogram& dend, std::size_t k) {
  const std::size_t n = dend.leaves;
  if (k < 1 || k > n) throw Error(ErrorCode::RangeInvalid, "cannot cut into " + std::to_string(k) + " clusters");
  // Union-find over leaves + internal clusters.
  std::vector<std::size_t> parent(2 * n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t m = 0; m < n - k; ++m) {
    const Merge& mg = dend.merges[m];
    parent[find(mg.a)] = n + m;
    parent[find(mg.b)] = n + m;
  }
  std::vector<std::size_t> labels(n);
  std::map<std::size_t, std::size_t> relabel;
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, inserted] = relabel.emplace(find(i), relabel.size());
    labels[i] = it->second;
  }
  return labels;
}

double silhouette(const DistanceMatrix& dm, const std::vector<std::size_t>& labels) {
  const std::size_t n = dm.n;
  if (labels.size() != n) throw Error(ErrorCode::InvalidArgument, "one label per point is required");
  if (count_distinct(labels) < 2) throw Error(ErrorCode::SingleCluster, "silhouette needs at least two clusters");

  const std::size_t k = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t l : labels) ++sizes[l];

  double total = 0.0;
  std::vector<double> sums(k);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t own = labels[i];
    if (sizes[own] <= 1) continue;
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) sums[labels[j]] += dm(i, j);
    }
    const double a = sums[own] / static_cast<double>(sizes[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      if (c != own && sizes[c] > 0) b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
    }
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(n);
}

PartitionSelection select_partition(const Dendrogram& dend, const DistanceMatrix& dm, std::size_t k_min,
                                    std::size_t k_max, std::size_t min_cluster_size) {
  const std::size_t n = dm.n;
  if (dend.leaves != n) throw Error(ErrorCode::InvalidArgument, "dendrogram and distance matrix disagree on n");
  if (k_min < 2 || k_min > k_max || n < 3 || k_max > n - 1) {
    throw Error(ErrorCode::RangeInvalid, "k range [" + std::to_string(k_min) + ", " + std::to_string(k_max) +
                                             "] is invalid for " + std::to_string(n) + " traces");
  }
  PartitionSelection sel;
  for (std::size_t k = k_min; k <= k_max; ++k) {
    Partition p;
    p.k = k;
    p.labels = cut_dendrogram(dend, k);
    p.silhouette = silhouette(dm, p.labels);
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t l : p.labels) ++sizes[l];
    p.smallest_cluster = *std::min_element(sizes.begin(), sizes.end());
    sel.ranking.push_back(std::move(p));
  }
  std::stable_sort(sel.ranking.begin(), sel.ranking.end(),
                   [](const Partition& x, const Partition& y) { return x.silhouette > y.silhouette; });
  for (std::size_t r = 0; r < sel.ranking.size(); ++r) sel.ranking[r].rank = r;
  sel.chosen = 0;
  for (std::size_t r = 0; r < sel.ranking.size(); ++r) {
    if (sel.ranking[r].smallest_cluster >= min_cluster_size) {
      sel.chosen = r;
      break;
    }
  }
  return sel;
}

ProfileTable cluster_profiles(const std::vector<std::size_t>& labels, const InterestingnessFrame& frame) {
  if (labels.size() != frame.traces.size()) {
    throw Error(ErrorCode::InvalidArgument, "partition and frame disagree on the number of traces");
  }
  ProfileTable table;
  std::vector<std::size_t> cols;
  for (auto name : kProfileDims) {
    table.dimensions.emplace_back(name);
    cols.push_back(frame.variable_index(name));
  }
  const std::size_t k = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  table.rows.resize(k);
  std::vector<std::vector<double>> sums(k, std::vector<double>(cols.size(), 0.0));
  for (std::size_t c = 0; c < k; ++c) table.rows[c].cluster = c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto& row = table.rows[labels[i]];
    const auto& tr = frame.traces[i];
    ++row.trace_count;
    row.step_count += tr.length;
    for (std::size_t t = 0; t < tr.length; ++t) {
      for (std::size_t c = 0; c < cols.size(); ++c) sums[labels[i]][c] += frame.at(i, t, cols[c]);
    }
  }
  for (std::size_t c = 0; c < k; ++c) {
    auto& row = table.rows[c];
    row.means.resize(cols.size(), 0.0);
    if (row.step_count == 0) continue;
    for (std::size_t j = 0; j < cols.size(); ++j) row.means[j] = sums[c][j] / static_cast<double>(row.step_count);
  }
  return table;
}

double adjusted_rand_index(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidArgument, "labelings differ in length");
  const std::size_t n = a.size();
  std::map<std::pair<std::size_t, std::size_t>, double> table;
  std::map<std::size_t, double> rows, cols;
  for (std::size_t i = 0; i < n; ++i) {
    table[{a[i], b[i]}] += 1.0;
    rows[a[i]] += 1.0;
    cols[b[i]] += 1.0;
  }
  auto choose2 = [](double x) { return x * (x - 1.0) / 2.0; };
  double index = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (const auto& [key, c] : table) index += choose2(c);
  for (const auto& [key, c] : rows) sum_a += choose2(c);
  for (const auto& [key, c] : cols) sum_b += choose2(c);
  const double expected = sum_a * sum_b / choose2(static_cast<double>(n));
  const double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

}  // namespace ixdrl
