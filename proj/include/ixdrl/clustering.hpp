#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ixdrl/dtw.hpp"
#include "ixdrl/interestingness.hpp"

namespace ixdrl {

/// One agglomeration step. Leaves are clusters 0..n-1; the cluster created by
/// merge m gets id n + m. `a < b` always.
struct Merge {
  std::size_t a = 0;
  std::size_t b = 0;
  double height = 0.0;
  std::size_t size = 0;

  bool operator==(const Merge&) const = default;
};

struct Dendrogram {
  std::size_t leaves = 0;
  std::vector<Merge> merges;  // exactly leaves - 1 entries

  bool operator==(const Dendrogram&) const = default;
};

/// Complete-linkage agglomerative clustering. Among equally distant pairs the
/// one with the lexicographically smallest (lower id, higher id) merges first.
Dendrogram agglomerate(const DistanceMatrix& dm);

/// Flat labels obtained by stopping after leaves - k merges. Labels are
/// numbered by first appearance in leaf order.
std::vector<std::size_t> cut_dendrogram(const Dendrogram& dend, std::size_t k);

/// Mean silhouette over all points; singleton clusters contribute 0.
/// Throws SingleCluster when fewer than two distinct labels are present.
double silhouette(const DistanceMatrix& dm, const std::vector<std::size_t>& labels);

struct Partition {
  std::size_t k = 0;
  std::vector<std::size_t> labels;
  double silhouette = 0.0;
  std::size_t rank = 0;  // 0 = best silhouette
  std::size_t smallest_cluster = 0;
};

struct PartitionSelection {
  std::vector<Partition> ranking;  // sorted by silhouette, best first
  std::size_t chosen = 0;          // index into ranking

  const Partition& best() const { return ranking[chosen]; }
};

/// Scores every cut with k in [k_min, k_max]. The chosen partition is the best
/// one whose smallest cluster has at least `min_cluster_size` members, falling
/// back to the overall best. Throws RangeInvalid unless 2 <= k_min <= k_max <= n-1.
PartitionSelection select_partition(const Dendrogram& dend, const DistanceMatrix& dm, std::size_t k_min,
                                    std::size_t k_max, std::size_t min_cluster_size = 2);

/// Column order of the profile table.
inline constexpr std::string_view kProfileDims[] = {dim::kValue, dim::kConfidenceMean, dim::kGoalConduciveness,
                                                    dim::kRiskinessMean, dim::kIncongruity};

struct ClusterProfile {
  std::size_t cluster = 0;
  std::size_t trace_count = 0;
  std::size_t step_count = 0;
  std::vector<double> means;  // aligned with kProfileDims
};

struct ProfileTable {
  std::vector<std::string> dimensions;
  std::vector<ClusterProfile> rows;
};

/// Timestep-pooled mean of each base dimension per cluster.
ProfileTable cluster_profiles(const std::vector<std::size_t>& labels, const InterestingnessFrame& frame);

/// Adjusted Rand index between two flat labelings of the same points.
double adjusted_rand_index(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b);

}  // namespace ixdrl
