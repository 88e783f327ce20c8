#include "ixdrl/shap.hpp"

#include <cstdint>
#include <numeric>

#include "ixdrl/common.hpp"

namespace ixdrl {

namespace {

struct PathElement {
  int feature = -1;
  double zero_fraction = 0.0;
  double one_fraction = 0.0;
  double weight = 0.0;
};

using Path = std::vector<PathElement>;

void extend_path(Path& path, std::size_t depth, double zero_fraction, double one_fraction, int feature) {
  path[depth] = PathElement{feature, zero_fraction, one_fraction, depth == 0 ? 1.0 : 0.0};
  const double d1 = static_cast<double>(depth + 1);
  for (std::size_t i = depth; i-- > 0;) {
    path[i + 1].weight += one_fraction * path[i].weight * static_cast<double>(i + 1) / d1;
    path[i].weight = zero_fraction * path[i].weight * static_cast<double>(depth - i) / d1;
  }
}

void unwind_path(Path& path, std::size_t depth, std::size_t index) {
  const double one = path[index].one_fraction;
  const double zero = path[index].zero_fraction;
  const double d1 = static_cast<double>(depth + 1);
  double next = path[depth].weight;
  for (std::size_t i = depth; i-- > 0;) {
    if (one != 0.0) {
      const double tmp = path[i].weight;
      path[i].weight = next * d1 / (static_cast<double>(i + 1) * one);
      next = tmp - path[i].weight * zero * static_cast<double>(depth - i) / d1;
    } else {
      path[i].weight = path[i].weight * d1 / (zero * static_cast<double>(depth - i));
    }
  }
  for (std::size_t i = index; i < depth; ++i) {
    path[i].feature = path[i + 1].feature;
    path[i].zero_fraction = path[i + 1].zero_fraction;
    path[i].one_fraction = path[i + 1].one_fraction;
  }
}

// Total permutation weight the path would carry with element `index` removed.
double unwound_sum(const Path& path, std::size_t depth, std::size_t index) {
  const double one = path[index].one_fraction;
  const double zero = path[index].zero_fraction;
  const double d1 = static_cast<double>(depth + 1);
  double next = path[depth].weight;
  double total = 0.0;
  for (std::size_t i = depth; i-- > 0;) {
    if (one != 0.0) {
      const double tmp = next * d1 / (static_cast<double>(i + 1) * one);
      total += tmp;
      next = path[i].weight - tmp * zero * static_cast<double>(depth - i) / d1;
    } else if (zero != 0.0) {
      total += path[i].weight / zero / (static_cast<double>(depth - i) / d1);
    }
  }
  return total;
}

void recurse(const RegressionTree& tree, std::size_t node, std::span<const double> x, std::vector<double>& phi,
             Path path, std::size_t depth, double zero_fraction, double one_fraction, int feature) {
  if (path.size() < depth + 1) path.resize(depth + 1);
  extend_path(path, depth, zero_fraction, one_fraction, feature);
  const TreeNode& nd = tree.nodes[node];
  if (nd.is_leaf()) {
    for (std::size_t i = 1; i <= depth; ++i) {
      const double w = unwound_sum(path, depth, i);
      const PathElement& el = path[i];
      phi[static_cast<std::size_t>(el.feature)] += w * (el.one_fraction - el.zero_fraction) * nd.value;
    }
    return;
  }

  const auto f = static_cast<std::size_t>(nd.feature);
  const auto hot = static_cast<std::size_t>(x[f] < nd.threshold ? nd.left : nd.right);
  const auto cold = static_cast<std::size_t>(hot == static_cast<std::size_t>(nd.left) ? nd.right : nd.left);
  const double hot_ratio = nd.cover > 0.0 ? tree.nodes[hot].cover / nd.cover : 0.0;
  const double cold_ratio = nd.cover > 0.0 ? tree.nodes[cold].cover / nd.cover : 0.0;

  double incoming_zero = 1.0, incoming_one = 1.0;
  // A feature already on the path is folded into the new split.
  for (std::size_t k = 1; k <= depth; ++k) {
    if (path[k].feature == nd.feature) {
      incoming_zero = path[k].zero_fraction;
      incoming_one = path[k].one_fraction;
      unwind_path(path, depth, k);
      --depth;
      break;
    }
  }
  recurse(tree, hot, x, phi, path, depth + 1, hot_ratio * incoming_zero, incoming_one, nd.feature);
  recurse(tree, cold, x, phi, path, depth + 1, cold_ratio * incoming_zero, 0.0, nd.feature);
}

// Conditional expectation of a tree output given the features in `known`.
double expectation(const RegressionTree& tree, std::size_t node, std::span<const double> x, std::uint32_t known) {
  const TreeNode& nd = tree.nodes[node];
  if (nd.is_leaf()) return nd.value;
  const auto f = static_cast<std::size_t>(nd.feature);
  const auto left = static_cast<std::size_t>(nd.left);
  const auto right = static_cast<std::size_t>(nd.right);
  if (known & (1u << f)) return expectation(tree, x[f] < nd.threshold ? left : right, x, known);
  if (!(nd.cover > 0.0)) return 0.0;
  return (tree.nodes[left].cover * expectation(tree, left, x, known) +
          tree.nodes[right].cover * expectation(tree, right, x, known)) /
         nd.cover;
}

void check_width(const GBDTModel& model, std::span<const double> x) {
  if (x.size() != model.feature_count()) {
    throw Error(ErrorCode::DimensionMismatch, "expected " + std::to_string(model.feature_count()) +
                                                  " features, got " + std::to_string(x.size()));
  }
}

}  // namespace

double ShapVector::total() const { return std::accumulate(phi.begin(), phi.end(), base_value); }

ShapVector tree_shap(const GBDTModel& model, std::span<const double> x) {
  check_width(model, x);
  ShapVector out;
  out.phi.assign(model.feature_count(), 0.0);
  std::vector<double> tree_phi(model.feature_count());
  double expected = 0.0;
  for (const auto& tree : model.trees) {
    if (tree.nodes.empty()) continue;
    std::fill(tree_phi.begin(), tree_phi.end(), 0.0);
    Path path(static_cast<std::size_t>(tree.depth()) + 2);
    recurse(tree, 0, x, tree_phi, std::move(path), 0, 1.0, 1.0, -1);
    for (std::size_t f = 0; f < tree_phi.size(); ++f) out.phi[f] += tree_phi[f];
    expected += tree.expected_value();
  }
  for (double& p : out.phi) p *= model.learning_rate;
  out.base_value = model.base_score + model.learning_rate * expected;
  return out;
}

ShapVector exact_shap_oracle(const GBDTModel& model, std::span<const double> x) {
  check_width(model, x);
  const std::size_t n = model.feature_count();
  if (n > kOracleMaxFeatures) {
    throw Error(ErrorCode::TooManyFeatures, "subset enumeration supports at most 12 features");
  }
  const std::uint32_t subsets = 1u << n;
  std::vector<double> value(subsets);
  for (std::uint32_t s = 0; s < subsets; ++s) {
    double acc = 0.0;
    for (const auto& tree : model.trees) {
      if (!tree.nodes.empty()) acc += expectation(tree, 0, x, s);
    }
    value[s] = model.base_score + model.learning_rate * acc;
  }

  // |S|! (n - |S| - 1)! / n!
  std::vector<double> factorial(n + 1, 1.0);
  for (std::size_t i = 1; i <= n; ++i) factorial[i] = factorial[i - 1] * static_cast<double>(i);
  std::vector<double> weight(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) weight[s] = factorial[s] * factorial[n - s - 1] / factorial[n];

  ShapVector out;
  out.phi.assign(n, 0.0);
  out.base_value = value[0];
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t bit = 1u << i;
    double acc = 0.0;
    for (std::uint32_t s = 0; s < subsets; ++s) {
      if (s & bit) continue;
      acc += weight[static_cast<std::size_t>(__builtin_popcount(s))] * (value[s | bit] - value[s]);
    }
    out.phi[i] = acc;
  }
  return out;
}

}  // namespace ixdrl
