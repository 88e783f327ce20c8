#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace ixdrl {

struct GBDTParams {
  int n_rounds = 200;
  double learning_rate = 0.1;
  int max_depth = 6;
  std::size_t min_samples_leaf = 20;
  double l2_leaf_reg = 1.0;
  double subsample = 1.0;
  std::uint64_t seed = 0;
  unsigned jobs = 1;  // workers for split search; does not affect the result

  void validate() const;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  bool default_left = true;  // branch for missing values; unused while inputs are finite
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf output before shrinkage
  double cover = 0.0;  // training rows reaching the node

  bool is_leaf() const { return left < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  /// Index of the leaf that `x` lands in. Rows with x[f] < threshold go left.
  std::size_t leaf_index(std::span<const double> x) const;
  double predict(std::span<const double> x) const { return nodes[leaf_index(x)].value; }
  /// Cover-weighted mean of the leaf values.
  double expected_value() const;
  int depth() const;

  bool operator==(const RegressionTree&) const = default;
};

struct GBDTModel {
  double base_score = 0.0;
  double learning_rate = 1.0;
  std::vector<RegressionTree> trees;
  std::vector<std::string> feature_names;

  std::size_t feature_count() const { return feature_names.size(); }
  double predict(std::span<const double> x) const;

  nlohmann::json to_json() const;
  static GBDTModel from_json(const nlohmann::json& j);

  bool operator==(const GBDTModel&) const = default;
};

/// Row-major design matrix with aligned targets. `origin` remembers which
/// (trace, timestep) each row came from.
struct DesignSet {
  struct Origin {
    std::size_t trace = 0;
    std::size_t t = 0;
    bool operator==(const Origin&) const = default;
  };

  std::vector<std::string> feature_names;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<Origin> origin;

  std::size_t size() const { return y.size(); }
  std::size_t feature_count() const { return feature_names.size(); }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(x).subspan(i * feature_count(), feature_count());
  }
  void push_row(std::span<const double> features, double target, Origin o);
};

/// Squared-error gradient boosting with exact greedy splits. When
/// `mse_history` is given it receives the training MSE of the base score and
/// then after every round.
GBDTModel train_gbdt(const DesignSet& train, const GBDTParams& params, std::vector<double>* mse_history = nullptr);

}  // namespace ixdrl
