#include "ixdrl/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ixdrl/common.hpp"

namespace ixdrl {

using nlohmann::json;

namespace {

constexpr std::size_t kParallelSplitRows = 4096;

struct SplitCandidate {
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
  std::size_t left_count = 0;
};

double midpoint(double lo, double hi) {
  const double mid = lo + (hi - lo) * 0.5;
  return mid > lo ? mid : hi;
}

class TreeBuilder {
 public:
  TreeBuilder(const DesignSet& data, const GBDTParams& params, const std::vector<double>& residual,
              std::vector<std::vector<std::uint32_t>>& sorted)
      : data_(data), params_(params), residual_(residual), sorted_(sorted), go_left_(data.size(), 0) {}

  RegressionTree build(std::size_t count) {
    tree_.nodes.clear();
    scratch_.resize(count);
    grow(0, count, 0);
    return std::move(tree_);
  }

 private:
  double x(std::uint32_t row, std::size_t f) const { return data_.x[row * data_.feature_count() + f]; }

  SplitCandidate best_for_feature(std::size_t f, std::size_t begin, std::size_t end, double total) const {
    SplitCandidate best;
    const auto& order = sorted_[f];
    const std::size_t n = end - begin;
    const double lambda = params_.l2_leaf_reg;
    const double parent = total * total / (static_cast<double>(n) + lambda);
    double left_sum = 0.0;
    for (std::size_t p = begin; p + 1 < end; ++p) {
      left_sum += residual_[order[p]];
      const std::size_t left_n = p - begin + 1;
      const std::size_t right_n = n - left_n;
      if (left_n < params_.min_samples_leaf) continue;
      if (right_n < params_.min_samples_leaf) break;
      const double lo = x(order[p], f);
      const double hi = x(order[p + 1], f);
      if (!(hi > lo)) continue;
      const double right_sum = total - left_sum;
      const double gain = left_sum * left_sum / (static_cast<double>(left_n) + lambda) +
                          right_sum * right_sum / (static_cast<double>(right_n) + lambda) - parent;
      if (gain > best.gain) {
        best = SplitCandidate{gain, static_cast<int>(f), midpoint(lo, hi), left_n};
      }
    }
    return best;
  }

  int grow(std::size_t begin, std::size_t end, int depth) {
    const std::size_t n = end - begin;
    double total = 0.0;
    for (std::size_t p = begin; p < end; ++p) total += residual_[sorted_[0][p]];

    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.push_back(TreeNode{});
    tree_.nodes[id].cover = static_cast<double>(n);
    tree_.nodes[id].value = total / (static_cast<double>(n) + params_.l2_leaf_reg);

    if (depth >= params_.max_depth || n < 2 * std::max<std::size_t>(params_.min_samples_leaf, 1)) return id;

    const std::size_t nf = data_.feature_count();
    std::vector<SplitCandidate> per_feature(nf);
    const unsigned jobs = n >= kParallelSplitRows ? params_.jobs : 1;
    parallel_for(nf, jobs, [&](std::size_t f) { per_feature[f] = best_for_feature(f, begin, end, total); });
    SplitCandidate best;
    for (const auto& c : per_feature) {
      if (c.feature >= 0 && c.gain > best.gain) best = c;
    }
    if (best.feature < 0) return id;

    const auto f = static_cast<std::size_t>(best.feature);
    for (std::size_t p = begin; p < end; ++p) {
      const std::uint32_t row = sorted_[f][p];
      go_left_[row] = x(row, f) < best.threshold ? 1 : 0;
    }
    // Stable partition of every feature order keeps each child segment sorted.
    for (auto& order : sorted_) {
      std::size_t l = 0, r = 0;
      const std::size_t left_n = best.left_count;
      for (std::size_t p = begin; p < end; ++p) {
        const std::uint32_t row = order[p];
        if (go_left_[row]) {
          scratch_[l++] = row;
        } else {
          scratch_[left_n + r++] = row;
        }
      }
      std::copy(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(n),
                order.begin() + static_cast<std::ptrdiff_t>(begin));
    }

    const std::size_t mid = begin + best.left_count;
    tree_.nodes[id].feature = best.feature;
    tree_.nodes[id].threshold = best.threshold;
    const int left = grow(begin, mid, depth + 1);
    const int right = grow(mid, end, depth + 1);
    tree_.nodes[id].left = left;
    tree_.nodes[id].right = right;
    return id;
  }

  const DesignSet& data_;
  const GBDTParams& params_;
  const std::vector<double>& residual_;
  std::vector<std::vector<std::uint32_t>>& sorted_;
  std::vector<unsigned char> go_left_;
  std::vector<std::uint32_t> scratch_;
  RegressionTree tree_;
};

double mean_squared(const std::vector<double>& y, const std::vector<double>& pred) {
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = y[i] - pred[i];
    acc += d * d;
  }
  return acc / static_cast<double>(y.size());
}

}  // namespace

void GBDTParams::validate() const {
  if (n_rounds < 1) throw Error(ErrorCode::InvalidArgument, "n_rounds must be >= 1");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) throw Error(ErrorCode::InvalidArgument, "learning_rate must lie in (0, 1]");
  if (max_depth < 0) throw Error(ErrorCode::InvalidArgument, "max_depth must be >= 0");
  if (!(subsample > 0.0 && subsample <= 1.0)) throw Error(ErrorCode::InvalidArgument, "subsample must lie in (0, 1]");
  if (!(l2_leaf_reg >= 0.0)) throw Error(ErrorCode::InvalidArgument, "l2_leaf_reg must be >= 0");
}

std::size_t RegressionTree::leaf_index(std::span<const double> x) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const TreeNode& nd = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(nd.feature)] < nd.threshold ? nd.left : nd.right);
  }
  return i;
}

double RegressionTree::expected_value() const {
  if (nodes.empty()) return 0.0;
  const double root = nodes[0].cover;
  double acc = 0.0;
  for (const auto& nd : nodes) {
    if (nd.is_leaf()) acc += nd.cover * nd.value;
  }
  return root > 0.0 ? acc / root : 0.0;
}

int RegressionTree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<int> d(nodes.size(), 0);
  int best = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].is_leaf()) continue;
    d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
    d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
    best = std::max(best, d[i] + 1);
  }
  return best;
}

double GBDTModel::predict(std::span<const double> x) const {
  double acc = 0.0;
  for (const auto& tree : trees) acc += tree.predict(x);
  return base_score + learning_rate * acc;
}

json GBDTModel::to_json() const {
  json j;
  j["base_score"] = base_score;
  j["learning_rate"] = learning_rate;
  j["feature_names"] = feature_names;
  json trees_json = json::array();
  for (const auto& tree : trees) {
    json nodes = json::array();
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
      const TreeNode& nd = tree.nodes[i];
      json node{{"id", i}, {"cover", nd.cover}};
      if (nd.is_leaf()) {
        node["leaf"] = nd.value;
      } else {
        node["split"] = nd.feature;
        node["split_name"] = feature_names.at(static_cast<std::size_t>(nd.feature));
        node["threshold"] = nd.threshold;
        node["default_left"] = nd.default_left;
        node["children"] = {nd.left, nd.right};
        node["value"] = nd.value;
      }
      nodes.push_back(std::move(node));
    }
    trees_json.push_back(json{{"nodes", std::move(nodes)}});
  }
  j["trees"] = std::move(trees_json);
  return j;
}

GBDTModel GBDTModel::from_json(const json& j) {
  GBDTModel m;
  try {
    m.base_score = j.at("base_score").get<double>();
    m.learning_rate = j.at("learning_rate").get<double>();
    m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    for (const auto& tj : j.at("trees")) {
      RegressionTree tree;
      for (const auto& nj : tj.at("nodes")) {
        TreeNode nd;
        nd.cover = nj.at("cover").get<double>();
        if (nj.contains("leaf")) {
          nd.value = nj.at("leaf").get<double>();
        } else {
          nd.feature = nj.at("split").get<int>();
          nd.threshold = nj.at("threshold").get<double>();
          nd.default_left = nj.at("default_left").get<bool>();
          nd.left = nj.at("children").at(0).get<int>();
          nd.right = nj.at("children").at(1).get<int>();
          nd.value = nj.at("value").get<double>();
        }
        tree.nodes.push_back(nd);
      }
      m.trees.push_back(std::move(tree));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedRecord, std::string("model JSON: ") + e.what());
  }
  return m;
}

void DesignSet::push_row(std::span<const double> features, double target, Origin o) {
  x.insert(x.end(), features.begin(), features.end());
  y.push_back(target);
  origin.push_back(o);
}

GBDTModel train_gbdt(const DesignSet& train, const GBDTParams& params, std::vector<double>* mse_history) {
  params.validate();
  const std::size_t n = train.size();
  if (n == 0) throw Error(ErrorCode::EmptyTrainSet, "no training rows");
  const std::size_t nf = train.feature_count();
  if (train.x.size() != n * nf) throw Error(ErrorCode::DimensionMismatch, "design matrix shape mismatch");
  for (double v : train.x) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite feature value");
  }

  GBDTModel model;
  model.feature_names = train.feature_names;
  model.learning_rate = params.learning_rate;
  model.base_score = std::accumulate(train.y.begin(), train.y.end(), 0.0) / static_cast<double>(n);

  std::vector<double> pred(n, model.base_score), residual(n);
  if (mse_history) {
    mse_history->clear();
    mse_history->push_back(mean_squared(train.y, pred));
  }

  // Global per-feature orders (stable by row id); each tree filters them.
  std::vector<std::vector<std::uint32_t>> presorted(nf, std::vector<std::uint32_t>(n));
  for (std::size_t f = 0; f < nf; ++f) {
    auto& order = presorted[f];
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return train.x[a * nf + f] < train.x[b * nf + f]; });
  }
  // A zero-feature design still needs one order to sum residuals over.
  if (nf == 0) {
    presorted.emplace_back(n);
    std::iota(presorted[0].begin(), presorted[0].end(), 0u);
  }

  const std::size_t sample_n =
      params.subsample >= 1.0
          ? n
          : std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(params.subsample * static_cast<double>(n))));
  std::vector<unsigned char> in_sample(n, 1);
  std::vector<std::uint32_t> shuffle(n);
  std::vector<std::vector<std::uint32_t>> sorted(presorted.size());

  for (int round = 0; round < params.n_rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) residual[i] = train.y[i] - pred[i];
    if (sample_n < n) {
      std::iota(shuffle.begin(), shuffle.end(), 0u);
      std::mt19937_64 rng(mix_seed(params.seed, static_cast<std::uint64_t>(round)));
      std::shuffle(shuffle.begin(), shuffle.end(), rng);
      std::fill(in_sample.begin(), in_sample.end(), 0);
      for (std::size_t i = 0; i < sample_n; ++i) in_sample[shuffle[i]] = 1;
    }
    for (std::size_t f = 0; f < presorted.size(); ++f) {
      sorted[f].clear();
      for (std::uint32_t row : presorted[f]) {
        if (in_sample[row]) sorted[f].push_back(row);
      }
    }
    TreeBuilder builder(train, params, residual, sorted);
    RegressionTree tree = builder.build(sample_n);
    for (std::size_t i = 0; i < n; ++i) pred[i] += params.learning_rate * tree.predict(train.row(i));
    model.trees.push_back(std::move(tree));
    if (mse_history) mse_history->push_back(mean_squared(train.y, pred));
  }
  return model;
}

}  // namespace ixdrl
