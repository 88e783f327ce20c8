#pragma once

// Reference implementations used only by the tests. They are deliberately
// naive and share no code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "ixdrl/clustering.hpp"
#include "ixdrl/dtw.hpp"
#include "ixdrl/gbdt.hpp"
#include "ixdrl/trace.hpp"

namespace oracle {

// Small seeded generator with the shapes the property tests need.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double normal(double mean, double sd) { return std::normal_distribution<double>(mean, sd)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin(double p = 0.5) { return uniform() < p; }

  // Random point on the simplex, sometimes with exact zeros or ties.
  std::vector<double> simplex(std::size_t n) {
    std::vector<double> p(n);
    const int shape = integer(0, 5);
    if (shape == 0) {
      p[index(n)] = 1.0;
      return p;
    }
    if (shape == 1) return std::vector<double>(n, 1.0 / static_cast<double>(n));
    double total = 0.0;
    for (auto& v : p) {
      v = (shape == 2 && coin(0.3)) ? 0.0 : -std::log(uniform(1e-12, 1.0));
      total += v;
    }
    if (total == 0.0) {
      p[0] = 1.0;
      return p;
    }
    for (auto& v : p) v /= total;
    return p;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline double euclid(const ixdrl::Series& a, std::size_t i, const ixdrl::Series& b, std::size_t j) {
  double s = 0.0;
  for (std::size_t d = 0; d < a.dim; ++d) {
    const double diff = a.data[i * a.dim + d] - b.data[j * b.dim + d];
    s += diff * diff;
  }
  return std::sqrt(s);
}

// Top-down memoized DTW recursion; `window` < 0 means unconstrained.
inline double dtw(const ixdrl::Series& a, const ixdrl::Series& b, long window = -1) {
  const long n = static_cast<long>(a.length()), m = static_cast<long>(b.length());
  std::map<std::pair<long, long>, double> memo;
  const double inf = std::numeric_limits<double>::infinity();
  std::function<double(long, long)> d = [&](long i, long j) -> double {
    if (i < 0 || j < 0) return inf;
    if (window >= 0 && std::labs(i - j) > window) return inf;
    if (auto it = memo.find({i, j}); it != memo.end()) return it->second;
    const double c = euclid(a, static_cast<std::size_t>(i), b, static_cast<std::size_t>(j));
    double r;
    if (i == 0 && j == 0) {
      r = c;
    } else {
      r = c + std::min({d(i - 1, j), d(i, j - 1), d(i - 1, j - 1)});
    }
    memo[{i, j}] = r;
    return r;
  };
  return d(n - 1, m - 1);
}

// Complete linkage by recomputing every active pair's member-maximum at each
// step. Ties pick the smallest (lower id, higher id).
inline ixdrl::Dendrogram complete_linkage(const ixdrl::DistanceMatrix& dm) {
  const std::size_t n = dm.n;
  std::map<std::size_t, std::vector<std::size_t>> active;
  for (std::size_t i = 0; i < n; ++i) active[i] = {i};
  ixdrl::Dendrogram out;
  out.leaves = n;
  for (std::size_t step = 0; step + 1 < n; ++step) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t ba = 0, bb = 0;
    for (auto ia = active.begin(); ia != active.end(); ++ia) {
      for (auto ib = std::next(ia); ib != active.end(); ++ib) {
        double link = 0.0;
        for (std::size_t p : ia->second) {
          for (std::size_t q : ib->second) link = std::max(link, dm(p, q));
        }
        if (link < best) {
          best = link;
          ba = ia->first;
          bb = ib->first;
        }
      }
    }
    std::vector<std::size_t> members = active[ba];
    members.insert(members.end(), active[bb].begin(), active[bb].end());
    active.erase(ba);
    active.erase(bb);
    out.merges.push_back(ixdrl::Merge{ba, bb, best, members.size()});
    active[n + step] = std::move(members);
  }
  return out;
}

inline double silhouette(const std::vector<std::vector<double>>& d, const std::vector<std::size_t>& labels) {
  const std::size_t n = labels.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::map<std::size_t, std::pair<double, int>> by;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      by[labels[j]].first += d[i][j];
      by[labels[j]].second += 1;
    }
    if (!by.count(labels[i])) continue;  // singleton
    const double a = by[labels[i]].first / by[labels[i]].second;
    double b = std::numeric_limits<double>::infinity();
    for (const auto& [lab, acc] : by) {
      if (lab != labels[i]) b = std::min(b, acc.first / acc.second);
    }
    const double den = std::max(a, b);
    total += den > 0 ? (b - a) / den : 0.0;
  }
  return total / static_cast<double>(n);
}

// Pair-counting form of the adjusted Rand index.
inline double ari(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
  const std::size_t n = a.size();
  double both = 0, in_a = 0, in_b = 0, pairs = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool sa = a[i] == a[j], sb = b[i] == b[j];
      both += sa && sb;
      in_a += sa;
      in_b += sb;
      pairs += 1;
    }
  }
  const double expected = in_a * in_b / pairs;
  const double max_index = 0.5 * (in_a + in_b);
  if (max_index == expected) return 1.0;
  return (both - expected) / (max_index - expected);
}

// Cover-weighted conditional expectation of one tree given the feature set S.
inline double tree_expectation(const ixdrl::RegressionTree& tree, std::size_t node, const std::vector<double>& x,
                               const std::vector<bool>& known) {
  const auto& nd = tree.nodes[node];
  if (nd.left < 0) return nd.value;
  const auto f = static_cast<std::size_t>(nd.feature);
  const auto l = static_cast<std::size_t>(nd.left), r = static_cast<std::size_t>(nd.right);
  if (known[f]) return tree_expectation(tree, x[f] < nd.threshold ? l : r, x, known);
  return (tree.nodes[l].cover * tree_expectation(tree, l, x, known) +
          tree.nodes[r].cover * tree_expectation(tree, r, x, known)) /
         nd.cover;
}

// Shapley values by averaging marginal contributions over all n! orderings.
// Only for very small n; a second, structurally different reference.
inline std::vector<double> shapley_by_permutation(const ixdrl::GBDTModel& model, const std::vector<double>& x) {
  const std::size_t n = x.size();
  auto v = [&](const std::vector<bool>& known) {
    double s = 0.0;
    for (const auto& t : model.trees) s += tree_expectation(t, 0, x, known);
    return model.learning_rate * s;
  };
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::vector<double> phi(n, 0.0);
  double count = 0.0;
  do {
    std::vector<bool> known(n, false);
    double prev = v(known);
    for (std::size_t f : order) {
      known[f] = true;
      const double cur = v(known);
      phi[f] += cur - prev;
      prev = cur;
    }
    count += 1.0;
  } while (std::next_permutation(order.begin(), order.end()));
  for (auto& p : phi) p /= count;
  return phi;
}

// Random tree with consistent covers: children split the parent cover.
inline ixdrl::RegressionTree random_tree(Gen& g, std::size_t features, int max_depth) {
  ixdrl::RegressionTree tree;
  std::function<int(int, double)> grow = [&](int depth, double cover) -> int {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(ixdrl::TreeNode{});
    tree.nodes[id].cover = cover;
    tree.nodes[id].value = g.uniform(-1.0, 1.0);
    if (depth >= max_depth || cover < 2.0 || g.coin(0.2)) return id;
    tree.nodes[id].feature = static_cast<int>(g.index(features));
    tree.nodes[id].threshold = g.uniform(-1.0, 1.0);
    const double left_cover = std::floor(g.uniform(1.0, cover));
    const int l = grow(depth + 1, left_cover);
    const int r = grow(depth + 1, cover - left_cover);
    tree.nodes[id].left = l;
    tree.nodes[id].right = r;
    return id;
  };
  grow(0, static_cast<double>(g.integer(2, 400)));
  return tree;
}

inline ixdrl::GBDTModel random_model(Gen& g, std::size_t features, std::size_t trees, int max_depth) {
  ixdrl::GBDTModel m;
  m.base_score = g.uniform(-2.0, 2.0);
  m.learning_rate = g.uniform(0.05, 1.0);
  for (std::size_t f = 0; f < features; ++f) m.feature_names.push_back("f" + std::to_string(f));
  for (std::size_t t = 0; t < trees; ++t) m.trees.push_back(random_tree(g, features, max_depth));
  return m;
}

// x drawn so that some coordinates land exactly on thresholds.
inline std::vector<double> random_point(Gen& g, const ixdrl::GBDTModel& m) {
  std::vector<double> x(m.feature_count());
  for (auto& v : x) v = g.uniform(-1.2, 1.2);
  for (const auto& t : m.trees) {
    for (const auto& nd : t.nodes) {
      if (nd.feature >= 0 && g.coin(0.05)) x[static_cast<std::size_t>(nd.feature)] = nd.threshold;
    }
  }
  return x;
}

// Small valid dataset with `factors` factors of varying arity.
inline ixdrl::Dataset random_dataset(Gen& g, std::size_t factors, std::size_t traces, std::size_t max_len,
                                     std::size_t features = 3) {
  ixdrl::Dataset ds;
  for (std::size_t f = 0; f < factors; ++f) {
    ds.manifest.factor_names.push_back("factor" + std::to_string(f));
    std::vector<std::string> acts;
    const int arity = g.integer(1, 5);
    for (int a = 0; a < arity; ++a) acts.push_back("a" + std::to_string(a));
    ds.manifest.actions_per_factor.push_back(acts);
  }
  for (std::size_t k = 0; k < features; ++k) ds.manifest.feature_names.push_back("x" + std::to_string(k));
  ds.manifest.discount = g.uniform(0.0, 1.0);
  for (std::size_t i = 0; i < traces; ++i) {
    ixdrl::Trace tr;
    tr.trace_id = "tr" + std::to_string(i);
    const std::size_t len = 1 + g.index(max_len);
    for (std::size_t t = 0; t < len; ++t) {
      ixdrl::Step s;
      s.trace_id = tr.trace_id;
      s.t = t;
      for (std::size_t k = 0; k < features; ++k) s.features.push_back(g.normal(0.0, 3.0));
      for (std::size_t f = 0; f < factors; ++f) {
        const std::size_t arity = ds.manifest.actions_per_factor[f].size();
        s.dists.push_back(g.simplex(arity));
        s.action.push_back(static_cast<int>(g.index(arity)));
      }
      s.value = g.normal(0.0, 5.0);
      s.reward = g.coin(0.8) ? -0.01 : g.uniform(-3.0, 3.0);
      s.done = t + 1 == len && g.coin();
      tr.steps.push_back(std::move(s));
    }
    ds.traces.push_back(std::move(tr));
  }
  return ds;
}

}  // namespace oracle
