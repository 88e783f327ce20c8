#include <cmath>
#include <numeric>

#include "doctest.h"
#include "ixdrl/common.hpp"
#include "ixdrl/importance.hpp"
#include "ixdrl/shap.hpp"
#include "support/oracles.hpp"

using namespace ixdrl;

namespace {

// Dataset plus a one-column frame whose values are given per step.
std::pair<Dataset, InterestingnessFrame> fixture(oracle::Gen& g, std::size_t traces, std::size_t len,
                                                 const std::function<double(const std::vector<double>&)>& target) {
  Dataset ds;
  ds.manifest.factor_names = {"f"};
  ds.manifest.actions_per_factor = {{"a", "b"}};
  ds.manifest.feature_names = {"x1", "x2", "constant"};
  InterestingnessFrame fr;
  fr.variables = {"value"};
  for (std::size_t i = 0; i < traces; ++i) {
    Trace tr{"t" + std::to_string(i), {}, std::nullopt};
    TraceInterestingness ti{tr.trace_id, len, {}, {}};
    for (std::size_t t = 0; t < len; ++t) {
      Step s;
      s.trace_id = tr.trace_id;
      s.t = t;
      s.features = {g.uniform(-1, 1), g.uniform(-1, 1), 4.0};
      s.action = {0};
      s.dists = {{0.5, 0.5}};
      ti.values.push_back(target(s.features));
      tr.steps.push_back(s);
    }
    ds.traces.push_back(tr);
    fr.traces.push_back(ti);
  }
  return {ds, fr};
}

InterestingnessFrame pooled_frame(const std::vector<double>& xs) {
  InterestingnessFrame fr;
  fr.variables = {"value"};
  fr.traces.push_back(TraceInterestingness{"a", xs.size(), xs, {}});
  return fr;
}

}  // namespace

TEST_SUITE("importance") {
  TEST_CASE("design matrix split sizes and determinism") {
    oracle::Gen g(60);
    auto [ds, fr] = fixture(g, 4, 25, [](const auto& x) { return x[0]; });
    const auto [train, test] = build_design_matrix(ds, fr, "value", 0.8, 5);
    CHECK(train.size() == 80);
    CHECK(test.size() == 20);
    const auto [train2, test2] = build_design_matrix(ds, fr, "value", 0.8, 5);
    CHECK(train.x == train2.x);
    CHECK(test.origin == test2.origin);
    const auto [train3, test3] = build_design_matrix(ds, fr, "value", 0.8, 6);
    CHECK_FALSE(train3.origin == train.origin);
    // every step lands in exactly one side, with its own features and target
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto* set : {&train, &test}) {
      for (std::size_t r = 0; r < set->size(); ++r) {
        const auto o = set->origin[r];
        CHECK(seen.insert({o.trace, o.t}).second);
        CHECK(set->y[r] == fr.at(o.trace, o.t, 0));
        CHECK(set->row(r)[0] == ds.traces[o.trace].steps[o.t].features[0]);
      }
    }
    CHECK(seen.size() == 100);
    CHECK_THROWS_AS(build_design_matrix(ds, fr, "value", 1.0, 5), Error);
    try {
      build_design_matrix(ds, fr, "riskiness_mean", 0.8, 5);
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DimensionUnknown);
    }
  }

  TEST_CASE("evaluate_model gate") {
    DesignSet test;
    test.feature_names = {"x"};
    test.push_row(std::vector<double>{0.0}, 1.0, {});
    test.push_row(std::vector<double>{1.0}, -1.0, {});
    GBDTModel zero;
    zero.feature_names = {"x"};
    auto m = evaluate_model(zero, test);
    CHECK(m.mae == 1.0);
    CHECK(m.rmse == 1.0);
    CHECK_FALSE(m.gated_in);
    CHECK(evaluate_model(zero, test, 1.0).gated_in);

    DesignSet exact;
    exact.feature_names = {"x"};
    exact.push_row(std::vector<double>{0.0}, 0.0, {});
    m = evaluate_model(zero, exact);
    CHECK(m.mae == 0.0);
    CHECK(m.gated_in);
    try {
      evaluate_model(zero, DesignSet{{"x"}, {}, {}, {}});
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::EmptyTestSet);
    }
  }

  TEST_CASE("global importance on y = 2 x1 + noise") {
    oracle::Gen g(61);
    auto [ds, fr] = fixture(g, 20, 50, [&](const auto& x) { return 0.4 * x[0] + g.normal(0, 0.01); });
    const auto [train, test] = build_design_matrix(ds, fr, "value", 0.8, 1);
    GBDTParams p;
    p.n_rounds = 60;
    const GBDTModel model = train_gbdt(train, p);
    const auto gi = global_importance(model, test, 10, 3);
    REQUIRE(gi.ranking.size() == 3);
    CHECK(gi.ranking[0].feature == "x1");
    CHECK(gi.ranking[0].rank == 1);
    CHECK(gi.ranking[0].mean_abs_shap > gi.ranking[1].mean_abs_shap);
    // constant column never splits, so every row attributes exactly zero to it
    for (const auto& fi : gi.ranking) {
      if (fi.feature == "constant") CHECK(fi.mean_abs_shap == 0.0);
    }
    CHECK(gi.density.size() == 3 * test.size());
    // duplicated rows leave the means unchanged
    DesignSet doubled = test;
    for (std::size_t r = 0; r < test.size(); ++r) doubled.push_row(test.row(r), test.y[r], test.origin[r]);
    const auto gi2 = global_importance(model, doubled, 10, 1);
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(gi2.ranking[k].mean_abs_shap == doctest::Approx(gi.ranking[k].mean_abs_shap).epsilon(1e-13));
    }
  }

  TEST_CASE("model using a single feature ranks it first, others zero") {
    GBDTModel m;
    m.feature_names = {"a", "b", "c"};
    m.learning_rate = 1;
    RegressionTree t;
    t.nodes = {TreeNode{2, 0.0, true, 1, 2, 0, 10}, TreeNode{-1, 0, true, -1, -1, -1, 5},
               TreeNode{-1, 0, true, -1, -1, 1, 5}};
    m.trees = {t};
    DesignSet test;
    test.feature_names = m.feature_names;
    for (double c : {-1.0, 1.0, 2.0}) test.push_row(std::vector<double>{3, 4, c}, 0, {});
    const auto gi = global_importance(m, test, 2);
    CHECK(gi.ranking[0].feature == "c");
    CHECK(gi.ranking[1].mean_abs_shap == 0.0);
    CHECK(gi.ranking[2].mean_abs_shap == 0.0);
    CHECK(gi.ranking[1].feature == "a");  // ties keep feature order
    CHECK(gi.density.size() == 2 * 3);
  }

  TEST_CASE("quantiles and fences") {
    std::vector<double> s{1, 2, 3, 4};
    CHECK(quantile_sorted(s, 0.25) == 1.75);
    CHECK(quantile_sorted(s, 0.75) == 3.25);
    CHECK(quantile_sorted(s, 0.0) == 1);
    CHECK(quantile_sorted(s, 1.0) == 4);
    const auto [lo, hi] = iqr_fences({4, 1, 3, 2}, 1.5);
    CHECK(lo == 1.75 - 1.5 * 1.5);
    CHECK(hi == 3.25 + 1.5 * 1.5);
  }

  TEST_CASE("find_outliers examples") {
    std::vector<double> xs(99, 0.0);
    xs.push_back(10.0);
    const auto out = find_outliers(pooled_frame(xs), "value", 1.5);
    REQUIRE(out.size() == 1);
    CHECK(out[0].t == 99);
    CHECK(out[0].value == 10.0);
    CHECK(out[0].direction == OutlierDirection::High);
    CHECK(out[0].lower == 0.0);
    CHECK(out[0].upper == 0.0);

    CHECK(find_outliers(pooled_frame(std::vector<double>(50, 0.3)), "value").empty());

    oracle::Gen g(62);
    std::vector<double> wide;
    for (int i = 0; i < 500; ++i) wide.push_back(g.normal(0, 1));
    CHECK(find_outliers(pooled_frame(wide), "value", 1e6).empty());
    for (const auto& o : find_outliers(pooled_frame(wide), "value", 1.5)) {
      CHECK((o.value > o.upper || o.value < o.lower));
      CHECK((o.direction == OutlierDirection::Low) == (o.value < o.lower));
    }
    CHECK_THROWS_AS(find_outliers(pooled_frame(wide), "nope"), Error);
  }

  TEST_CASE("local explanations repartition the prediction") {
    oracle::Gen g(63);
    auto [ds, fr] = fixture(g, 10, 40, [](const auto& x) { return x[0] > 0.9 ? 1.0 : 0.1 * x[1]; });
    const auto [train, test] = build_design_matrix(ds, fr, "value", 0.8, 2);
    GBDTParams p;
    p.n_rounds = 40;
    p.min_samples_leaf = 5;
    const auto model = train_gbdt(train, p);
    const auto metrics = evaluate_model(model, test);
    REQUIRE(metrics.gated_in);
    const auto outliers = find_outliers(fr, "value");
    REQUIRE_FALSE(outliers.empty());
    for (std::size_t k : {std::size_t{1}, std::size_t{2}, std::size_t{10}}) {
      const auto loc = local_explanations(model, metrics, ds, outliers, k, false, 2);
      REQUIRE(loc.size() == outliers.size());
      for (const auto& e : loc) {
        CHECK(e.contributions.size() == std::min<std::size_t>(k, 3));
        double s = e.base_value + e.remainder;
        for (std::size_t c = 0; c < e.contributions.size(); ++c) {
          s += e.contributions[c].phi;
          if (c) CHECK(std::abs(e.contributions[c].phi) <= std::abs(e.contributions[c - 1].phi));
        }
        CHECK(std::abs(s - e.prediction) <= 1e-9);
      }
    }
    ModelMetrics bad = metrics;
    bad.gated_in = false;
    try {
      local_explanations(model, bad, ds, outliers);
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ModelGatedOut);
    }
    CHECK_NOTHROW(local_explanations(model, bad, ds, outliers, 10, true));
  }

  TEST_CASE("single-feature model: one feature carries the deviation") {
    GBDTModel m;
    m.feature_names = {"only"};
    m.learning_rate = 1;
    RegressionTree t;
    t.nodes = {TreeNode{0, 0.0, true, 1, 2, 0, 10}, TreeNode{-1, 0, true, -1, -1, -1, 9},
               TreeNode{-1, 0, true, -1, -1, 5, 1}};
    m.trees = {t};
    Dataset ds;
    ds.manifest.feature_names = {"only"};
    Step s;
    s.features = {1.0};
    ds.traces.push_back(Trace{"a", {s}, std::nullopt});
    OutlierRecord o{"a", 0, 0, "value", 5, OutlierDirection::High, -1, 1};
    ModelMetrics ok;
    ok.gated_in = true;
    const auto e = local_explanations(m, ok, ds, {o}, 10).at(0);
    REQUIRE(e.contributions.size() == 1);
    CHECK(e.contributions[0].phi == doctest::Approx(e.prediction - e.base_value).epsilon(1e-15));
    CHECK(e.remainder == 0.0);
  }
}
