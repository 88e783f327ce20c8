#include <fstream>

#include "doctest.h"
#include "ixdrl/common.hpp"
#include "ixdrl/report.hpp"
#include "ixdrl/trace.hpp"
#include "support/oracles.hpp"
#include "support/tempdir.hpp"

using namespace ixdrl;

namespace {

Manifest two_factor_manifest() {
  Manifest m;
  m.factor_names = {"move", "mode"};
  m.actions_per_factor = {{"N", "S", "E", "W"}, {"C", "D"}};
  m.feature_names = {"a", "b", "c", "d"};
  m.discount = 0.9;
  return m;
}

std::string good_line(const std::string& id, int t, bool done = false) {
  return "{\"trace_id\":\"" + id + "\",\"t\":" + std::to_string(t) +
         ",\"features\":[1,2,3,4],\"action\":[0,1],\"dists\":[[0.25,0.25,0.25,0.25],[0.5,0.5]],"
         "\"value\":0.5,\"reward\":-0.1,\"done\":" + (done ? "true" : "false") + "}";
}

ErrorCode load_error(const testutil::TempDir& dir, const std::string& body) {
  write_manifest(two_factor_manifest(), dir / "d.manifest.json");
  write_text_file(dir / "d.jsonl", body);
  try {
    load_dataset(dir / "d.jsonl");
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a load error");
  return ErrorCode::IoError;
}

}  // namespace

TEST_SUITE("trace") {
  TEST_CASE("two traces load in file order") {
    testutil::TempDir dir;
    write_manifest(two_factor_manifest(), dir / "d.manifest.json");
    write_text_file(dir / "d.jsonl", good_line("b", 0) + "\n" + good_line("b", 1, true) + "\n" + good_line("a", 0) + "\n");
    const Dataset ds = load_dataset(dir / "d.jsonl");
    REQUIRE(ds.traces.size() == 2);
    CHECK(ds.traces[0].trace_id == "b");
    CHECK(ds.traces[0].length() == 2);
    CHECK(ds.traces[1].trace_id == "a");
    CHECK(dataset_stats(ds).trace_count == 2);
  }

  TEST_CASE("dist summing to 0.8 is rejected at its line") {
    testutil::TempDir dir;
    std::string bad = good_line("a", 1);
    bad.replace(bad.find("[0.5,0.5]"), 9, "[0.3,0.5]");
    write_manifest(two_factor_manifest(), dir / "d.manifest.json");
    write_text_file(dir / "d.jsonl", good_line("a", 0) + "\n" + bad + "\n");
    try {
      load_dataset(dir / "d.jsonl");
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MalformedRecord);
      CHECK(std::string(e.what()).find("d.jsonl:2") != std::string::npos);
    }
  }

  TEST_CASE("loader error paths") {
    testutil::TempDir dir;
    std::string three = good_line("a", 0);
    three.replace(three.find("[1,2,3,4]"), 9, "[1,2,3]");
    CHECK(load_error(dir, three + "\n") == ErrorCode::ManifestMismatch);

    std::string arity = good_line("a", 0);
    arity.replace(arity.find("[0.5,0.5]"), 9, "[0.5,0.25,0.25]");
    CHECK(load_error(dir, arity + "\n") == ErrorCode::ManifestMismatch);

    CHECK(load_error(dir, good_line("a", 0) + "\n" + good_line("a", 2) + "\n") == ErrorCode::NonContiguousTimesteps);
    CHECK(load_error(dir, good_line("a", 1) + "\n") == ErrorCode::NonContiguousTimesteps);
    CHECK(load_error(dir, good_line("a", 0, true) + "\n" + good_line("a", 1) + "\n") == ErrorCode::MalformedRecord);
    CHECK(load_error(dir, good_line("a", 0) + "\n" + good_line("b", 0) + "\n" + good_line("a", 1) + "\n") ==
          ErrorCode::MalformedRecord);
    CHECK(load_error(dir, "{not json\n") == ErrorCode::MalformedRecord);
    CHECK(load_error(dir, "") == ErrorCode::EmptyDataset);

    std::string neg = good_line("a", 0);
    neg.replace(neg.find("[0.5,0.5]"), 9, "[1.5,-0.5]");
    CHECK(load_error(dir, neg + "\n") == ErrorCode::MalformedRecord);
  }

  TEST_CASE("missing files are IoError") {
    testutil::TempDir dir;
    CHECK_THROWS_AS(load_dataset(dir / "nope.jsonl"), Error);
    try {
      load_manifest(dir / "nope.manifest.json");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::IoError);
    }
  }

  TEST_CASE("write then load is the identity") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      oracle::Gen g(seed);
      Dataset ds = oracle::random_dataset(g, 1 + g.index(4), 1 + g.index(5), 12);
      if (g.coin()) ds.manifest.reward_range_override = std::make_pair(-g.uniform(0, 5), g.uniform(0, 5));
      if (g.coin()) ds.traces[0].outcome_tag = "tagged";
      validate_dataset(ds);
      testutil::TempDir dir;
      write_dataset(ds, dir / "rt.jsonl");
      const Dataset back = load_dataset(dir / "rt.jsonl");
      CHECK(back == ds);
    }
  }

  TEST_CASE("writer error paths") {
    testutil::TempDir dir;
    Dataset empty;
    empty.manifest = two_factor_manifest();
    try {
      write_dataset(empty, dir / "e.jsonl");
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::EmptyDataset);
    }
    oracle::Gen g(3);
    const Dataset ds = oracle::random_dataset(g, 2, 2, 4);
    try {
      write_dataset(ds, dir / "missing_dir" / "x.jsonl");
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::IoError);
    }
  }

  TEST_CASE("dataset_stats examples") {
    oracle::Gen g(1);
    Dataset ds = oracle::random_dataset(g, 1, 1, 1);
    ds.traces[0].steps.resize(1);
    for (double v : {0.0, 5.0, 10.0}) {
      Step s = ds.traces[0].steps[0];
      s.t = ds.traces[0].steps.size();
      s.value = v;
      s.reward = -0.1;
      s.done = false;
      ds.traces[0].steps.push_back(s);
    }
    ds.traces[0].steps.erase(ds.traces[0].steps.begin());
    for (std::size_t t = 0; t < 3; ++t) ds.traces[0].steps[t].t = t;
    DatasetStats st = dataset_stats(ds);
    CHECK(st.value_min == 0.0);
    CHECK(st.value_max == 10.0);
    CHECK(st.reward_min == -0.1);
    CHECK(st.reward_max == -0.1);
    ds.manifest.reward_range_override = std::make_pair(-10.0, 60.0);
    st = dataset_stats(ds);
    CHECK(st.reward_min == -10.0);
    CHECK(st.reward_max == 60.0);
  }

  TEST_CASE("dataset_stats is permutation invariant") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      oracle::Gen g(seed);
      Dataset ds = oracle::random_dataset(g, 2, 6, 10);
      const DatasetStats a = dataset_stats(ds);
      std::shuffle(ds.traces.begin(), ds.traces.end(), g.engine());
      const DatasetStats b = dataset_stats(ds);
      CHECK(a.value_min == b.value_min);
      CHECK(a.value_max == b.value_max);
      CHECK(a.reward_min == b.reward_min);
      CHECK(a.reward_max == b.reward_max);
      CHECK(a.length_mean == doctest::Approx(b.length_mean).epsilon(1e-15));
      CHECK(a.length_std == doctest::Approx(b.length_std).epsilon(1e-12));
    }
  }

  TEST_CASE("random simplex dists validate and renormalize") {
    oracle::Gen g(11);
    for (int i = 0; i < 2000; ++i) {
      std::vector<double> p = g.simplex(1 + g.index(8));
      for (auto& v : p) v *= 1.0 + g.uniform(-4e-7, 4e-7);
      CHECK(check_and_normalize_dist(p).empty());
      double s = 0.0;
      for (double v : p) {
        CHECK(v >= 0.0);
        s += v;
      }
      CHECK(std::abs(s - 1.0) < 1e-12);
    }
    std::vector<double> low = {0.3, 0.5};
    CHECK_FALSE(check_and_normalize_dist(low).empty());
  }

  TEST_CASE("manifest invariants") {
    Manifest m = two_factor_manifest();
    CHECK_NOTHROW(m.validate());
    m.feature_names.push_back("a");
    CHECK_THROWS_AS(m.validate(), Error);
    m = two_factor_manifest();
    m.discount = 1.5;
    CHECK_THROWS_AS(m.validate(), Error);
    m = two_factor_manifest();
    m.actions_per_factor[1].clear();
    CHECK_THROWS_AS(m.validate(), Error);
  }

  TEST_CASE("exporter-written fixture loads") {
    const Dataset ds = load_dataset(testutil::data_dir() / "four_factor.jsonl");
    CHECK(ds.traces.size() == 3);
    CHECK(ds.manifest.factor_count() == 4);
    for (const auto& tr : ds.traces) {
      for (const auto& s : tr.steps) {
        for (const auto& d : s.dists) {
          double sum = 0.0;
          for (double v : d) sum += v;
          CHECK(std::abs(sum - 1.0) < 1e-12);
        }
      }
    }
    // Re-serializing through the writer and loading again changes nothing.
    testutil::TempDir dir;
    write_dataset(ds, dir / "again.jsonl");
    CHECK(load_dataset(dir / "again.jsonl") == ds);
  }
}
