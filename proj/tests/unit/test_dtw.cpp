#include <cmath>

#include "doctest.h"
#include "ixdrl/common.hpp"
#include "ixdrl/dtw.hpp"
#include "support/oracles.hpp"

using namespace ixdrl;

namespace {

Series s1(std::vector<double> xs) { return Series{std::move(xs), 1}; }

Series random_series(oracle::Gen& g, std::size_t len, std::size_t dim) {
  Series s{{}, dim};
  for (std::size_t i = 0; i < len * dim; ++i) s.data.push_back(g.uniform(-1, 1));
  return s;
}

}  // namespace

TEST_SUITE("dtw") {
  TEST_CASE("examples") {
    const Series a = s1({1, 2, 3});
    CHECK(dtw_distance(a.view(), a.view()) == 0.0);
    const Series v{{1, 2, 3}, 3}, w{{4, 6, 3}, 3};
    CHECK(dtw_distance(v.view(), w.view()) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(dtw_distance(a.view(), s1({1, 2, 2, 3}).view()) == 0.0);
  }

  TEST_CASE("errors") {
    const Series e{{}, 2}, a{{1, 2}, 2}, b{{1, 2, 3}, 3};
    auto code = [](auto fn) {
      try {
        fn();
      } catch (const Error& err) {
        return err.code();
      }
      return ErrorCode::IoError;
    };
    CHECK(code([&] { dtw_distance(e.view(), a.view()); }) == ErrorCode::EmptySequence);
    CHECK(code([&] { dtw_distance(a.view(), b.view()); }) == ErrorCode::DimensionMismatch);
    CHECK(code([&] { dtw_distance(a.view(), a.view(), 0.0); }) == ErrorCode::InvalidArgument);
    CHECK(code([&] { dtw_distance(a.view(), a.view(), 1.5); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("unbanded matches memoized recursion") {
    oracle::Gen g(21);
    for (int i = 0; i < 300; ++i) {
      const std::size_t dim = 1 + g.index(13);
      const Series a = random_series(g, 1 + g.index(25), dim);
      const Series b = random_series(g, 1 + g.index(25), dim);
      const double d = dtw_distance(a.view(), b.view());
      CHECK(std::abs(d - oracle::dtw(a, b)) <= 1e-12);
      CHECK(dtw_distance(b.view(), a.view()) == d);
      CHECK(dtw_distance(a.view(), a.view()) == 0.0);
      CHECK(d >= 0.0);
    }
  }

  TEST_CASE("banded matches windowed recursion") {
    oracle::Gen g(22);
    for (int i = 0; i < 300; ++i) {
      const std::size_t dim = 1 + g.index(4);
      const Series a = random_series(g, 1 + g.index(30), dim);
      const Series b = random_series(g, 1 + g.index(30), dim);
      const double band = g.uniform(0.01, 1.0);
      const long n = static_cast<long>(a.length()), m = static_cast<long>(b.length());
      const long w = std::max(static_cast<long>(std::ceil(band * static_cast<double>(std::max(n, m)))), std::labs(n - m));
      const double d = dtw_distance(a.view(), b.view(), band);
      CHECK(std::abs(d - oracle::dtw(a, b, w)) <= 1e-12);
      CHECK(d >= dtw_distance(a.view(), b.view()));
    }
  }

  TEST_CASE("full-width band equals unbanded") {
    oracle::Gen g(23);
    for (int i = 0; i < 100; ++i) {
      const Series a = random_series(g, 1 + g.index(10), 3);
      const Series b = random_series(g, 1 + g.index(10), 3);
      CHECK(dtw_distance(a.view(), b.view(), 1.0) == dtw_distance(a.view(), b.view()));
    }
  }

  TEST_CASE("distance matrix") {
    oracle::Gen g(24);
    const Series same = random_series(g, 7, 2);
    const auto zeros = distance_matrix({same, same, same}, {"a", "b", "c"});
    for (double x : zeros.d) CHECK(x == 0.0);

    std::vector<Series> series;
    std::vector<std::string> ids;
    for (int i = 0; i < 12; ++i) {
      series.push_back(random_series(g, 3 + g.index(20), 2));
      ids.push_back("t" + std::to_string(i));
    }
    const auto serial = distance_matrix(series, ids, 0.2, 1);
    const auto parallel = distance_matrix(series, ids, 0.2, 6);
    CHECK(serial == parallel);
    for (std::size_t i = 0; i < 12; ++i) {
      CHECK(serial(i, i) == 0.0);
      for (std::size_t j = 0; j < 12; ++j) {
        CHECK(serial(i, j) == serial(j, i));
        if (i != j) CHECK(serial(i, j) == dtw_distance(series[i].view(), series[j].view(), 0.2));
      }
    }
  }
}
