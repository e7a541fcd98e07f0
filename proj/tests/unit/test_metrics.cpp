#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "smoothperf/metrics.hpp"
#include "synthetic.hpp"

using namespace smoothperf;

TEST_CASE("prbep_metric hand cases") {
  std::vector<int> y{1, -1, 1, -1};
  CHECK(prbep_metric(std::vector<double>{4, 1, 3, 2}, y) == 1.0);
  CHECK(prbep_metric(std::vector<double>{1, 4, 2, 3}, y) == 0.0);
  CHECK(prbep_metric(std::vector<double>{4, 3, 1, 2}, y) == 0.5);
  // All tied: the first n+ indices are predicted positive.
  CHECK(prbep_metric(std::vector<double>{0, 0, 0, 0}, y) == 0.5);
  CHECK(prbep_metric(std::vector<double>{0, 0, 0, 0}, std::vector<int>{1, 1, -1, -1}) == 1.0);
  CHECK_THROWS_AS(prbep_metric(std::vector<double>{1, 2}, std::vector<int>{-1, -1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(prbep_metric(std::vector<double>{1}, std::vector<int>{1, -1}),
                  std::invalid_argument);
}

TEST_CASE("rocarea_metric hand cases") {
  std::vector<int> y{1, -1, 1, -1};
  CHECK(rocarea_metric(std::vector<double>{4, 1, 3, 2}, y) == 1.0);
  CHECK(rocarea_metric(std::vector<double>{1, 4, 2, 3}, y) == 0.0);
  CHECK(rocarea_metric(std::vector<double>{4, 3, 2, 1}, y) == 0.75);
  CHECK(rocarea_metric(std::vector<double>{0, 0, 0, 0}, y) == 0.5);
  CHECK_THROWS_AS(rocarea_metric(std::vector<double>{1, 2}, std::vector<int>{1, 1}),
                  std::invalid_argument);
}

TEST_CASE("metrics are invariant under increasing transforms") {
  testing::Rng rng(31);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 40;
    std::vector<double> s(n), t(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = std::round(4.0 * g(rng)) / 4.0;  // coarse grid forces ties
      t[i] = std::exp(s[i]) * 3.0 - 1.0;
      y[i] = i == 0 ? 1 : i == 1 ? -1 : (g(rng) > 0.3 ? 1 : -1);
    }
    CHECK(prbep_metric(s, y) == prbep_metric(t, y));
    CHECK(rocarea_metric(s, y) == rocarea_metric(t, y));
  }
}

TEST_CASE("rocarea_metric agrees with pair counting and reverses under negation") {
  testing::Rng rng(37);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 60;
    std::vector<double> s(n), neg(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = std::round(3.0 * g(rng)) / 3.0;
      neg[i] = -s[i];
      y[i] = i == 0 ? 1 : i == 1 ? -1 : (g(rng) > 0.0 ? 1 : -1);
    }
    const double auc = rocarea_metric(s, y);
    CHECK(std::abs(auc - oracle::pairwise_rocarea_metric(s, y)) <= 1e-12);
    CHECK(std::abs(auc + rocarea_metric(neg, y) - 1.0) <= 1e-12);
  }
}

TEST_CASE("performance_metric dispatches on the loss") {
  std::vector<int> y{1, -1, 1, -1};
  std::vector<double> s{4, 3, 1, 2};
  CHECK(performance_metric(Loss::Prbep, s, y) == prbep_metric(s, y));
  CHECK(performance_metric(Loss::RocArea, s, y) == rocarea_metric(s, y));
}
