#include <doctest.h>

#include <chrono>
#include <cmath>

#include "oracle.hpp"
#include "smoothperf/prbep_risk.hpp"
#include "synthetic.hpp"

using namespace smoothperf;

namespace {

void check_dual_invariants(const PrbepDual& dual, double mu, std::span<const int> labels) {
  double coupling = 0.0;
  for (std::size_t i = 0; i < dual.beta.size(); ++i) {
    CHECK(dual.beta[i] >= 0.0);
    CHECK(dual.beta[i] <= 1.0);
    coupling += labels[i] * dual.beta[i];
    const double clipped = std::clamp((dual.coeffs[i] - labels[i] * dual.nu) / mu, 0.0, 1.0);
    CHECK(std::abs(dual.beta[i] - clipped) <= 1e-10);
  }
  CHECK(std::abs(coupling) <= 1e-10);
}

}  // namespace

TEST_CASE("prbep_linear_coeffs on the two-point set") {
  auto d = testing::two_point_dataset();
  CHECK(prbep_linear_coeffs(std::vector<double>{0.0}, d) == std::vector<double>{1.0, 0.0});
  CHECK(prbep_linear_coeffs(std::vector<double>{1.0}, d) == std::vector<double>{0.0, -1.0});
  CHECK(prbep_linear_coeffs(std::vector<double>{-1.0}, d) == std::vector<double>{2.0, 1.0});
}

TEST_CASE("solve_coupled_clip hand cases") {
  std::vector<int> labels{1, -1};
  auto a = solve_coupled_clip({1.0, 0.0}, 1.0, labels);
  CHECK(a.nu == doctest::Approx(0.5));
  CHECK(a.beta[0] == doctest::Approx(0.5));
  CHECK(a.beta[1] == doctest::Approx(0.5));

  for (double mu : {0.01, 1.0, 7.0}) {
    auto z = solve_coupled_clip({0.0, 0.0, 0.0}, mu, std::vector<int>{1, -1, -1});
    for (double b : z.beta) CHECK(b == 0.0);
  }

  auto c = solve_coupled_clip({0.0, -1.0}, 1.0, labels);
  CHECK(c.beta[0] == 0.0);
  CHECK(c.beta[1] == 0.0);
  check_dual_invariants(c, 1.0, labels);

  CHECK_THROWS_AS(solve_coupled_clip({1.0}, 0.0, std::vector<int>{1}), std::invalid_argument);
}

TEST_CASE("solve_coupled_clip matches the projection oracle") {
  testing::Rng rng(101);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_int_distribution<int> n_dist(2, 50);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = n_dist(rng);
    std::vector<double> c(n);
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) {
      c[i] = u(rng);
      labels[i] = i == 0 ? 1 : i == 1 ? -1 : (u(rng) > 0 ? 1 : -1);
    }
    const double mu = std::pow(10.0, u(rng));
    auto dual = solve_coupled_clip(c, mu, labels);
    check_dual_invariants(dual, mu, labels);
    auto ref = oracle::reference_smoothed_prbep(c, mu, labels);
    double value = 0.0;
    for (int i = 0; i < n; ++i) {
      CHECK(std::abs(dual.beta[i] - ref.beta[i]) <= 1e-6);
      value += c[i] * dual.beta[i] - 0.5 * mu * dual.beta[i] * dual.beta[i];
    }
    CHECK(std::abs(value - ref.value) <= 1e-6);
  }
}

TEST_CASE("flat zero segments give the same beta for every root") {
  // Both coordinates clip at 0 for every nu in [0, 1].
  std::vector<int> labels{1, -1, 1, -1};
  std::vector<double> c{0.0, -1.0, -0.5, -2.0};
  auto dual = solve_coupled_clip(c, 1.0, labels);
  for (double nu : {0.0, 0.25, 0.5}) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double b = std::clamp((c[i] - labels[i] * nu) / 1.0, 0.0, 1.0);
      CHECK(std::abs(b - dual.beta[i]) <= 1e-10);
    }
  }
}

TEST_CASE("smoothed_prbep_eval hand cases") {
  auto d = testing::two_point_dataset();
  auto r0 = smoothed_prbep_eval(std::vector<double>{0.0}, d, 1.0);
  CHECK(r0.value == doctest::Approx(0.25));
  CHECK(r0.gradient[0] == doctest::Approx(-1.0));

  auto r1 = smoothed_prbep_eval(std::vector<double>{1.0}, d, 1.0);
  CHECK(r1.value == doctest::Approx(0.0));
  CHECK(r1.gradient[0] == doctest::Approx(0.0));
}

TEST_CASE("exact_prbep_risk hand cases") {
  auto d = testing::two_point_dataset();
  CHECK(exact_prbep_risk(std::vector<double>{0.0}, d).value == 1.0);
  CHECK(exact_prbep_risk(std::vector<double>{1.0}, d).value == 0.0);
  auto r = exact_prbep_risk(std::vector<double>{-1.0}, d);
  CHECK(r.value == 3.0);
  CHECK(r.gradient[0] == -2.0);

  // w = 0 with n+ <= n-: max b/n+ over b = c is 1.
  testing::Rng rng(2);
  auto big = testing::random_dataset(rng, 3, 5, 4, 0.8);
  CHECK(exact_prbep_risk(std::vector<double>(4, 0.0), big).value == doctest::Approx(1.0));
}

TEST_CASE("separation labeling is balanced and picks the smallest tied k") {
  auto d = testing::two_point_dataset();
  // Scores (1/2, -1/2): k = 1 gives 1 + (-1/2 - 1/2) = 0, tying k = 0.
  auto sep = separate_prbep(std::vector<double>{0.5, -0.5}, d);
  CHECK(sep.counts.b == 0);
  CHECK(sep.labeling == std::vector<int>{1, -1});

  testing::Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    auto r = testing::random_dataset(rng, 12, 3);
    auto w = testing::random_unit_ball(rng, 3);
    auto s = separate_prbep(scores(w, r), r);
    std::size_t b = 0, c = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r.label(i) > 0 && s.labeling[i] < 0) ++b;
      if (r.label(i) < 0 && s.labeling[i] > 0) ++c;
    }
    CHECK(b == c);
    CHECK(b == s.counts.b);
  }
}

TEST_CASE("exact_prbep_risk equals enumeration over labelings") {
  testing::Rng rng(7);
  std::uniform_int_distribution<std::size_t> n_dist(2, 12);
  for (int trial = 0; trial < 50; ++trial) {
    auto d = testing::random_dataset(rng, n_dist(rng), 4);
    auto w = testing::random_unit_ball(rng, 4);
    for (double& v : w) v *= 3.0;
    CHECK(std::abs(exact_prbep_risk(w, d).value - oracle::enumerate_prbep_risk(w, d)) <= 1e-12);
  }
}

TEST_CASE("exact_prbep_risk subgradient is a supporting hyperplane") {
  testing::Rng rng(71);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    auto d = testing::random_dataset(rng, 14, 3);
    std::vector<double> w{u(rng), u(rng), u(rng)};
    auto r = exact_prbep_risk(w, d);
    for (int probe = 0; probe < 20; ++probe) {
      std::vector<double> v{u(rng), u(rng), u(rng)};
      double linear = r.value;
      for (std::size_t k = 0; k < 3; ++k) linear += r.gradient[k] * (v[k] - w[k]);
      CHECK(exact_prbep_risk(v, d).value >= linear - 1e-12);
    }
  }
}

TEST_CASE("smoothed PRBEP gradient matches finite differences") {
  testing::Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    auto d = testing::random_dataset(rng, 20, 5);
    auto w = testing::random_unit_ball(rng, 5);
    const double mu = 0.5;
    auto r = smoothed_prbep_eval(w, d, mu);
    auto fd = oracle::finite_diff_gradient(
        [&](std::span<const double> v) { return smoothed_prbep_eval(v, d, mu).value; }, w);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < fd.size(); ++k) {
      num += (fd[k] - r.gradient[k]) * (fd[k] - r.gradient[k]);
      den += r.gradient[k] * r.gradient[k];
    }
    CHECK(std::sqrt(num) <= 1e-5 * std::max(std::sqrt(den), 1e-3));
  }
}

TEST_CASE("solve_coupled_clip scales as n log n") {
  testing::Rng rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto time_for = [&](std::size_t n) {
    std::vector<double> c(n);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      c[i] = u(rng) * 1e-3;
      labels[i] = (i % 3 == 0) ? 1 : -1;
    }
    double best = 1e300;
    for (int rep = 0; rep < 5; ++rep) {
      auto t0 = std::chrono::steady_clock::now();
      auto dual = solve_coupled_clip(c, 1e-5, labels);
      auto t1 = std::chrono::steady_clock::now();
      best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
      CHECK(dual.beta.size() == n);
    }
    return best;
  };
  const double t1 = time_for(100'000);
  const double t2 = time_for(200'000);
  CHECK(t2 / t1 <= 2.5);
}
