#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "smoothperf/rocarea_risk.hpp"
#include "synthetic.hpp"

using namespace smoothperf;

namespace {

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

// One positive x1 = [t] and one negative x2 = [0], so <w, x1 - x2> = w * t.
Dataset single_pair() {
  return Dataset({SparseVector({{0, 1.0}}), SparseVector{}}, {1, -1}, 1);
}

}  // namespace

TEST_CASE("pair_potentials") {
  auto d = testing::two_point_dataset();
  auto pp = pair_potentials(std::vector<double>{0.0}, d, 1.0);
  CHECK(pp.pos == std::vector<double>{-0.25});
  CHECK(pp.neg == std::vector<double>{0.25});

  // <w, x1 - x2> = 1/2 with mu m = 1 puts the pair at the kink center.
  auto kink = pair_potentials(std::vector<double>{0.5}, single_pair(), 1.0);
  CHECK(kink.pos[0] - kink.neg[0] == doctest::Approx(0.0));

  testing::Rng rng(4);
  auto r = testing::random_dataset(rng, 10, 3);
  auto w = testing::random_unit_ball(rng, 3);
  auto a = pair_potentials(w, r, 0.3);
  auto b = pair_potentials(w, r, 0.6);
  for (std::size_t k = 0; k < a.pos.size(); ++k) CHECK(b.pos[k] == doctest::Approx(a.pos[k] / 2));
  for (std::size_t k = 0; k < a.neg.size(); ++k) CHECK(b.neg[k] == doctest::Approx(a.neg[k] / 2));
  CHECK_THROWS_AS(pair_potentials(w, r, 0.0), std::invalid_argument);
}

TEST_CASE("gamma_sums hand cases") {
  auto g = gamma_sums({{0.9, 0.1}, {-0.5, 2.0}});
  CHECK(g.pos[0] == doctest::Approx(0.0));
  CHECK(g.pos[1] == doctest::Approx(-0.4));
  CHECK(g.neg[0] == doctest::Approx(1.6));
  CHECK(g.neg[1] == doctest::Approx(-2.0));
  CHECK(g.sum_beta == doctest::Approx(-0.4));
  CHECK(g.sum_beta_sq == doctest::Approx(3.36));

  auto zero = gamma_sums({{0.0, 0.0, 0.0}, {0.0, 0.0}});
  for (double v : zero.pos) CHECK(v == 0.0);
  for (double v : zero.neg) CHECK(v == 0.0);
  CHECK(zero.sum_beta_sq == 0.0);

  auto clipped = gamma_sums({{10.0}, {0.0}});
  CHECK(clipped.pos[0] == 1.0);
  CHECK(clipped.neg[0] == 1.0);
  CHECK(clipped.sum_beta_sq == 1.0);
}

TEST_CASE("gamma_sums equals pairwise summation") {
  testing::Rng rng(55);
  std::uniform_int_distribution<std::size_t> n_dist(1, 250);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 30; ++trial) {
    PairPotentials pp;
    pp.pos.resize(n_dist(rng));
    pp.neg.resize(n_dist(rng));
    for (double& v : pp.pos) v = u(rng);
    for (double& v : pp.neg) v = u(rng);
    auto fast = gamma_sums(pp);
    auto slow = oracle::pairwise_gamma_sums(pp);
    for (std::size_t k = 0; k < pp.pos.size(); ++k) CHECK(close(fast.pos[k], slow.pos[k], 1e-12));
    for (std::size_t k = 0; k < pp.neg.size(); ++k) CHECK(close(fast.neg[k], slow.neg[k], 1e-12));
    CHECK(close(fast.sum_beta, slow.sum_beta, 1e-12));
    CHECK(close(fast.sum_beta_sq, slow.sum_beta_sq, 1e-12));
    double row = 0.0, col = 0.0;
    for (double v : fast.pos) row += v;
    for (double v : fast.neg) col += v;
    CHECK(std::abs(row - col) <= 1e-9);
  }
}

TEST_CASE("smoothed_rocarea_eval single-pair closed forms") {
  auto d = testing::two_point_dataset();
  auto r = smoothed_rocarea_eval(std::vector<double>{0.0}, d, 1.0);
  CHECK(r.value == doctest::Approx(5.0 / 8.0));
  // -(x1 - x2)/2 = -[2]/2
  CHECK(r.gradient[0] == doctest::Approx(-1.0));

  auto kink = smoothed_rocarea_eval(std::vector<double>{0.5}, single_pair(), 1.0);
  CHECK(kink.value == doctest::Approx(0.5));
  CHECK(kink.gradient[0] == doctest::Approx(0.0));
  CHECK(exact_rocarea_risk(std::vector<double>{0.5}, single_pair()).value == doctest::Approx(0.5));

  auto full = smoothed_rocarea_eval(std::vector<double>{2.0}, single_pair(), 1.0);
  CHECK(full.value == doctest::Approx(1.5));
  const double exact = exact_rocarea_risk(std::vector<double>{2.0}, single_pair()).value;
  CHECK(exact == doctest::Approx(2.0));
  CHECK(exact - full.value == doctest::Approx(0.5));  // mu D with D = m/2
}

TEST_CASE("exact_rocarea_risk hand cases") {
  auto d = testing::two_point_dataset();
  CHECK(exact_rocarea_risk(std::vector<double>{0.0}, d).value == 1.0);
  CHECK(exact_rocarea_risk(std::vector<double>{2.0}, single_pair()).value == 2.0);
  auto tie = exact_rocarea_risk(std::vector<double>{0.5}, single_pair());
  CHECK(tie.value == 0.5);
  CHECK(tie.gradient[0] == 1.0);  // z* = +1: (x1 - x2)/m
}

TEST_CASE("exact_rocarea_risk equals pairwise enumeration") {
  testing::Rng rng(77);
  std::uniform_int_distribution<std::size_t> n_dist(1, 50);
  for (int trial = 0; trial < 40; ++trial) {
    auto d = testing::random_dataset(rng, n_dist(rng), n_dist(rng), 4, 0.6);
    auto w = testing::random_unit_ball(rng, 4);
    for (double& v : w) v *= 2.0;
    auto fast = exact_rocarea_risk(w, d);
    auto slow = oracle::enumerate_rocarea_risk(w, d);
    CHECK(std::abs(fast.value - slow.value) <= 1e-12);
    for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(fast.gradient[k] - slow.gradient[k]) <= 1e-12);
  }
}

TEST_CASE("smoothed_rocarea_eval equals the pairwise value") {
  testing::Rng rng(81);
  for (int trial = 0; trial < 30; ++trial) {
    auto d = testing::random_dataset(rng, 30, 4);
    auto w = testing::random_unit_ball(rng, 4);
    for (double mu : {1e-3, 1e-2, 0.3}) {
      CHECK(std::abs(smoothed_rocarea_eval(w, d, mu).value -
                     oracle::pairwise_smoothed_rocarea(w, d, mu)) <= 1e-12);
    }
  }
}

TEST_CASE("smoothed ROCArea gradient matches finite differences") {
  testing::Rng rng(19);
  for (int trial = 0; trial < 30; ++trial) {
    auto d = testing::random_dataset(rng, 20, 5);
    auto w = testing::random_unit_ball(rng, 5);
    const double mu = 0.05;
    auto r = smoothed_rocarea_eval(w, d, mu);
    auto fd = oracle::finite_diff_gradient(
        [&](std::span<const double> v) { return smoothed_rocarea_eval(v, d, mu).value; }, w);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < fd.size(); ++k) {
      num += (fd[k] - r.gradient[k]) * (fd[k] - r.gradient[k]);
      den += r.gradient[k] * r.gradient[k];
    }
    CHECK(std::sqrt(num) <= 1e-5 * std::max(std::sqrt(den), 1e-3));
  }
}
