#pragma once

#include <span>
#include <vector>

#include "smoothperf/smoothing.hpp"
#include "smoothperf/sparse_data.hpp"

namespace smoothperf {

/// Per-example potentials whose pairwise differences give the optimal pair
/// duals, beta*_ij = median(1, a_i - a_j, -1):
///   a_i = (<w, x_i> - 1/4) / (mu m)  for i in P,
///   a_j = (<w, x_j> + 1/4) / (mu m)  for j in N.
/// Entries follow the order of Dataset::positives() / negatives().
struct PairPotentials {
  std::vector<double> pos;
  std::vector<double> neg;
};

PairPotentials pair_potentials(std::span<const double> w, const Dataset& d, double mu);

/// Row and column sums of beta*, gamma_i = sum_j beta*_ij and
/// gamma_j = sum_i beta*_ij, plus the totals sum beta* and sum beta*^2.
/// Pairs are never enumerated.
struct GammaSums {
  std::vector<double> pos;
  std::vector<double> neg;
  double sum_beta = 0.0;
  double sum_beta_sq = 0.0;
};

/// O(n log n): sorts both potential lists and walks them like a merge to
/// find, for every example, the window of partners whose difference lies in
/// [-1, 1]; prefix sums give the window contributions in O(1).
GammaSums gamma_sums(const PairPotentials& pp);

/// Smoothed ROCArea risk,
///   1/2 + (1/m) sum beta*_ij (<w, x_i - x_j> - 1/2) - (mu/2) sum beta*_ij^2,
/// and its gradient (1/m)(sum_P gamma_i x_i - sum_N gamma_j x_j).
RiskEval smoothed_rocarea_eval(std::span<const double> w, const Dataset& d, double mu);

/// Non-smooth ROCArea risk (1/m) sum_ij max(u_ij, 1 - u_ij), u_ij = <w, x_i - x_j>,
/// with z*_ij = +1 when u_ij >= 1/2. Runs in O(n log n) by counting.
RiskEval exact_rocarea_risk(std::span<const double> w, const Dataset& d);

}  // namespace smoothperf
