#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "smoothperf/smoothing.hpp"
#include "smoothperf/sparse_data.hpp"

namespace smoothperf {

/// b = false negatives among P, c = false positives among N for a candidate
/// labeling. The PRBEP discrepancy is finite only when b == c.
struct ContingencyCounts {
  std::size_t b = 0;
  std::size_t c = 0;
};

/// Maximizer of sum_i coeffs[i] beta[i] - (mu/2)||beta||^2 over
/// beta in [0,1]^n with sum_P beta = sum_N beta.
///
/// At the optimum every coordinate is the clipped affine function
///   beta[i] = median(0, (coeffs[i] - s_i nu) / mu, 1),  s_i = +1 on P, -1 on N,
/// where nu is the multiplier of the coupling constraint.
struct PrbepDual {
  std::vector<double> beta;
  double nu = 0.0;
  std::vector<double> coeffs;
};

/// c_i = -(2/n) y_i <w, x_i> + [i in P] / n+.
std::vector<double> prbep_linear_coeffs(std::span<const double> w, const Dataset& d);

/// Exact solution of the coupled box QP in O(n log n): sorts the 2n
/// clip-boundary breakpoints of h(nu) = sum_P beta_i(nu) - sum_N beta_j(nu)
/// and solves the linear piece that contains its zero. `labels` gives the
/// P/N partition (+1 / -1) and must be as long as `coeffs`.
PrbepDual solve_coupled_clip(std::vector<double> coeffs, double mu,
                             std::span<const int> labels);

/// Smoothed PRBEP risk and its gradient sum_i (-2/n) y_i beta*_i x_i.
RiskEval smoothed_prbep_eval(std::span<const double> w, const Dataset& d, double mu);

/// Result of the b == c separation search over candidate labelings.
struct PrbepSeparation {
  double value = 0.0;
  ContingencyCounts counts;
  /// z*: +1 / -1 per example.
  std::vector<int> labeling;
};

/// Most violating labeling for the given scores: flip the k lowest-scored
/// positives and the k highest-scored negatives, with k chosen by prefix
/// sums. Ties in k resolve to the smallest k.
PrbepSeparation separate_prbep(std::span<const double> scores, const Dataset& d);

/// Non-smooth PRBEP risk and the subgradient (1/n) sum_i x_i (z*_i - y_i).
RiskEval exact_prbep_risk(std::span<const double> w, const Dataset& d);

}  // namespace smoothperf
