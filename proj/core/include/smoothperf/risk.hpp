#pragma once

#include <span>

#include "smoothperf/smoothing.hpp"
#include "smoothperf/sparse_data.hpp"

namespace smoothperf {

/// Smoothed risk for either loss at smoothing parameter mu.
RiskEval smoothed_risk(Loss loss, std::span<const double> w, const Dataset& d, double mu);

/// Non-smooth risk and a subgradient from the separation oracle.
RiskEval exact_risk(Loss loss, std::span<const double> w, const Dataset& d);

/// (lambda/2)||w||^2 + exact risk.
double primal_objective(Loss loss, double lambda, std::span<const double> w, const Dataset& d);

}  // namespace smoothperf
