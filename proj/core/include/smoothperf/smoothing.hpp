#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "smoothperf/sparse_data.hpp"

namespace smoothperf {

enum class Loss { Prbep, RocArea };

Loss parse_loss(std::string_view name);
std::string_view loss_name(Loss loss);

/// A risk value together with its (sub)gradient in weight space.
struct RiskEval {
  double value = 0.0;
  std::vector<double> gradient;
};

/// Prox diameter D = max d(beta) over the dual domain and an upper bound on
/// the operator norm of the linear map A that carries w into dual space.
struct SmoothingConstants {
  double prox_diameter = 0.0;
  double a_norm_bound = 0.0;
};

/// PRBEP: D = n/2, ||A|| <= 2R/sqrt(n).
/// ROCArea: D = m/2, ||A|| <= ||A||_F <= 2R/sqrt(m) with m = n+ * n-.
/// Throws std::invalid_argument if either class is empty.
SmoothingConstants smoothing_constants(Loss loss, const Dataset& d);

/// eps / D.
double mu_hat(double epsilon, double prox_diameter);

/// ||A||^2 / mu, the gradient Lipschitz constant of the smoothed risk.
double lipschitz_bound(double a_norm_bound, double mu);

struct SmoothingParams {
  double epsilon = 1e-3;
  double mu_multiplier = 1.0;
  double mu = 0.0;
  double prox_diameter = 0.0;
  double a_norm_bound = 0.0;

  /// mu = mu_multiplier * epsilon / D for the given loss and data.
  static SmoothingParams make(Loss loss, const Dataset& d, double epsilon,
                              double mu_multiplier = 1.0);

  double lipschitz() const { return lipschitz_bound(a_norm_bound, mu); }
};

struct ObjectiveEval {
  double value = 0.0;
  std::vector<double> gradient;
};

/// (lambda/2)||w||^2 + risk.value and its gradient.
ObjectiveEval regularized_objective(double lambda, std::span<const double> w,
                                    const RiskEval& risk);

/// Step count for the accelerated gradient method to reach accuracy eps,
///   min{ sqrt(4 L D0 / eps), ln(L D0 / eps) / -ln(1 - sqrt(lambda / L)) },
/// where D0 = ||w*||^2 / 2. The second branch is clamped at zero and is
/// dropped when lambda >= L. For planning and reporting only.
double iteration_estimate(double lipschitz, double lambda, double delta0,
                          double epsilon);

}  // namespace smoothperf
