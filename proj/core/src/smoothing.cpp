#include "smoothperf/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace smoothperf {

Loss parse_loss(std::string_view name) {
  if (name == "prbep") return Loss::Prbep;
  if (name == "rocarea") return Loss::RocArea;
  throw std::invalid_argument("unknown loss '" + std::string(name) + "'");
}

std::string_view loss_name(Loss loss) {
  return loss == Loss::Prbep ? "prbep" : "rocarea";
}

SmoothingConstants smoothing_constants(Loss loss, const Dataset& d) {
  d.require_both_classes();
  const double r = radius(d);
  if (loss == Loss::Prbep) {
    const double n = static_cast<double>(d.size());
    return {n / 2.0, 2.0 * r / std::sqrt(n)};
  }
  const double m = static_cast<double>(d.n_plus()) * static_cast<double>(d.n_minus());
  return {m / 2.0, 2.0 * r / std::sqrt(m)};
}

double mu_hat(double epsilon, double prox_diameter) {
  if (!(epsilon > 0.0) || !(prox_diameter > 0.0)) {
    throw std::invalid_argument("mu_hat: epsilon and D must be positive");
  }
  return epsilon / prox_diameter;
}

double lipschitz_bound(double a_norm_bound, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("lipschitz_bound: mu must be positive");
  return a_norm_bound * a_norm_bound / mu;
}

SmoothingParams SmoothingParams::make(Loss loss, const Dataset& d, double epsilon,
                                      double mu_multiplier) {
  if (!(mu_multiplier >= 1.0)) {
    throw std::invalid_argument("mu multiplier must be >= 1");
  }
  const auto k = smoothing_constants(loss, d);
  SmoothingParams p;
  p.epsilon = epsilon;
  p.mu_multiplier = mu_multiplier;
  p.prox_diameter = k.prox_diameter;
  p.a_norm_bound = k.a_norm_bound;
  p.mu = mu_multiplier * mu_hat(epsilon, k.prox_diameter);
  return p;
}

ObjectiveEval regularized_objective(double lambda, std::span<const double> w,
                                    const RiskEval& risk) {
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be non-negative");
  if (risk.gradient.size() != w.size()) {
    throw std::invalid_argument("risk gradient and weights differ in length");
  }
  ObjectiveEval out;
  out.gradient.resize(w.size());
  double sq = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    sq += w[k] * w[k];
    out.gradient[k] = lambda * w[k] + risk.gradient[k];
  }
  out.value = 0.5 * lambda * sq + risk.value;
  return out;
}

double iteration_estimate(double lipschitz, double lambda, double delta0,
                          double epsilon) {
  if (!(lipschitz > 0.0) || !(lambda > 0.0) || !(delta0 > 0.0) || !(epsilon > 0.0)) {
    throw std::invalid_argument("iteration_estimate: inputs must be positive");
  }
  const double sublinear = std::sqrt(4.0 * lipschitz * delta0 / epsilon);
  if (lambda >= lipschitz) return sublinear;
  const double contraction = -std::log1p(-std::sqrt(lambda / lipschitz));
  const double linear = std::max(0.0, std::log(lipschitz * delta0 / epsilon) / contraction);
  return std::min(sublinear, linear);
}

}  // namespace smoothperf
