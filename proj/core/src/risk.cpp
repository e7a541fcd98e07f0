#include "smoothperf/risk.hpp"

#include "smoothperf/prbep_risk.hpp"
#include "smoothperf/rocarea_risk.hpp"

namespace smoothperf {

RiskEval smoothed_risk(Loss loss, std::span<const double> w, const Dataset& d, double mu) {
  return loss == Loss::Prbep ? smoothed_prbep_eval(w, d, mu) : smoothed_rocarea_eval(w, d, mu);
}

RiskEval exact_risk(Loss loss, std::span<const double> w, const Dataset& d) {
  return loss == Loss::Prbep ? exact_prbep_risk(w, d) : exact_rocarea_risk(w, d);
}

double primal_objective(Loss loss, double lambda, std::span<const double> w, const Dataset& d) {
  return regularized_objective(lambda, w, exact_risk(loss, w, d)).value;
}

}  // namespace smoothperf
