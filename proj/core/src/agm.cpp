#include <cmath>

#include "smoothperf/cpu_timer.hpp"
#include "smoothperf/solvers.hpp"
#include "vec_ops.hpp"

namespace smoothperf {

namespace {

// Full objective (lambda/2)||w||^2 + f(w) with its gradient.
RiskEval full_objective(const DifferentiableFunction& f, double lambda,
                        std::span<const double> w) {
  RiskEval e = f(w);
  if (!std::isfinite(e.value) || !detail::all_finite(e.gradient)) {
    throw SolverError("agm: objective is not finite");
  }
  const auto reg = regularized_objective(lambda, w, e);
  return {reg.value, reg.gradient};
}

}  // namespace

SolverResult agm_minimize(const DifferentiableFunction& smooth_part, double lipschitz,
                          Weights w0, const SolverConfig& cfg, const TraceMonitor& monitor) {
  cfg.validate();
  if (!(lipschitz > 0.0)) throw std::invalid_argument("agm: Lipschitz constant must be positive");

  CpuStopwatch clock;
  const double total_l = lipschitz + cfg.lambda;
  const double root_q = std::sqrt(cfg.lambda / total_l);
  const double momentum = (1.0 - root_q) / (1.0 + root_q);

  SolverResult result;
  result.w = std::move(w0);
  RiskEval at_w = full_objective(smooth_part, cfg.lambda, result.w);

  auto record = [&](int iter, double value) {
    TracePoint tp;
    tp.iter = iter;
    tp.primal_J = value;
    tp.smooth_J = value;
    if (monitor) {
      PauseGuard pause(clock);
      monitor(IterateView{iter, result.w, value}, tp);
    }
    tp.cpu_ms = clock.elapsed_ms();
    result.trace.push_back(tp);
  };
  record(0, at_w.value);

  result.status = SolverStatus::MaxIterations;
  if (detail::norm(at_w.gradient) <= cfg.tol) result.status = SolverStatus::Converged;

  Weights y = result.w;
  RiskEval at_y = at_w;
  for (int iter = 1; iter <= cfg.max_iters && result.status != SolverStatus::Converged; ++iter) {
    Weights next = y;
    detail::axpy(-1.0 / total_l, at_y.gradient, next);
    at_w = full_objective(smooth_part, cfg.lambda, next);

    for (std::size_t k = 0; k < y.size(); ++k) {
      y[k] = next[k] + momentum * (next[k] - result.w[k]);
    }
    result.w = std::move(next);
    result.iterations = iter;
    record(iter, at_w.value);

    if (detail::norm(at_w.gradient) <= cfg.tol) {
      result.status = SolverStatus::Converged;
      break;
    }
    at_y = full_objective(smooth_part, cfg.lambda, y);
  }
  result.objective = at_w.value;
  return result;
}

}  // namespace smoothperf
