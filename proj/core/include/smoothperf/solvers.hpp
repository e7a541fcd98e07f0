#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "smoothperf/smoothing.hpp"
#include "smoothperf/sparse_data.hpp"

namespace smoothperf {

struct SolverConfig {
  int max_iters = 1000;
  double tol = 1e-6;
  double lambda = 1.0;
  int lbfgs_buffer = 6;
  /// Duality-gap target for the bundle method.
  double epsilon = 1e-3;

  /// Throws std::invalid_argument on a non-positive tol, lambda or buffer.
  void validate() const;
};

/// One trace row per outer iteration; iteration 0 is the starting point.
struct TracePoint {
  int iter = 0;
  double cpu_ms = 0.0;
  double primal_J = 0.0;
  std::optional<double> smooth_J;
  std::optional<double> test_metric;
};

struct IterateView {
  int iter;
  std::span<const double> w;
  /// The objective the solver minimizes at w.
  double objective;
};

/// Invoked once per trace row with the CPU clock paused. It may overwrite
/// primal_J and set test_metric; the solver has already filled the rest.
using TraceMonitor = std::function<void(const IterateView&, TracePoint&)>;

/// Maps w to a value and gradient (or subgradient).
using DifferentiableFunction = std::function<RiskEval(std::span<const double>)>;

enum class SolverStatus { Converged, MaxIterations, LineSearchFailed };

std::string_view status_name(SolverStatus status);

struct SolverResult {
  Weights w;
  double objective = 0.0;
  int iterations = 0;
  SolverStatus status = SolverStatus::MaxIterations;
  std::vector<TracePoint> trace;
  /// Bundle only: lower bound on min J after each iteration.
  std::vector<double> lower_bounds;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Limited-memory BFGS on a smooth objective (value and gradient of the full
/// objective). Two-loop recursion over `lbfgs_buffer` pairs and a strong
/// Wolfe line search (c1 = 1e-4, c2 = 0.9) with cubic interpolation.
///
/// Stops when ||g|| <= tol * max(1, ||w||), when the objective decreased by
/// less than tol (relative) over the last 5 iterations, or at max_iters. A
/// line search that cannot make progress ends the run with the last accepted
/// iterate and status LineSearchFailed. Throws SolverError on a non-finite
/// objective at the starting point.
SolverResult lbfgs_minimize(const DifferentiableFunction& objective, Weights w0,
                            const SolverConfig& cfg, const TraceMonitor& monitor = {});

/// Accelerated gradient method for (lambda/2)||w||^2 + f(w), where f has an
/// L-Lipschitz gradient. Step 1/(L + lambda) with the constant momentum
/// (1 - sqrt(q)) / (1 + sqrt(q)), q = lambda / (L + lambda). Stops when the
/// full gradient norm is <= tol or at max_iters.
SolverResult agm_minimize(const DifferentiableFunction& smooth_part, double lipschitz,
                          Weights w0, const SolverConfig& cfg,
                          const TraceMonitor& monitor = {});

/// Linearization of the risk: risk(w) >= <slope, w> + offset everywhere.
struct BundleCut {
  std::vector<double> slope;
  double offset = 0.0;
};

struct DualQpSolution {
  std::vector<double> alpha;
  Weights w;
  /// min_w (lambda/2)||w||^2 + max_t (<a_t, w> + b_t), a lower bound on min J.
  double model_value = 0.0;
  double kkt_residual = 0.0;
};

/// Maximizes -(1/2 lambda)||sum_t alpha_t a_t||^2 + sum_t alpha_t b_t over
/// the simplex: a primal active-set method on the face KKT systems, then a
/// pairwise (SMO) polish until the KKT residual is <= 1e-10. Returns
/// w = -(1/lambda) sum_t alpha_t a_t.
DualQpSolution dual_qp_simplex(std::span<const BundleCut> cuts, double lambda);

/// Plain BMRM cutting-plane method on (lambda/2)||w||^2 + risk(w) where
/// `exact_risk` returns the risk and a subgradient. Stops once
/// min_s J(w_s) - (model lower bound) <= cfg.epsilon or at max_iters and
/// returns the best iterate seen. Trace rows describe that best iterate.
/// Throws SolverError on a non-finite cut.
SolverResult bundle_minimize(const DifferentiableFunction& exact_risk, const SolverConfig& cfg,
                             Weights w0, const TraceMonitor& monitor = {});

}  // namespace smoothperf
