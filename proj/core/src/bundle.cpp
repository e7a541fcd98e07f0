#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "smoothperf/cpu_timer.hpp"
#include "smoothperf/solvers.hpp"
#include "vec_ops.hpp"

namespace smoothperf {

namespace {

constexpr double kKktTolerance = 1e-10;
constexpr long kMaxSmoSteps = 200'000;

// Cutting-plane model with the Gram matrix of its slopes and a dual point
// that is kept between solves. The dual QP is minimized in the form
//   f(alpha) = (1/2) alpha' H alpha - b' alpha,  H = G / lambda,
// over the simplex, first by a primal active-set method and then by a short
// SMO polish that certifies the KKT residual.
class CutModel {
 public:
  explicit CutModel(double lambda) : lambda_(lambda) {}

  std::size_t size() const { return cuts_.size(); }

  void add(BundleCut cut, double initial_alpha) {
    std::vector<double> row(cuts_.size() + 1);
    for (std::size_t t = 0; t < cuts_.size(); ++t) {
      row[t] = detail::dot(cuts_[t].slope, cut.slope);
      gram_[t].push_back(row[t]);
    }
    row.back() = detail::dot(cut.slope, cut.slope);
    gram_.push_back(std::move(row));
    cuts_.push_back(std::move(cut));
    alpha_.push_back(initial_alpha);
  }

  void set_alpha(std::vector<double> alpha) { alpha_ = std::move(alpha); }

  DualQpSolution solve() {
    active_set();
    const double residual = smo_polish();

    DualQpSolution sol;
    sol.alpha = alpha_;
    sol.kkt_residual = std::max(residual, 0.0);
    std::vector<double> combo(cuts_.front().slope.size(), 0.0);
    double linear = 0.0;
    for (std::size_t t = 0; t < cuts_.size(); ++t) {
      if (alpha_[t] == 0.0) continue;
      detail::axpy(alpha_[t], cuts_[t].slope, combo);
      linear += alpha_[t] * cuts_[t].offset;
    }
    sol.model_value = linear - detail::dot(combo, combo) / (2.0 * lambda_);
    sol.w.resize(combo.size());
    for (std::size_t k = 0; k < combo.size(); ++k) sol.w[k] = -combo[k] / lambda_;
    return sol;
  }

 private:
  double hess(std::size_t i, std::size_t j) const { return gram_[i][j] / lambda_; }

  // Ascent direction of the dual: b - H alpha.
  std::vector<double> dual_gradient() const {
    const std::size_t n = cuts_.size();
    std::vector<double> grad(n);
    for (std::size_t t = 0; t < n; ++t) {
      double qa = 0.0;
      for (std::size_t s = 0; s < n; ++s) {
        if (alpha_[s] != 0.0) qa += gram_[t][s] * alpha_[s];
      }
      grad[t] = cuts_[t].offset - qa / lambda_;
    }
    return grad;
  }

  void active_set() {
    const std::size_t n = cuts_.size();
    std::vector<std::size_t> free;
    for (std::size_t t = 0; t < n; ++t) {
      if (alpha_[t] > 0.0) free.push_back(t);
    }
    const std::size_t max_rounds = 20 * n + 100;
    for (std::size_t round = 0; round < max_rounds; ++round) {
      const std::vector<double> grad = dual_gradient();
      const auto m = static_cast<Eigen::Index>(free.size());

      // Face problem: H_FF d + nu 1 = grad_F, 1'd = 0.
      Eigen::MatrixXd kkt(m + 1, m + 1);
      Eigen::VectorXd rhs(m + 1);
      for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) kkt(i, j) = hess(free[i], free[j]);
        kkt(i, m) = kkt(m, i) = 1.0;
        rhs(i) = grad[free[i]];
      }
      kkt(m, m) = 0.0;
      rhs(m) = 0.0;
      const Eigen::VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
      const Eigen::VectorXd resid = rhs - kkt * sol;

      // An inconsistent system leaves a residual in the null space of the
      // face Hessian that still increases the dual: follow it to the boundary.
      const bool ray = resid.norm() > 1e-9 * std::max(1.0, rhs.norm());
      const Eigen::VectorXd dir = ray ? resid.head(m) : sol.head(m);

      double step = ray ? std::numeric_limits<double>::infinity() : 1.0;
      std::size_t blocking = free.size();
      for (std::size_t i = 0; i < free.size(); ++i) {
        const double d = dir(static_cast<Eigen::Index>(i));
        if (d < 0.0 && -alpha_[free[i]] / d < step) {
          step = -alpha_[free[i]] / d;
          blocking = i;
        }
      }
      if (!std::isfinite(step)) return;  // no descent ray exists; leave it to SMO

      for (std::size_t i = 0; i < free.size(); ++i) {
        alpha_[free[i]] = std::max(0.0, alpha_[free[i]] + step * dir(static_cast<Eigen::Index>(i)));
      }
      if (blocking < free.size()) {
        alpha_[free[blocking]] = 0.0;
        free.erase(free.begin() + static_cast<std::ptrdiff_t>(blocking));
        normalize();
        continue;
      }
      normalize();

      // Stationary on the face; release the most violated bound, if any.
      const std::vector<double> g = dual_gradient();
      double level = 0.0;
      for (std::size_t t : free) level += g[t];
      level /= static_cast<double>(free.size());
      std::size_t enter = n;
      double worst = kKktTolerance / 2.0;
      for (std::size_t t = 0; t < n; ++t) {
        if (alpha_[t] > 0.0) continue;
        if (g[t] - level > worst) {
          worst = g[t] - level;
          enter = t;
        }
      }
      if (enter == n) return;
      free.clear();
      for (std::size_t t = 0; t < n; ++t) {
        if (alpha_[t] > 0.0 || t == enter) free.push_back(t);
      }
    }
  }

  void normalize() {
    double sum = 0.0;
    for (double a : alpha_) sum += a;
    for (double& a : alpha_) a /= sum;
  }

  // Pairwise coordinate ascent from the current point; returns the final
  // KKT residual max_t grad_t - min_{alpha_s > 0} grad_s.
  double smo_polish() {
    const std::size_t n = cuts_.size();
    std::vector<double> grad = dual_gradient();
    double residual = 0.0;
    for (long step = 0; step < kMaxSmoSteps; ++step) {
      std::size_t up = 0, down = n;
      for (std::size_t t = 0; t < n; ++t) {
        if (grad[t] > grad[up]) up = t;
        if (alpha_[t] > 0.0 && (down == n || grad[t] < grad[down])) down = t;
      }
      residual = grad[up] - grad[down];
      if (residual <= kKktTolerance || up == down) break;

      const double curvature = hess(up, up) + hess(down, down) - 2.0 * hess(up, down);
      double delta = curvature > 0.0 ? residual / curvature : alpha_[down];
      delta = std::min(delta, alpha_[down]);
      if (delta <= 0.0) break;
      alpha_[up] += delta;
      alpha_[down] = delta == alpha_[down] ? 0.0 : alpha_[down] - delta;
      for (std::size_t t = 0; t < n; ++t) grad[t] -= delta * (hess(t, up) - hess(t, down));
    }
    return residual;
  }

 private:
  double lambda_;
  std::vector<BundleCut> cuts_;
  std::vector<std::vector<double>> gram_;
  std::vector<double> alpha_;
};

}  // namespace

DualQpSolution dual_qp_simplex(std::span<const BundleCut> cuts, double lambda) {
  if (cuts.empty()) throw std::invalid_argument("dual_qp_simplex: no cuts");
  if (!(lambda > 0.0)) throw std::invalid_argument("dual_qp_simplex: lambda must be positive");
  CutModel model(lambda);
  std::size_t best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < cuts.size(); ++t) {
    model.add(cuts[t], 0.0);
    const double single = cuts[t].offset - detail::dot(cuts[t].slope, cuts[t].slope) / (2.0 * lambda);
    if (single > best_value) {
      best_value = single;
      best = t;
    }
  }
  std::vector<double> alpha(cuts.size(), 0.0);
  alpha[best] = 1.0;
  model.set_alpha(std::move(alpha));
  return model.solve();
}

SolverResult bundle_minimize(const DifferentiableFunction& exact_risk, const SolverConfig& cfg,
                             Weights w0, const TraceMonitor& monitor) {
  cfg.validate();
  CpuStopwatch clock;
  CutModel model(cfg.lambda);

  SolverResult result;
  Weights w = std::move(w0);
  double best_j = std::numeric_limits<double>::infinity();
  double lower = -std::numeric_limits<double>::infinity();
  BundleCut pending;

  // Evaluates the risk at w, keeps the best iterate and stages the new cut.
  auto evaluate = [&](const Weights& at) {
    RiskEval r = exact_risk(at);
    if (!std::isfinite(r.value) || !detail::all_finite(r.gradient)) {
      throw SolverError("bundle: non-finite risk or subgradient");
    }
    const double j = regularized_objective(cfg.lambda, at, r).value;
    if (j < best_j) {
      best_j = j;
      result.w = at;
    }
    pending.offset = r.value - detail::dot(r.gradient, at);
    pending.slope = std::move(r.gradient);
  };

  auto record = [&](int iter) {
    TracePoint tp;
    tp.iter = iter;
    tp.primal_J = best_j;
    if (monitor) {
      PauseGuard pause(clock);
      monitor(IterateView{iter, result.w, best_j}, tp);
    }
    tp.cpu_ms = clock.elapsed_ms();
    result.trace.push_back(tp);
  };

  evaluate(w);
  record(0);
  result.status = SolverStatus::MaxIterations;

  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    model.add(std::move(pending), model.size() == 0 ? 1.0 : 0.0);
    DualQpSolution sol = model.solve();
    lower = std::max(lower, sol.model_value);
    result.lower_bounds.push_back(lower);
    if (best_j - lower <= cfg.epsilon) {
      result.status = SolverStatus::Converged;
      break;
    }
    w = std::move(sol.w);
    evaluate(w);
    result.iterations = iter;
    record(iter);
    if (best_j - lower <= cfg.epsilon) {
      result.status = SolverStatus::Converged;
      break;
    }
  }
  result.objective = best_j;
  return result;
}

}  // namespace smoothperf
