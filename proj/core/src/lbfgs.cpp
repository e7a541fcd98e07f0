#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>

#include "smoothperf/cpu_timer.hpp"
#include "smoothperf/solvers.hpp"
#include "vec_ops.hpp"

namespace smoothperf {

void SolverConfig::validate() const {
  if (max_iters < 0) throw std::invalid_argument("max_iters must be non-negative");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (lbfgs_buffer < 1) throw std::invalid_argument("lbfgs buffer must be at least 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
}

std::string_view status_name(SolverStatus status) {
  switch (status) {
    case SolverStatus::Converged: return "converged";
    case SolverStatus::MaxIterations: return "max-iterations";
    case SolverStatus::LineSearchFailed: return "line-search-failed";
  }
  return "unknown";
}

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kCurvature = 0.9;
constexpr int kMaxLineSearchEvals = 40;
constexpr int kDecreaseWindow = 5;

struct LinePoint {
  double step = 0.0;
  double value = 0.0;
  double slope = 0.0;  // directional derivative
  Weights w;
  std::vector<double> gradient;
};

class LineSearch {
 public:
  LineSearch(const DifferentiableFunction& fn, const Weights& w, double f0,
             std::span<const double> dir, double slope0)
      : fn_(fn), w_(w), f0_(f0), dir_(dir), slope0_(slope0) {}

  /// Strong Wolfe point, or the best sufficient-decrease point found when the
  /// curvature condition cannot be met; nullopt if no decrease was possible.
  std::optional<LinePoint> run(double initial_step) {
    LinePoint prev{0.0, f0_, slope0_, {}, {}};
    double step = initial_step;
    for (int i = 0; i < kMaxLineSearchEvals && evals_ < kMaxLineSearchEvals; ++i) {
      LinePoint cur = evaluate(step);
      if (!sufficient_decrease(cur) || (i > 0 && cur.value >= prev.value)) {
        return zoom(std::move(prev), std::move(cur));
      }
      if (std::abs(cur.slope) <= -kCurvature * slope0_) return cur;
      if (cur.slope >= 0.0) return zoom(std::move(cur), std::move(prev));
      remember(cur);
      prev = std::move(cur);
      step *= 2.0;
    }
    return std::move(best_);
  }

 private:
  LinePoint evaluate(double step) {
    ++evals_;
    LinePoint p;
    p.step = step;
    p.w = w_;
    detail::axpy(step, dir_, p.w);
    RiskEval e = fn_(p.w);
    p.value = e.value;
    p.gradient = std::move(e.gradient);
    if (!std::isfinite(p.value) || !detail::all_finite(p.gradient)) {
      p.value = std::numeric_limits<double>::infinity();
      p.slope = std::numeric_limits<double>::quiet_NaN();
    } else {
      p.slope = detail::dot(p.gradient, dir_);
    }
    return p;
  }

  bool sufficient_decrease(const LinePoint& p) const {
    return p.value <= f0_ + kArmijo * p.step * slope0_ && p.value < f0_;
  }

  void remember(const LinePoint& p) {
    if (sufficient_decrease(p) && (!best_ || p.value < best_->value)) best_ = p;
  }

  static double cubic_step(const LinePoint& a, const LinePoint& b) {
    const double d1 = a.slope + b.slope - 3.0 * (a.value - b.value) / (a.step - b.step);
    const double disc = d1 * d1 - a.slope * b.slope;
    if (!(disc >= 0.0) || !std::isfinite(b.value)) return 0.5 * (a.step + b.step);
    const double d2 = std::copysign(std::sqrt(disc), b.step - a.step);
    const double denom = b.slope - a.slope + 2.0 * d2;
    if (denom == 0.0) return 0.5 * (a.step + b.step);
    return b.step - (b.step - a.step) * (b.slope + d2 - d1) / denom;
  }

  // Invariant: lo satisfies sufficient decrease and has the lowest value
  // seen so far; the bracket [lo, hi] contains a strong Wolfe point.
  std::optional<LinePoint> zoom(LinePoint lo, LinePoint hi) {
    if (lo.step > 0.0) remember(lo);
    while (evals_ < kMaxLineSearchEvals) {
      const double left = std::min(lo.step, hi.step);
      const double right = std::max(lo.step, hi.step);
      const double width = right - left;
      if (width <= 1e-16 * std::max(1.0, right)) break;
      double trial = cubic_step(lo, hi);
      if (!(trial > left + 0.1 * width && trial < right - 0.1 * width)) {
        trial = 0.5 * (left + right);
      }
      LinePoint cur = evaluate(trial);
      if (!sufficient_decrease(cur) || cur.value >= lo.value) {
        hi = std::move(cur);
        continue;
      }
      if (std::abs(cur.slope) <= -kCurvature * slope0_) return cur;
      remember(cur);
      if (cur.slope * (hi.step - lo.step) >= 0.0) hi = std::move(lo);
      lo = std::move(cur);
    }
    return std::move(best_);
  }

  const DifferentiableFunction& fn_;
  const Weights& w_;
  double f0_;
  std::span<const double> dir_;
  double slope0_;
  int evals_ = 0;
  std::optional<LinePoint> best_;
};

struct CorrectionPair {
  std::vector<double> s, y;
  double rho;
};

// H * g via the two-loop recursion, scaled by s'y / y'y of the newest pair.
std::vector<double> two_loop(const std::deque<CorrectionPair>& history,
                             std::span<const double> g) {
  std::vector<double> q(g.begin(), g.end());
  std::vector<double> alpha(history.size());
  for (std::size_t k = history.size(); k-- > 0;) {
    alpha[k] = history[k].rho * detail::dot(history[k].s, q);
    detail::axpy(-alpha[k], history[k].y, q);
  }
  if (!history.empty()) {
    const auto& last = history.back();
    const double gamma = 1.0 / (last.rho * detail::dot(last.y, last.y));
    for (double& v : q) v *= gamma;
  }
  for (std::size_t k = 0; k < history.size(); ++k) {
    const double beta = history[k].rho * detail::dot(history[k].y, q);
    detail::axpy(alpha[k] - beta, history[k].s, q);
  }
  return q;
}

}  // namespace

SolverResult lbfgs_minimize(const DifferentiableFunction& objective, Weights w0,
                            const SolverConfig& cfg, const TraceMonitor& monitor) {
  cfg.validate();
  CpuStopwatch clock;
  SolverResult result;
  result.w = std::move(w0);

  RiskEval cur = objective(result.w);
  if (!std::isfinite(cur.value) || !detail::all_finite(cur.gradient)) {
    throw SolverError("lbfgs: objective is not finite at the starting point");
  }

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

  record(0, cur.value);
  std::deque<CorrectionPair> history;
  std::vector<double> past_values{cur.value};
  result.status = SolverStatus::MaxIterations;

  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    const double gnorm = detail::norm(cur.gradient);
    if (gnorm <= cfg.tol * std::max(1.0, detail::norm(result.w))) {
      result.status = SolverStatus::Converged;
      break;
    }

    std::vector<double> dir = two_loop(history, cur.gradient);
    for (double& v : dir) v = -v;
    double slope0 = detail::dot(cur.gradient, dir);
    if (!(slope0 < 0.0)) {
      history.clear();
      dir.assign(cur.gradient.begin(), cur.gradient.end());
      for (double& v : dir) v = -v;
      slope0 = -gnorm * gnorm;
    }
    // Without curvature pairs the direction is -g; start at unit length.
    const double initial_step = history.empty() ? 1.0 / detail::norm(dir) : 1.0;

    LineSearch search(objective, result.w, cur.value, dir, slope0);
    auto next = search.run(initial_step);
    if (!next) {
      result.status = SolverStatus::LineSearchFailed;
      break;
    }

    CorrectionPair pair;
    pair.s.resize(result.w.size());
    pair.y.resize(result.w.size());
    for (std::size_t k = 0; k < result.w.size(); ++k) {
      pair.s[k] = next->w[k] - result.w[k];
      pair.y[k] = next->gradient[k] - cur.gradient[k];
    }
    const double sy = detail::dot(pair.s, pair.y);
    if (sy > 1e-16 * detail::dot(pair.y, pair.y)) {
      pair.rho = 1.0 / sy;
      history.push_back(std::move(pair));
      if (history.size() > static_cast<std::size_t>(cfg.lbfgs_buffer)) history.pop_front();
    }

    result.w = std::move(next->w);
    cur.value = next->value;
    cur.gradient = std::move(next->gradient);
    result.iterations = iter;
    record(iter, cur.value);

    past_values.push_back(cur.value);
    if (past_values.size() > kDecreaseWindow) {
      const double older = past_values[past_values.size() - 1 - kDecreaseWindow];
      if ((older - cur.value) / std::max(1.0, std::abs(cur.value)) < cfg.tol) {
        result.status = SolverStatus::Converged;
        break;
      }
    }
  }
  result.objective = cur.value;
  return result;
}

}  // namespace smoothperf
