#include "smoothperf/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <thread>

#include "smoothperf/metrics.hpp"
#include "smoothperf/risk.hpp"

namespace smoothperf {

SolverKind parse_solver(std::string_view name) {
  if (name == "lbfgs") return SolverKind::Lbfgs;
  if (name == "agm") return SolverKind::Agm;
  if (name == "bundle") return SolverKind::Bundle;
  throw std::invalid_argument("unknown solver '" + std::string(name) + "'");
}

std::string_view solver_name(SolverKind kind) {
  switch (kind) {
    case SolverKind::Lbfgs: return "lbfgs";
    case SolverKind::Agm: return "agm";
    case SolverKind::Bundle: return "bundle";
  }
  return "unknown";
}

std::vector<double> scores_padded(std::span<const double> w, const Dataset& d) {
  Weights padded(d.num_features(), 0.0);
  std::copy_n(w.begin(), std::min(w.size(), padded.size()), padded.begin());
  return scores(padded, d);
}

EvalReport evaluate_model(Loss loss, std::span<const double> w, const Dataset& d) {
  Weights padded(d.num_features(), 0.0);
  std::copy_n(w.begin(), std::min(w.size(), padded.size()), padded.begin());
  EvalReport report;
  report.metric = performance_metric(loss, scores(padded, d), d.labels());
  report.exact_risk = exact_risk(loss, padded, d).value;
  return report;
}

TrainResult train(const Dataset& train_set, const Dataset* test, const TrainOptions& opts) {
  train_set.require_both_classes();
  SolverConfig cfg;
  cfg.max_iters = opts.max_iters;
  cfg.tol = opts.tol;
  cfg.lambda = opts.lambda;
  cfg.lbfgs_buffer = opts.lbfgs_buffer;
  cfg.epsilon = opts.epsilon;
  cfg.validate();

  const Loss loss = opts.loss;
  TraceMonitor monitor = [&](const IterateView& it, TracePoint& tp) {
    tp.primal_J = primal_objective(loss, opts.lambda, it.w, train_set);
    if (test != nullptr) {
      tp.test_metric = performance_metric(loss, scores_padded(it.w, *test), test->labels());
    }
  };

  TrainResult out;
  Weights w0(train_set.num_features(), 0.0);
  SolverResult solved;
  if (opts.solver == SolverKind::Bundle) {
    auto risk = [&](std::span<const double> w) { return exact_risk(loss, w, train_set); };
    solved = bundle_minimize(risk, cfg, std::move(w0), monitor);
  } else {
    const auto params = SmoothingParams::make(loss, train_set, opts.epsilon, opts.mu_multiplier);
    out.smoothing = params;
    auto risk = [&, mu = params.mu](std::span<const double> w) {
      return smoothed_risk(loss, w, train_set, mu);
    };
    if (opts.solver == SolverKind::Lbfgs) {
      auto objective = [&](std::span<const double> w) -> RiskEval {
        auto reg = regularized_objective(opts.lambda, w, risk(w));
        return {reg.value, std::move(reg.gradient)};
      };
      solved = lbfgs_minimize(objective, std::move(w0), cfg, monitor);
    } else {
      solved = agm_minimize(risk, params.lipschitz(), std::move(w0), cfg, monitor);
    }
  }
  out.w = std::move(solved.w);
  out.trace = std::move(solved.trace);
  out.status = solved.status;
  out.iterations = solved.iterations;
  return out;
}

namespace {

std::string format_multiplier(double mult) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", mult);
  return buf;
}

}  // namespace

CompareResult compare(const Dataset& train_set, const Dataset* test, const CompareOptions& opts) {
  if (opts.solvers.empty()) throw std::invalid_argument("compare: empty solver list");
  if (opts.jobs < 1) throw std::invalid_argument("compare: jobs must be at least 1");

  CompareResult out;
  for (SolverKind kind : opts.solvers) {
    if (kind == SolverKind::Bundle) {
      out.runs.push_back({"bundle", kind, 1.0, {}});
      continue;
    }
    if (opts.mu_multipliers.empty()) throw std::invalid_argument("compare: empty mu multiplier list");
    for (double mult : opts.mu_multipliers) {
      out.runs.push_back({std::string(solver_name(kind)) + "_mu" + format_multiplier(mult), kind,
                          mult, {}});
    }
  }

  auto run_one = [&](CompareRun& run) {
    TrainOptions o = opts.base;
    o.solver = run.solver;
    o.mu_multiplier = run.mu_multiplier;
    run.result = train(train_set, test, o);
  };

  if (opts.jobs == 1) {
    for (auto& run : out.runs) run_one(run);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(out.runs.size());
    std::vector<std::thread> workers;
    const auto n_workers = std::min<std::size_t>(static_cast<std::size_t>(opts.jobs), out.runs.size());
    for (std::size_t t = 0; t < n_workers; ++t) {
      workers.emplace_back([&] {
        for (std::size_t k = next++; k < out.runs.size(); k = next++) {
          try {
            run_one(out.runs[k]);
          } catch (...) {
            errors[k] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : workers) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  out.best_primal_J = std::numeric_limits<double>::infinity();
  for (const auto& run : out.runs) {
    for (const auto& tp : run.result.trace) out.best_primal_J = std::min(out.best_primal_J, tp.primal_J);
  }
  const double target = out.best_primal_J + opts.base.epsilon;
  for (const auto& run : out.runs) {
    CompareSummaryRow row;
    row.configuration = run.configuration;
    for (const auto& tp : run.result.trace) {
      if (tp.primal_J <= target) {
        row.cpu_ms_to_target = tp.cpu_ms;
        break;
      }
    }
    row.final_primal_J = run.result.trace.back().primal_J;
    row.final_test_metric = run.result.trace.back().test_metric;
    out.summary.push_back(row);
  }
  return out;
}

namespace {

void put_number(std::ostream& out, double v, const char* fmt = "%.17g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  out << buf;
}

void put_optional(std::ostream& out, const std::optional<double>& v) {
  if (v) put_number(out, *v);
}

}  // namespace

void write_trace_csv(std::ostream& out, std::span<const TracePoint> trace) {
  out << "iter,cpu_ms,primal_J,smooth_J,test_metric\n";
  for (const auto& tp : trace) {
    out << tp.iter << ',';
    put_number(out, tp.cpu_ms, "%.3f");
    out << ',';
    put_number(out, tp.primal_J);
    out << ',';
    put_optional(out, tp.smooth_J);
    out << ',';
    put_optional(out, tp.test_metric);
    out << '\n';
  }
}

void write_summary_csv(std::ostream& out, std::span<const CompareSummaryRow> rows) {
  out << "configuration,cpu_ms_to_target,final_primal_J,final_test_metric\n";
  for (const auto& r : rows) {
    out << r.configuration << ',';
    if (r.cpu_ms_to_target) put_number(out, *r.cpu_ms_to_target, "%.3f");
    out << ',';
    put_number(out, r.final_primal_J);
    out << ',';
    put_optional(out, r.final_test_metric);
    out << '\n';
  }
}

void write_model(std::ostream& out, std::span<const double> w) {
  out << w.size() << '\n';
  for (double v : w) {
    put_number(out, v);
    out << '\n';
  }
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

Weights read_model(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ModelFormatError("model file is empty");
  auto head = trim(line);
  std::size_t p = 0;
  auto [pend, pec] = std::from_chars(head.data(), head.data() + head.size(), p);
  if (pec != std::errc() || pend != head.data() + head.size()) {
    throw ModelFormatError("model file: first line must be the dimension");
  }
  Weights w;
  w.reserve(p);
  std::size_t line_no = 1;
  while (w.size() < p && std::getline(in, line)) {
    ++line_no;
    auto tok = trim(line);
    double v = 0.0;
    auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || end != tok.data() + tok.size() || !std::isfinite(v)) {
      throw ModelFormatError("model file line " + std::to_string(line_no) + ": not a finite number");
    }
    w.push_back(v);
  }
  if (w.size() != p) throw ModelFormatError("model file: fewer values than the stated dimension");
  return w;
}

}  // namespace smoothperf
