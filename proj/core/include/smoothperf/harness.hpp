#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smoothperf/smoothing.hpp"
#include "smoothperf/solvers.hpp"
#include "smoothperf/sparse_data.hpp"

namespace smoothperf {

enum class SolverKind { Lbfgs, Agm, Bundle };

SolverKind parse_solver(std::string_view name);
std::string_view solver_name(SolverKind kind);

struct TrainOptions {
  Loss loss = Loss::Prbep;
  SolverKind solver = SolverKind::Lbfgs;
  double lambda = 1.0;
  double epsilon = 1e-3;
  double mu_multiplier = 1.0;
  int max_iters = 1000;
  double tol = 1e-6;
  int lbfgs_buffer = 6;
};

struct TrainResult {
  Weights w;
  std::vector<TracePoint> trace;
  SolverStatus status = SolverStatus::MaxIterations;
  int iterations = 0;
  /// Set for the smoothed solvers.
  std::optional<SmoothingParams> smoothing;
};

/// Trains from w = 0. Every trace row carries the exact regularized
/// objective on `train` as primal_J, and the loss-matched metric on `test`
/// when given. Smoothed solvers use mu = mu_multiplier * epsilon / D.
TrainResult train(const Dataset& train, const Dataset* test, const TrainOptions& opts);

/// Scores with w zero-padded (or truncated) to the dataset's feature count,
/// so features the model never saw contribute 0.
std::vector<double> scores_padded(std::span<const double> w, const Dataset& d);

struct EvalReport {
  double metric = 0.0;
  double exact_risk = 0.0;
};

EvalReport evaluate_model(Loss loss, std::span<const double> w, const Dataset& d);

struct CompareOptions {
  TrainOptions base;
  std::vector<SolverKind> solvers;
  std::vector<double> mu_multipliers{1.0};
  int jobs = 1;
};

struct CompareRun {
  std::string configuration;
  SolverKind solver;
  double mu_multiplier;
  TrainResult result;
};

struct CompareSummaryRow {
  std::string configuration;
  /// CPU time of the first trace row with primal_J <= J* + epsilon.
  std::optional<double> cpu_ms_to_target;
  double final_primal_J = 0.0;
  std::optional<double> final_test_metric;
};

struct CompareResult {
  std::vector<CompareRun> runs;
  std::vector<CompareSummaryRow> summary;
  /// Best primal_J over every trace row of every run.
  double best_primal_J = 0.0;
};

/// Runs each smoothed solver once per mu multiplier and the bundle method
/// once. Throws std::invalid_argument on an empty solver list.
CompareResult compare(const Dataset& train, const Dataset* test, const CompareOptions& opts);

void write_trace_csv(std::ostream& out, std::span<const TracePoint> trace);
void write_summary_csv(std::ostream& out, std::span<const CompareSummaryRow> rows);

/// Plain text: the dimension p on the first line, then p values with 17
/// significant digits, one per line.
void write_model(std::ostream& out, std::span<const double> w);
Weights read_model(std::istream& in);

class ModelFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace smoothperf
