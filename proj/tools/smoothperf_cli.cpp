// smoothperf: train, compare and evaluate linear PRBEP / ROCArea classifiers.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "smoothperf/harness.hpp"

namespace fs = std::filesystem;
using namespace smoothperf;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataFlags {
  std::string loss = "prbep";
  std::string train_path;
  std::string test_path;
  double lambda = 0.0;
  double epsilon = 1e-3;
  int max_iter = 1000;
  double tol = 1e-6;
  int lbfgs_buffer = 6;
};

void add_data_flags(CLI::App& cmd, DataFlags& f) {
  cmd.add_option("--loss", f.loss, "prbep or rocarea")
      ->check(CLI::IsMember({"prbep", "rocarea"}))
      ->capture_default_str();
  cmd.add_option("--train", f.train_path, "training set (SVMlight)")->required();
  cmd.add_option("--test", f.test_path, "test set (SVMlight)");
  cmd.add_option("--lambda", f.lambda, "regularization constant")
      ->required()
      ->check(CLI::PositiveNumber);
  cmd.add_option("--epsilon", f.epsilon, "target accuracy")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--max-iter", f.max_iter, "iteration cap")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd.add_option("--tol", f.tol, "stopping tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--lbfgs-buffer", f.lbfgs_buffer, "L-BFGS memory")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

TrainOptions to_options(const DataFlags& f) {
  TrainOptions o;
  o.loss = parse_loss(f.loss);
  o.lambda = f.lambda;
  o.epsilon = f.epsilon;
  o.max_iters = f.max_iter;
  o.tol = f.tol;
  o.lbfgs_buffer = f.lbfgs_buffer;
  return o;
}

std::optional<Dataset> load_test(const DataFlags& f) {
  if (f.test_path.empty()) return std::nullopt;
  return read_svmlight_file(f.test_path);
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string cur;
  for (char ch : text + ",") {
    if (ch == ',') {
      if (!cur.empty()) items.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  return items;
}

void print_row(const TrainResult& r) {
  const auto& last = r.trace.back();
  std::printf("status=%s iterations=%d primal_J=%.10g", std::string(status_name(r.status)).c_str(),
              r.iterations, last.primal_J);
  if (last.test_metric) std::printf(" test_metric=%.6f", *last.test_metric);
  std::printf(" cpu_ms=%.3f\n", last.cpu_ms);
}

int run_train(const DataFlags& f, const std::string& solver, const std::optional<double>& mu_mult,
              const std::string& trace_path, const std::string& model_path) {
  TrainOptions o = to_options(f);
  o.solver = parse_solver(solver);
  if (mu_mult) {
    if (o.solver == SolverKind::Bundle) {
      std::cerr << "warning: --mu-mult has no effect with the bundle solver\n";
    } else {
      o.mu_multiplier = *mu_mult;
    }
  }
  const Dataset train_set = read_svmlight_file(f.train_path);
  const auto test = load_test(f);
  const TrainResult r = train(train_set, test ? &*test : nullptr, o);
  if (r.smoothing) {
    std::fprintf(stderr, "mu=%.6g D=%.6g L=%.6g\n", r.smoothing->mu, r.smoothing->prox_diameter,
                 r.smoothing->lipschitz());
  }
  if (!trace_path.empty()) {
    auto out = open_out(trace_path);
    write_trace_csv(out, r.trace);
  }
  if (!model_path.empty()) {
    auto out = open_out(model_path);
    write_model(out, r.w);
  }
  print_row(r);
  return 0;
}

int run_compare(const DataFlags& f, const std::string& solvers, const std::string& mu_mults,
                const std::string& out_dir, std::string summary_path, int jobs) {
  CompareOptions c;
  c.base = to_options(f);
  try {
    for (const auto& s : split_list(solvers)) c.solvers.push_back(parse_solver(s));
    c.mu_multipliers.clear();
    for (const auto& m : split_list(mu_mults)) {
      std::size_t used = 0;
      const double v = std::stod(m, &used);
      if (used != m.size() || !(v >= 1.0)) throw std::invalid_argument("bad mu multiplier '" + m + "'");
      c.mu_multipliers.push_back(v);
    }
  } catch (const std::logic_error& e) {
    throw UsageError(e.what());
  }
  c.jobs = jobs;
  if (c.solvers.empty()) throw UsageError("--solvers: empty solver list");

  const Dataset train_set = read_svmlight_file(f.train_path);
  const auto test = load_test(f);
  const CompareResult r = compare(train_set, test ? &*test : nullptr, c);

  fs::create_directories(out_dir);
  for (const auto& run : r.runs) {
    auto out = open_out(fs::path(out_dir) / (run.configuration + ".csv"));
    write_trace_csv(out, run.result.trace);
  }
  if (summary_path.empty()) summary_path = (fs::path(out_dir) / "summary.csv").string();
  {
    auto out = open_out(summary_path);
    write_summary_csv(out, r.summary);
  }
  write_summary_csv(std::cout, r.summary);
  return 0;
}

int run_eval(const std::string& loss, const std::string& model_path, const std::string& test_path) {
  std::ifstream in(model_path);
  if (!in) throw std::runtime_error("cannot read " + model_path);
  const Weights w = read_model(in);
  const Dataset test = read_svmlight_file(test_path);
  const Loss l = parse_loss(loss);
  const EvalReport report = evaluate_model(l, w, test);
  std::printf("%s=%.17g\nexact_risk=%.17g\n", std::string(loss_name(l)).c_str(), report.metric,
              report.exact_risk);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Smoothed optimization of PRBEP and ROCArea for linear classifiers"};
  app.require_subcommand(1);

  DataFlags train_flags;
  std::string solver = "lbfgs", trace_path, model_path;
  double mu_mult = 1.0;
  auto* train_cmd = app.add_subcommand("train", "train one model and write its trace");
  add_data_flags(*train_cmd, train_flags);
  train_cmd->add_option("--solver", solver, "lbfgs, agm or bundle")
      ->check(CLI::IsMember({"lbfgs", "agm", "bundle"}))
      ->capture_default_str();
  auto* mu_opt = train_cmd->add_option("--mu-mult", mu_mult, "multiple of eps/D used as mu")
                     ->check(CLI::Range(1.0, 1e12));
  train_cmd->add_option("--trace", trace_path, "trace CSV output");
  train_cmd->add_option("--model", model_path, "model output");

  DataFlags cmp_flags;
  std::string solvers = "lbfgs,bundle", mu_mults = "1,100,1000", out_dir = ".", summary_path;
  int jobs = 1;
  auto* cmp_cmd = app.add_subcommand("compare", "run several solver configurations");
  add_data_flags(*cmp_cmd, cmp_flags);
  cmp_cmd->add_option("--solvers", solvers, "comma list of solvers")->capture_default_str();
  cmp_cmd->add_option("--mu-mults", mu_mults, "comma list of mu multipliers")
      ->capture_default_str();
  cmp_cmd->add_option("--out-dir", out_dir, "directory for per-configuration traces")
      ->capture_default_str();
  cmp_cmd->add_option("--summary", summary_path, "summary CSV (default OUT_DIR/summary.csv)");
  cmp_cmd->add_option("--jobs", jobs, "configurations run at once")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::string eval_loss = "prbep", eval_model, eval_test;
  auto* eval_cmd = app.add_subcommand("eval", "score a saved model on a data set");
  eval_cmd->add_option("--loss", eval_loss, "prbep or rocarea")
      ->check(CLI::IsMember({"prbep", "rocarea"}))
      ->capture_default_str();
  eval_cmd->add_option("--model", eval_model, "model file")->required();
  eval_cmd->add_option("--test", eval_test, "data set (SVMlight)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (train_cmd->parsed()) {
      std::optional<double> mult;
      if (mu_opt->count() > 0) mult = mu_mult;
      return run_train(train_flags, solver, mult, trace_path, model_path);
    }
    if (cmp_cmd->parsed()) {
      return run_compare(cmp_flags, solvers, mu_mults, out_dir, summary_path, jobs);
    }
    return run_eval(eval_loss, eval_model, eval_test);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
