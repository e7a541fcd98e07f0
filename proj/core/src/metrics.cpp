#include "smoothperf/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace smoothperf {

namespace {

void check_sizes(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw std::invalid_argument("metric: scores and labels differ in length");
  }
}

}  // namespace

double prbep_metric(std::span<const double> scores, std::span<const int> labels) {
  check_sizes(scores, labels);
  const auto n_plus = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  if (n_plus == 0) throw std::invalid_argument("prbep_metric: no positive examples");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::size_t hits = 0;
  for (std::size_t k = 0; k < n_plus; ++k) hits += labels[order[k]] > 0 ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(n_plus);
}

double rocarea_metric(std::span<const double> scores, std::span<const int> labels) {
  check_sizes(scores, labels);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double correct = 0.0;
  double neg_below = 0.0, n_pos = 0.0, n_neg = 0.0;
  for (std::size_t k = 0; k < order.size();) {
    std::size_t end = k;
    double pos_here = 0.0, neg_here = 0.0;
    while (end < order.size() && scores[order[end]] == scores[order[k]]) {
      (labels[order[end]] > 0 ? pos_here : neg_here) += 1.0;
      ++end;
    }
    correct += pos_here * (neg_below + 0.5 * neg_here);
    neg_below += neg_here;
    n_pos += pos_here;
    n_neg += neg_here;
    k = end;
  }
  if (n_pos == 0.0 || n_neg == 0.0) {
    throw std::invalid_argument("rocarea_metric: both classes must be present");
  }
  return correct / (n_pos * n_neg);
}

double performance_metric(Loss loss, std::span<const double> scores, std::span<const int> labels) {
  return loss == Loss::Prbep ? prbep_metric(scores, labels) : rocarea_metric(scores, labels);
}

}  // namespace smoothperf
