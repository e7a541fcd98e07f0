#include "smoothperf/prbep_risk.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace smoothperf {

std::vector<double> prbep_linear_coeffs(std::span<const double> w, const Dataset& d) {
  d.require_both_classes();
  const double n = static_cast<double>(d.size());
  const double inv_nplus = 1.0 / static_cast<double>(d.n_plus());
  std::vector<double> c(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double y = d.label(i);
    c[i] = -(2.0 / n) * y * dot(w, d.row(i)) + (y > 0 ? inv_nplus : 0.0);
  }
  return c;
}

namespace {

double clip01(double v) { return std::clamp(v, 0.0, 1.0); }

// Breakpoint kinds while sweeping nu upwards. A positive coordinate starts
// at 1, becomes free at c - mu and hits 0 at c. A negative coordinate starts
// at 0, becomes free at -c and saturates at mu - c.
enum class Event : std::uint8_t { PosRelease, PosFloor, NegRelease, NegSaturate };

struct Breakpoint {
  double nu;
  std::uint32_t index;
  Event kind;
};

// Sums over the free (unclipped) coordinates and counts of saturated ones.
struct SweepState {
  double full_pos = 0.0, full_neg = 0.0;
  double free_pos = 0.0, free_neg = 0.0;
  double coef_pos = 0.0, coef_neg = 0.0;

  double h(double nu, double mu) const {
    return full_pos - full_neg + ((coef_pos - free_pos * nu) - (coef_neg + free_neg * nu)) / mu;
  }
  double free_count() const { return free_pos + free_neg; }
  double root(double mu) const {
    return (mu * (full_pos - full_neg) + coef_pos - coef_neg) / free_count();
  }
};

void fill_beta(PrbepDual& dual, double mu, std::span<const int> labels) {
  for (std::size_t i = 0; i < dual.beta.size(); ++i) {
    const double s = labels[i];
    dual.beta[i] = clip01((dual.coeffs[i] - s * dual.nu) / mu);
  }
}

}  // namespace

PrbepDual solve_coupled_clip(std::vector<double> coeffs, double mu,
                             std::span<const int> labels) {
  if (!(mu > 0.0)) throw std::invalid_argument("solve_coupled_clip: mu must be positive");
  if (labels.size() != coeffs.size()) {
    throw std::invalid_argument("solve_coupled_clip: labels and coefficients differ in length");
  }
  const std::size_t n = coeffs.size();

  std::vector<Breakpoint> events;
  events.reserve(2 * n);
  SweepState st;
  for (std::size_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::uint32_t>(i);
    if (labels[i] > 0) {
      st.full_pos += 1.0;
      events.push_back({coeffs[i] - mu, idx, Event::PosRelease});
      events.push_back({coeffs[i], idx, Event::PosFloor});
    } else {
      events.push_back({-coeffs[i], idx, Event::NegRelease});
      events.push_back({mu - coeffs[i], idx, Event::NegSaturate});
    }
  }
  std::sort(events.begin(), events.end(),
            [](const Breakpoint& a, const Breakpoint& b) { return a.nu < b.nu; });

  PrbepDual dual;
  dual.coeffs = std::move(coeffs);
  dual.beta.assign(n, 0.0);

  // h is nonincreasing, equals n+ left of every breakpoint and -n- right of
  // them, so the first breakpoint with h <= 0 closes the bracketing segment.
  bool found = false;
  double prev_nu = events.empty() ? 0.0 : events.front().nu;
  for (const auto& e : events) {
    if (st.h(e.nu, mu) <= 0.0) {
      dual.nu = st.free_count() > 0.0 ? std::clamp(st.root(mu), prev_nu, e.nu) : e.nu;
      found = true;
      break;
    }
    const double c = dual.coeffs[e.index];
    switch (e.kind) {
      case Event::PosRelease:
        st.full_pos -= 1.0;
        st.free_pos += 1.0;
        st.coef_pos += c;
        break;
      case Event::PosFloor:
        st.free_pos -= 1.0;
        st.coef_pos -= c;
        break;
      case Event::NegRelease:
        st.free_neg += 1.0;
        st.coef_neg += c;
        break;
      case Event::NegSaturate:
        st.free_neg -= 1.0;
        st.coef_neg -= c;
        st.full_neg += 1.0;
        break;
    }
    prev_nu = e.nu;
  }
  if (!found) dual.nu = prev_nu;  // only reachable when a class is empty

  // The running sums accumulate rounding; one exact Newton pass on the
  // located linear piece restores the coupling to machine precision.
  for (int pass = 0; pass < 2; ++pass) {
    fill_beta(dual, mu, labels);
    double residual = 0.0, slope = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      residual += labels[i] > 0 ? dual.beta[i] : -dual.beta[i];
      if (dual.beta[i] > 0.0 && dual.beta[i] < 1.0) slope += 1.0;
    }
    if (residual == 0.0 || slope == 0.0) break;
    dual.nu += residual * mu / slope;
  }
  fill_beta(dual, mu, labels);
  return dual;
}

RiskEval smoothed_prbep_eval(std::span<const double> w, const Dataset& d, double mu) {
  auto dual = solve_coupled_clip(prbep_linear_coeffs(w, d), mu, d.labels());
  const double n = static_cast<double>(d.size());
  RiskEval out;
  out.gradient.assign(w.size(), 0.0);
  double linear = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double b = dual.beta[i];
    linear += dual.coeffs[i] * b;
    sq += b * b;
    add_scaled(out.gradient, -(2.0 / n) * d.label(i) * b, d.row(i));
  }
  out.value = linear - 0.5 * mu * sq;
  return out;
}

PrbepSeparation separate_prbep(std::span<const double> scores, const Dataset& d) {
  d.require_both_classes();
  if (scores.size() != d.size()) throw std::invalid_argument("separate_prbep: score count mismatch");

  std::vector<std::size_t> pos(d.positives().begin(), d.positives().end());
  std::vector<std::size_t> neg(d.negatives().begin(), d.negatives().end());
  std::stable_sort(pos.begin(), pos.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  std::stable_sort(neg.begin(), neg.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  const double n = static_cast<double>(d.size());
  const double nplus = static_cast<double>(d.n_plus());
  const std::size_t kmax = std::min(pos.size(), neg.size());
  double sum_neg = 0.0, sum_pos = 0.0;
  double best = 0.0;
  std::size_t best_k = 0;
  for (std::size_t k = 1; k <= kmax; ++k) {
    sum_neg += scores[neg[k - 1]];
    sum_pos += scores[pos[k - 1]];
    const double obj = static_cast<double>(k) / nplus + (2.0 / n) * (sum_neg - sum_pos);
    if (obj > best) {
      best = obj;
      best_k = k;
    }
  }

  PrbepSeparation sep;
  sep.value = best;
  sep.counts = {best_k, best_k};
  sep.labeling.assign(d.labels().begin(), d.labels().end());
  for (std::size_t k = 0; k < best_k; ++k) {
    sep.labeling[pos[k]] = -1;
    sep.labeling[neg[k]] = 1;
  }
  return sep;
}

RiskEval exact_prbep_risk(std::span<const double> w, const Dataset& d) {
  const auto s = scores(w, d);
  const auto sep = separate_prbep(s, d);
  const double n = static_cast<double>(d.size());
  RiskEval out;
  out.value = sep.value;
  out.gradient.assign(w.size(), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const int diff = sep.labeling[i] - d.label(i);
    if (diff != 0) add_scaled(out.gradient, diff / n, d.row(i));
  }
  return out;
}

}  // namespace smoothperf
