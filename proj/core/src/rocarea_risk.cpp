#include "smoothperf/rocarea_risk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace smoothperf {

namespace {

std::vector<std::size_t> ascending_order(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  return order;
}

// Unevaluated sum hi + lo carried with error-free transformations. Window
// sums below are small differences of large prefix sums, which plain
// doubles resolve only to about 1e-16 of the prefix magnitude.
struct Compensated {
  double hi = 0.0;
  double lo = 0.0;
};

Compensated two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

Compensated operator+(Compensated x, Compensated y) {
  Compensated s = two_sum(x.hi, y.hi);
  s.lo += x.lo + y.lo;
  return two_sum(s.hi, s.lo);
}

Compensated operator-(Compensated x) { return {-x.hi, -x.lo}; }
Compensated operator-(Compensated x, Compensated y) { return x + (-y); }

Compensated times(Compensated x, double a) {
  const double p = x.hi * a;
  Compensated r{p, std::fma(x.hi, a, -p) + x.lo * a};
  return two_sum(r.hi, r.lo);
}

Compensated exact(double a) { return {a, 0.0}; }

// prefix[k] = sum of the first k values (or of their squares).
std::vector<Compensated> compensated_prefix(const std::vector<double>& sorted, bool squares) {
  std::vector<Compensated> prefix(sorted.size() + 1);
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const double v = sorted[k];
    const Compensated term = squares ? times(exact(v), v) : exact(v);
    prefix[k + 1] = prefix[k] + term;
  }
  return prefix;
}

// prefix[k] = sum of the first k values.
std::vector<double> prefix_sums(const std::vector<double>& sorted, bool squares) {
  std::vector<double> prefix(sorted.size() + 1, 0.0);
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    prefix[k + 1] = prefix[k] + (squares ? sorted[k] * sorted[k] : sorted[k]);
  }
  return prefix;
}

std::vector<double> permute(const std::vector<double>& v, const std::vector<std::size_t>& order) {
  std::vector<double> out(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) out[k] = v[order[k]];
  return out;
}

// scale * (sum_k pos_coef[k] x_pos[k] - sum_k neg_coef[k] x_neg[k]), in one
// pass over the rows in storage order.
std::vector<double> example_combination(const Dataset& d, std::span<const double> pos_coef,
                                        std::span<const double> neg_coef, double scale,
                                        std::size_t dim) {
  std::vector<double> coef(d.size());
  const auto pos = d.positives();
  const auto neg = d.negatives();
  for (std::size_t k = 0; k < pos.size(); ++k) coef[pos[k]] = scale * pos_coef[k];
  for (std::size_t k = 0; k < neg.size(); ++k) coef[neg[k]] = -scale * neg_coef[k];
  std::vector<double> out(dim, 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) add_scaled(out, coef[i], d.row(i));
  return out;
}

}  // namespace

PairPotentials pair_potentials(std::span<const double> w, const Dataset& d, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("pair_potentials: mu must be positive");
  d.require_both_classes();
  const double scale =
      1.0 / (mu * static_cast<double>(d.n_plus()) * static_cast<double>(d.n_minus()));
  const auto s = scores(w, d);
  PairPotentials pp;
  pp.pos.reserve(d.n_plus());
  pp.neg.reserve(d.n_minus());
  for (std::size_t i : d.positives()) pp.pos.push_back((s[i] - 0.25) * scale);
  for (std::size_t j : d.negatives()) pp.neg.push_back((s[j] + 0.25) * scale);
  return pp;
}

GammaSums gamma_sums(const PairPotentials& pp) {
  const auto pos_order = ascending_order(pp.pos);
  const auto neg_order = ascending_order(pp.neg);
  const auto ap = permute(pp.pos, pos_order);
  const auto an = permute(pp.neg, neg_order);
  const auto sum_ap = compensated_prefix(ap, false);
  const auto sum_an = compensated_prefix(an, false);
  const auto sum_an2 = compensated_prefix(an, true);
  const std::size_t np = ap.size(), nn = an.size();

  GammaSums g;
  g.pos.assign(np, 0.0);
  g.neg.assign(nn, 0.0);

  // For a_i ascending, the partners with a_i - a_j > 1 form a growing prefix
  // of the sorted negatives and those with a_i - a_j < -1 a shrinking suffix.
  std::size_t lo = 0, hi = 0;
  for (std::size_t k = 0; k < np; ++k) {
    const double a = ap[k];
    while (lo < nn && a - an[lo] > 1.0) ++lo;
    if (hi < lo) hi = lo;
    while (hi < nn && !(a - an[hi] < -1.0)) ++hi;
    const double ones = static_cast<double>(lo);
    const double minus_ones = static_cast<double>(nn - hi);
    const double width = static_cast<double>(hi - lo);
    const Compensated s1 = sum_an[hi] - sum_an[lo];
    const Compensated s2 = sum_an2[hi] - sum_an2[lo];
    // sum over the window of (a - a_j) and of (a - a_j)^2
    const Compensated lin = times(exact(a), width) - s1;
    const Compensated quad = times(times(exact(a), a), width) - times(s1, 2.0 * a) + s2;
    const double gamma = ones - minus_ones + lin.hi + lin.lo;
    g.pos[pos_order[k]] = gamma;
    g.sum_beta += gamma;
    g.sum_beta_sq += ones + minus_ones + (quad.hi + quad.lo);
  }

  // Mirror walk for the columns: for a_j ascending, positives with
  // a_i - a_j < -1 form a growing prefix, those with a_i - a_j > 1 a suffix.
  lo = 0;
  hi = 0;
  for (std::size_t k = 0; k < nn; ++k) {
    const double a = an[k];
    while (lo < np && ap[lo] - a < -1.0) ++lo;
    if (hi < lo) hi = lo;
    while (hi < np && !(ap[hi] - a > 1.0)) ++hi;
    const double minus_ones = static_cast<double>(lo);
    const double ones = static_cast<double>(np - hi);
    const double width = static_cast<double>(hi - lo);
    const Compensated lin = (sum_ap[hi] - sum_ap[lo]) - times(exact(a), width);
    g.neg[neg_order[k]] = ones - minus_ones + (lin.hi + lin.lo);
  }
  return g;
}

RiskEval smoothed_rocarea_eval(std::span<const double> w, const Dataset& d, double mu) {
  const auto pp = pair_potentials(w, d, mu);
  const auto g = gamma_sums(pp);
  const double m = static_cast<double>(d.n_plus()) * static_cast<double>(d.n_minus());

  double weighted = 0.0;
  for (std::size_t k = 0; k < pp.pos.size(); ++k) weighted += pp.pos[k] * g.pos[k];
  for (std::size_t k = 0; k < pp.neg.size(); ++k) weighted -= pp.neg[k] * g.neg[k];

  RiskEval out;
  out.value = 0.5 + mu * weighted - 0.5 * mu * g.sum_beta_sq;
  out.gradient = example_combination(d, g.pos, g.neg, 1.0 / m, w.size());
  return out;
}

RiskEval exact_rocarea_risk(std::span<const double> w, const Dataset& d) {
  d.require_both_classes();
  const auto pos = d.positives();
  const auto neg = d.negatives();
  const auto s_all = scores(w, d);
  std::vector<double> sp, sn;
  sp.reserve(pos.size());
  sn.reserve(neg.size());
  for (std::size_t i : pos) sp.push_back(s_all[i]);
  for (std::size_t j : neg) sn.push_back(s_all[j]);

  const auto pos_order = ascending_order(sp);
  const auto neg_order = ascending_order(sn);
  const auto sps = permute(sp, pos_order);
  const auto sns = permute(sn, neg_order);
  const auto sum_sn = prefix_sums(sns, false);
  const std::size_t np = sps.size(), nn = sns.size();
  const double m = static_cast<double>(np) * static_cast<double>(nn);

  std::vector<double> kappa_pos(np), kappa_neg(nn);
  double total = 0.0;
  // Row i: z*_ij = +1 exactly for the prefix of sorted negatives with
  // s_i - s_j >= 1/2; those pairs contribute u_ij, the rest 1 - u_ij.
  std::size_t plus = 0;
  for (std::size_t k = 0; k < np; ++k) {
    const double s = sps[k];
    while (plus < nn && s - sns[plus] >= 0.5) ++plus;
    const double cp = static_cast<double>(plus);
    const double cm = static_cast<double>(nn - plus);
    total += cp * s - sum_sn[plus] + cm * (1.0 - s) + (sum_sn[nn] - sum_sn[plus]);
    kappa_pos[pos_order[k]] = cp - cm;
  }
  // Column j: z*_ij = +1 for the suffix of sorted positives with s_i - s_j >= 1/2.
  std::size_t start = 0;
  for (std::size_t k = 0; k < nn; ++k) {
    const double s = sns[k];
    while (start < np && !(sps[start] - s >= 0.5)) ++start;
    const double cp = static_cast<double>(np - start);
    const double cm = static_cast<double>(start);
    kappa_neg[neg_order[k]] = cp - cm;
  }

  RiskEval out;
  out.value = total / m;
  out.gradient = example_combination(d, kappa_pos, kappa_neg, 1.0 / m, w.size());
  return out;
}

}  // namespace smoothperf
